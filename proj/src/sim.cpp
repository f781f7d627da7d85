#include "fdaprog/sim.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "fdaprog/error.hpp"

namespace fdaprog::sim {

namespace {

// mt19937_64 output is fully specified by the standard; the distributions
// below are hand-rolled so generated files are identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform() {  // (0,1)
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1p-53;
    }

    double normal() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double theta = 2.0 * std::numbers::pi * u2;
        spare_ = r * std::sin(theta);
        has_spare_ = true;
        return r * std::cos(theta);
    }

    int below(int n) { return std::min(static_cast<int>(uniform() * n), n - 1); }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

struct Shape {
    // polynomial coefficients, constant term first
    static constexpr int kDegreeBound = 6;
    double c[kDegreeBound] = {0, 0, 0, 0, 0, 0};

    double operator()(double v) const {
        double out = 0.0;
        for (int i = kDegreeBound - 1; i >= 0; --i) out = out * v + c[i];
        return out;
    }
};

double inner(const Shape& a, const Shape& b) {
    // exact integral of the polynomial product over [0,1]
    double out = 0.0;
    for (int i = 0; i < Shape::kDegreeBound; ++i)
        for (int j = 0; j < Shape::kDegreeBound; ++j)
            out += a.c[i] * b.c[j] / static_cast<double>(i + j + 1);
    return out;
}

Shape axpy(const Shape& a, double s, const Shape& b) {
    Shape out = a;
    for (int i = 0; i < Shape::kDegreeBound; ++i) out.c[i] -= s * b.c[i];
    return out;
}

struct SensorPlan {
    enum class Role { kConstant, kPerEngineConstant, kTwoValued, kInconsistent, kInformative };
    Role role;
    double base;
    double amplitude;  // trend magnitude for informative, spread otherwise
    int trend_sign;    // informative only
};

// Column order of Table-2-style unit files.
const SensorPlan kPlans[ingest::kSensorCount] = {
    {SensorPlan::Role::kConstant, 518.67, 0.0, 0},          // T2
    {SensorPlan::Role::kInformative, 641.82, 1.70, +1},     // T24
    {SensorPlan::Role::kInformative, 1589.70, 11.0, +1},    // T30
    {SensorPlan::Role::kInformative, 1400.60, 25.0, +1},    // T50
    {SensorPlan::Role::kConstant, 14.62, 0.0, 0},           // P2
    {SensorPlan::Role::kConstant, 21.61, 0.0, 0},           // P15
    {SensorPlan::Role::kInformative, 554.36, 4.0, -1},      // P30
    {SensorPlan::Role::kPerEngineConstant, 2388.02, 0.08, 0},  // Nf
    {SensorPlan::Role::kInconsistent, 9055.0, 12.0, 0},     // Nc
    {SensorPlan::Role::kConstant, 1.30, 0.0, 0},            // epr
    {SensorPlan::Role::kInformative, 47.35, 1.10, -1},      // Ps30
    {SensorPlan::Role::kInformative, 521.72, 2.70, +1},     // phi
    {SensorPlan::Role::kPerEngineConstant, 2388.08, 0.08, 0},  // NRf
    {SensorPlan::Role::kInconsistent, 8128.0, 9.0, 0},      // NRc
    {SensorPlan::Role::kInformative, 8.419, 0.12, +1},      // BPR
    {SensorPlan::Role::kConstant, 0.03, 0.0, 0},            // farB
    {SensorPlan::Role::kTwoValued, 390.0, 6.0, 0},          // htBleed
    {SensorPlan::Role::kConstant, 2388.0, 0.0, 0},          // Nf_dmd
    {SensorPlan::Role::kConstant, 100.0, 0.0, 0},           // PCNfR_dmd
    {SensorPlan::Role::kInformative, 38.95, 0.55, -1},      // W31
    {SensorPlan::Role::kInformative, 23.38, 0.33, -1},      // W32
};

struct LatentBasis {
    Shape trend;  // shared degradation shape, 0 at v=0, 1 at v=1
    Shape g;      // mode 1: initial-offset direction, unit integrated square
    Shape e;      // mode 2: mid-life bump, e(0)=0, orthogonal to g
    Shape r;      // mode 3: cubic remainder, orthogonal to g and e
    double amp_norm;  // sqrt(sum of squared informative amplitudes)
};

LatentBasis make_latent_basis() {
    LatentBasis lb;
    // degradation accelerates late in life; early prefixes are nearly flat
    lb.trend = Shape{{0.0, 0.1, 0.0, 0.0, 0.0, 0.9}};
    lb.g = Shape{{1.0, 0.25, 0.0, 0.0, 0.0, 0.0}};
    Shape v2{{0.0, 0.0, 1.0, 0.0, 0.0, 0.0}};
    Shape v1{{0.0, 1.0, 0.0, 0.0, 0.0, 0.0}};
    // e = v^2 - c v with <g, e> = 0 keeps the second mode away from v=0
    double c = inner(lb.g, v2) / inner(lb.g, v1);
    lb.e = axpy(v2, c, v1);
    Shape v3{{0.0, 0.0, 0.0, 1.0, 0.0, 0.0}};
    lb.r = axpy(v3, inner(v3, lb.g) / inner(lb.g, lb.g), lb.g);
    lb.r = axpy(lb.r, inner(lb.r, lb.e) / inner(lb.e, lb.e), lb.e);

    double amp2 = 0.0;
    for (const auto& plan : kPlans)
        if (plan.role == SensorPlan::Role::kInformative) amp2 += plan.amplitude * plan.amplitude;
    lb.amp_norm = std::sqrt(amp2);

    auto normalize = [&](Shape& s) {
        double norm = std::sqrt(inner(s, s)) * lb.amp_norm;
        for (double& ci : s.c) ci /= norm;
    };
    normalize(lb.g);
    normalize(lb.e);
    normalize(lb.r);
    return lb;
}

struct EngineLatent {
    double score;   // mode-1 latent, the target of the pipeline's MFPC-1
    double mode2;
    double mode3;
    int lifetime;
    bool low;
};

std::vector<EngineLatent> draw_fleet(const SimConfig& cfg, int count, Rng& rng) {
    int n_low = static_cast<int>(std::lround(cfg.low_fraction * count));
    n_low = std::clamp(n_low, 1, count - 1);
    std::vector<bool> low_flags(static_cast<size_t>(count), false);
    for (int i = 0; i < n_low; ++i) low_flags[static_cast<size_t>(i)] = true;
    for (int i = count - 1; i > 0; --i) std::swap(low_flags[static_cast<size_t>(i)], low_flags[static_cast<size_t>(rng.below(i + 1))]);

    std::vector<EngineLatent> fleet(static_cast<size_t>(count));
    std::vector<size_t> low_idx, high_idx;
    for (size_t i = 0; i < fleet.size(); ++i) {
        fleet[i].low = low_flags[i];
        fleet[i].score = rng.normal();
        fleet[i].mode2 = cfg.mode2_sd * rng.normal();
        fleet[i].mode3 = cfg.mode3_sd * rng.normal();
        (low_flags[i] ? low_idx : high_idx).push_back(i);
    }
    // standardize each group's draws so its sample mean/sd hit the targets
    auto standardize = [&](const std::vector<size_t>& idx, double mean, double sd) {
        if (idx.size() < 2) {
            for (size_t i : idx) fleet[i].score = mean;
            return;
        }
        double m = 0.0;
        for (size_t i : idx) m += fleet[i].score;
        m /= static_cast<double>(idx.size());
        double ss = 0.0;
        for (size_t i : idx) ss += (fleet[i].score - m) * (fleet[i].score - m);
        double s = std::sqrt(ss / static_cast<double>(idx.size() - 1));
        for (size_t i : idx) fleet[i].score = mean + (fleet[i].score - m) * (sd / s);
    };
    standardize(low_idx, cfg.mean_low, cfg.score_sd);
    standardize(high_idx, cfg.mean_high, cfg.score_sd);

    for (auto& eng : fleet) {
        double expected = cfg.life_base + cfg.life_slope * eng.score;
        double noise = cfg.life_mode2_slope * eng.mode2 + cfg.life_sd * rng.normal();
        noise = std::clamp(noise * expected / cfg.life_base, cfg.life_noise_floor, cfg.life_noise_cap);
        eng.lifetime = std::clamp(static_cast<int>(std::lround(expected + noise)), cfg.life_min, cfg.life_max);
    }
    return fleet;
}

ingest::RawEngineSeries realize_engine(const SimConfig& cfg, const LatentBasis& lb, const EngineLatent& latent,
                                       int unit_id, int observed_cycles, Rng& rng) {
    ingest::RawEngineSeries series;
    series.unit_id = unit_id;
    const int T = latent.lifetime;
    series.cycles.resize(static_cast<size_t>(observed_cycles));
    for (int t = 1; t <= observed_cycles; ++t) series.cycles[static_cast<size_t>(t - 1)] = t;

    for (auto& setting : series.op_settings) setting.resize(static_cast<size_t>(observed_cycles));
    for (int t = 0; t < observed_cycles; ++t) {
        series.op_settings[0][static_cast<size_t>(t)] = std::round(rng.normal() * 0.0022 * 1e4) / 1e4;
        series.op_settings[1][static_cast<size_t>(t)] = std::round(rng.normal() * 0.0003 * 1e4) / 1e4;
        series.op_settings[2][static_cast<size_t>(t)] = 100.0;
    }

    for (int s = 0; s < ingest::kSensorCount; ++s) {
        const SensorPlan& plan = kPlans[s];
        auto& y = series.sensors[static_cast<size_t>(s)];
        y.resize(static_cast<size_t>(observed_cycles));
        switch (plan.role) {
            case SensorPlan::Role::kConstant:
                std::fill(y.begin(), y.end(), plan.base);
                break;
            case SensorPlan::Role::kPerEngineConstant: {
                double value = plan.base + std::round(rng.uniform() * plan.amplitude * 100.0) / 100.0;
                std::fill(y.begin(), y.end(), value);
                break;
            }
            case SensorPlan::Role::kTwoValued: {
                double lo = plan.base + std::floor(rng.uniform() * plan.amplitude);
                for (auto& v : y) v = lo + (rng.uniform() < 0.45 ? 0.0 : 1.0);
                break;
            }
            case SensorPlan::Role::kInconsistent: {
                double offset = (rng.uniform() - 0.5) * 30.0;
                double slope = (rng.uniform() < 0.5 ? -1.0 : 1.0) * plan.amplitude;
                for (int t = 1; t <= observed_cycles; ++t) {
                    double v = static_cast<double>(t) / static_cast<double>(T);
                    y[static_cast<size_t>(t - 1)] = plan.base + offset + slope * v + 2.0 * rng.normal();
                }
                break;
            }
            case SensorPlan::Role::kInformative: {
                double sign = static_cast<double>(plan.trend_sign);
                double noise_sd = cfg.noise_scale * plan.amplitude;
                for (int t = 1; t <= observed_cycles; ++t) {
                    double v = static_cast<double>(t) / static_cast<double>(T);
                    double value = plan.base + sign * plan.amplitude * lb.trend(v) +
                                   latent.score * plan.amplitude * lb.g(v) +
                                   latent.mode2 * plan.amplitude * lb.e(v) +
                                   latent.mode3 * plan.amplitude * lb.r(v) + noise_sd * rng.normal();
                    y[static_cast<size_t>(t - 1)] = std::round(value * 1e4) / 1e4;
                }
                break;
            }
        }
    }
    return series;
}

}  // namespace

SimData generate(const SimConfig& cfg) {
    if (cfg.n_train < 4 || cfg.n_test < 1) throw DomainError("sim", "fleet sizes too small");
    Rng rng(cfg.seed);
    LatentBasis lb = make_latent_basis();

    SimData data;
    std::vector<EngineLatent> train_latent = draw_fleet(cfg, cfg.n_train, rng);
    for (int i = 0; i < cfg.n_train; ++i) {
        const auto& latent = train_latent[static_cast<size_t>(i)];
        data.train.push_back(realize_engine(cfg, lb, latent, i + 1, latent.lifetime, rng));
    }

    // every test engine must be outlivable by at least one engine of each
    // training wear group, or the eligible pool can vanish downstream
    int max_low = 0, max_high = 0;
    for (const auto& latent : train_latent) {
        if (latent.low) max_low = std::max(max_low, latent.lifetime);
        else max_high = std::max(max_high, latent.lifetime);
    }
    int observed_cap = std::min(max_low, max_high) - 10;

    std::vector<EngineLatent> test_latent = draw_fleet(cfg, cfg.n_test, rng);
    for (int i = 0; i < cfg.n_test; ++i) {
        const auto& latent = test_latent[static_cast<size_t>(i)];
        int rul = cfg.rul_min + rng.below(cfg.rul_max - cfg.rul_min + 1);
        int observed = latent.lifetime - rul;
        observed = std::min(observed, observed_cap);
        observed = std::max(observed, cfg.min_observed);
        if (observed >= latent.lifetime) observed = latent.lifetime - 1;
        data.test.push_back(realize_engine(cfg, lb, latent, i + 1, observed, rng));
        data.rul.push_back(latent.lifetime - observed);
    }
    return data;
}

void write_files(const SimData& data, const std::string& dir) {
    std::filesystem::create_directories(dir);
    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream out(dir + "/" + name, std::ios::binary);
        if (!out) throw Error("sim", "cannot write " + dir + "/" + name);
        out << content;
    };
    write("train.txt", ingest::serialize_unit_series(data.train));
    write("test.txt", ingest::serialize_unit_series(data.test));
    std::string rul_text;
    for (int r : data.rul) rul_text += std::to_string(r) + "\n";
    write("rul.txt", rul_text);
}

}  // namespace fdaprog::sim
