#include "fdaprog/prognosis.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fdaprog/error.hpp"
#include "fdaprog/registration.hpp"

namespace fdaprog::prognosis {

namespace {

const char* kModule = "prognosis";

int round_half_up(double x) { return static_cast<int>(std::floor(x + 0.5)); }

// Divide every engine's row block by the pointwise mean over the pool
// (all entries except the last, which is the test engine).
void normalize_by_pool_mean(std::vector<Eigen::MatrixXd>& values, const std::vector<double>& grid_labels,
                            const std::vector<std::string>* sensor_names) {
    const size_t n_pool = values.size() - 1;
    const int J = static_cast<int>(values[0].rows());
    const int G = static_cast<int>(values[0].cols());
    for (int j = 0; j < J; ++j) {
        for (int g = 0; g < G; ++g) {
            double mean = 0.0;
            for (size_t m = 0; m < n_pool; ++m) mean += values[m](j, g);
            mean /= static_cast<double>(n_pool);
            if (std::abs(mean) < 1e-12) {
                std::string sensor = sensor_names ? (*sensor_names)[static_cast<size_t>(j)]
                                                  : "#" + std::to_string(j + 1);
                throw NumericalError(kModule, "degenerate normalization: pool mean of sensor " + sensor +
                                                  " vanishes at cycle " + std::to_string(grid_labels[static_cast<size_t>(g)]));
            }
            for (auto& mat : values) mat(j, g) /= mean;
        }
    }
}

Eigen::MatrixXd eval_on_cycles(const mfpca::EngineCurves& engine, const std::vector<double>& grid) {
    const int J = static_cast<int>(engine.curves.size());
    Eigen::MatrixXd out(J, static_cast<int>(grid.size()));
    for (int j = 0; j < J; ++j)
        for (size_t g = 0; g < grid.size(); ++g)
            out(j, static_cast<int>(g)) =
                registration::unregister_eval(engine.curves[static_cast<size_t>(j)], engine.endpoint_cycle, grid[g]);
    return out;
}

Eigen::MatrixXd eval_on_fractions(const mfpca::EngineCurves& engine, const std::vector<double>& fractions) {
    const int J = static_cast<int>(engine.curves.size());
    Eigen::MatrixXd out(J, static_cast<int>(fractions.size()));
    for (int j = 0; j < J; ++j)
        for (size_t g = 0; g < fractions.size(); ++g)
            out(j, static_cast<int>(g)) = smoothing::eval_curve(engine.curves[static_cast<size_t>(j)], fractions[g]);
    return out;
}

}  // namespace

NormalizedGrid normalize_at_grid(const std::vector<const mfpca::EngineCurves*>& pool,
                                 const mfpca::EngineCurves& test, const std::vector<double>& grid) {
    if (pool.empty()) throw DomainError(kModule, "normalize_at_grid: empty pool");
    if (grid.empty()) throw DomainError(kModule, "normalize_at_grid: empty grid");
    NormalizedGrid out;
    out.grid = grid;
    out.values.reserve(pool.size() + 1);
    for (const auto* member : pool) out.values.push_back(eval_on_cycles(*member, grid));
    out.values.push_back(eval_on_cycles(test, grid));
    normalize_by_pool_mean(out.values, grid, nullptr);
    return out;
}

double multivariate_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols())
        throw DomainError(kModule, "multivariate_distance: shape mismatch");
    double sum = 0.0;
    for (int g = 0; g < a.cols(); ++g) sum += (a.col(g) - b.col(g)).norm();
    return sum / static_cast<double>(a.cols());
}

NeighborRanking rank_neighbors(const mfpca::EngineCurves& test, classify::Group test_group,
                               const mfpca::MultivariateFunctionalSample& train,
                               const std::vector<classify::Group>& train_labels, const Options& options) {
    if (train.engines.size() != train_labels.size())
        throw DomainError(kModule, "rank_neighbors: label count does not match training sample");

    NeighborRanking ranking;
    ranking.test_unit_id = test.unit_id;
    ranking.test_endpoint = test.endpoint_cycle;

    auto collect = [&](bool use_group) {
        std::vector<const mfpca::EngineCurves*> pool;
        ranking.pool_unit_ids.clear();
        ranking.pool_endpoints.clear();
        for (size_t i = 0; i < train.engines.size(); ++i) {
            const auto& eng = train.engines[i];
            if (eng.endpoint_cycle <= test.endpoint_cycle) continue;
            if (use_group && train_labels[i] != test_group) continue;
            pool.push_back(&eng);
            ranking.pool_unit_ids.push_back(eng.unit_id);
            ranking.pool_endpoints.push_back(eng.endpoint_cycle);
        }
        return pool;
    };

    std::vector<const mfpca::EngineCurves*> pool = collect(true);
    if (pool.empty() && options.fallback_drop_group) {
        pool = collect(false);
        ranking.group_filter_dropped = true;
    }
    if (pool.empty())
        throw DomainError(kModule, "test unit " + std::to_string(test.unit_id) +
                                       ": no eligible training engine outlives the observed " +
                                       std::to_string(test.endpoint_cycle) +
                                       " cycles; consider prognosis.fallback_drop_group");

    std::vector<Eigen::MatrixXd> values;
    values.reserve(pool.size() + 1);
    std::vector<double> grid(static_cast<size_t>(test.endpoint_cycle));
    if (options.scale == ComparisonScale::kOriginal) {
        for (size_t t = 0; t < grid.size(); ++t) grid[t] = static_cast<double>(t + 1);
        for (const auto* member : pool) values.push_back(eval_on_cycles(*member, grid));
        values.push_back(eval_on_cycles(test, grid));
    } else {
        // ablation mode: compare registered shapes at shared life fractions
        for (size_t t = 0; t < grid.size(); ++t)
            grid[t] = static_cast<double>(t + 1) / static_cast<double>(test.endpoint_cycle);
        for (const auto* member : pool) values.push_back(eval_on_fractions(*member, grid));
        values.push_back(eval_on_fractions(test, grid));
    }
    normalize_by_pool_mean(values, grid, &train.sensor_names);

    const Eigen::MatrixXd& test_values = values.back();
    ranking.distances.resize(pool.size());
    for (size_t m = 0; m < pool.size(); ++m)
        ranking.distances[m] = multivariate_distance(values[m], test_values);

    ranking.order.resize(pool.size());
    for (size_t m = 0; m < pool.size(); ++m) ranking.order[m] = static_cast<int>(m);
    std::sort(ranking.order.begin(), ranking.order.end(), [&](int a, int b) {
        if (ranking.distances[static_cast<size_t>(a)] != ranking.distances[static_cast<size_t>(b)])
            return ranking.distances[static_cast<size_t>(a)] < ranking.distances[static_cast<size_t>(b)];
        return ranking.pool_unit_ids[static_cast<size_t>(a)] < ranking.pool_unit_ids[static_cast<size_t>(b)];
    });
    return ranking;
}

Trajectory predict_trajectories(const NeighborRanking& ranking, const mfpca::MultivariateFunctionalSample& train,
                                int k, int horizon) {
    if (k < 1 || k > static_cast<int>(ranking.order.size()))
        throw DomainError(kModule, "predict_trajectories: k=" + std::to_string(k) + " outside pool size " +
                                       std::to_string(ranking.order.size()));

    std::vector<const mfpca::EngineCurves*> top;
    for (int r = 0; r < k; ++r) {
        int unit = ranking.pool_unit_ids[static_cast<size_t>(ranking.order[static_cast<size_t>(r)])];
        for (const auto& eng : train.engines)
            if (eng.unit_id == unit) {
                top.push_back(&eng);
                break;
            }
    }
    if (static_cast<int>(top.size()) != k) throw DomainError(kModule, "predict_trajectories: neighbor not in sample");

    const int J = train.sensors();
    Trajectory traj;
    std::vector<Eigen::VectorXd> cols;
    for (int t = ranking.test_endpoint; t <= horizon; ++t) {
        Eigen::VectorXd sum = Eigen::VectorXd::Zero(J);
        int alive = 0;
        for (const auto* nb : top) {
            if (nb->endpoint_cycle < t) continue;  // neighbor already failed
            for (int j = 0; j < J; ++j)
                sum(j) += registration::unregister_eval(nb->curves[static_cast<size_t>(j)], nb->endpoint_cycle,
                                                        static_cast<double>(t));
            ++alive;
        }
        if (alive == 0) break;
        traj.cycles.push_back(t);
        cols.push_back(sum / static_cast<double>(alive));
    }
    traj.values.resize(J, static_cast<int>(cols.size()));
    for (size_t c = 0; c < cols.size(); ++c) traj.values.col(static_cast<int>(c)) = cols[c];
    return traj;
}

int alarm_point(int predicted_failure_mean, double fraction) {
    if (!(fraction > 0.0 && fraction < 1.0)) throw DomainError(kModule, "alarm fraction must be in (0,1)");
    return round_half_up(fraction * static_cast<double>(predicted_failure_mean));
}

RulPrediction predict_rul(const NeighborRanking& ranking, const mfpca::MultivariateFunctionalSample& train,
                          const Options& options) {
    const int pool_size = static_cast<int>(ranking.order.size());
    if (options.k < 1 || options.k > pool_size)
        throw DomainError(kModule, "predict_rul: k=" + std::to_string(options.k) + " outside pool size " +
                                       std::to_string(pool_size));
    const int k = options.k;

    std::vector<int> endpoints(static_cast<size_t>(k));
    for (int r = 0; r < k; ++r)
        endpoints[static_cast<size_t>(r)] =
            ranking.pool_endpoints[static_cast<size_t>(ranking.order[static_cast<size_t>(r)])];

    double mean = 0.0;
    for (int e : endpoints) mean += static_cast<double>(e);
    mean /= static_cast<double>(k);

    std::vector<int> sorted(endpoints);
    std::sort(sorted.begin(), sorted.end());
    double median = k % 2 == 1 ? static_cast<double>(sorted[static_cast<size_t>(k / 2)])
                               : 0.5 * static_cast<double>(sorted[static_cast<size_t>(k / 2 - 1)] +
                                                           sorted[static_cast<size_t>(k / 2)]);

    RulPrediction pred;
    pred.test_unit_id = ranking.test_unit_id;
    pred.observed_endpoint = ranking.test_endpoint;
    pred.k = k;
    pred.predicted_failure_mean = round_half_up(mean);
    pred.predicted_failure_median = round_half_up(median);
    pred.rul_mean = pred.predicted_failure_mean - pred.observed_endpoint;
    pred.rul_median = pred.predicted_failure_median - pred.observed_endpoint;

    int horizon = options.aggregate_median ? pred.predicted_failure_median : pred.predicted_failure_mean;
    pred.trajectories = predict_trajectories(ranking, train, k, horizon);

    pred.alarm_cycle = alarm_point(pred.predicted_failure_mean, options.alarm_fraction);
    pred.alarm_already_passed = pred.alarm_cycle <= pred.observed_endpoint;
    return pred;
}

DerivativeProfile second_derivative_profile(const mfpca::MultivariateFunctionalSample& train,
                                            const std::vector<classify::Group>& labels, int grid_size) {
    if (train.engines.size() != labels.size())
        throw DomainError(kModule, "second_derivative_profile: label count mismatch");
    if (grid_size < 2) throw DomainError(kModule, "second_derivative_profile: grid too small");

    const int J = train.sensors();
    DerivativeProfile profile;
    profile.grid.resize(static_cast<size_t>(grid_size));
    for (int g = 0; g < grid_size; ++g)
        profile.grid[static_cast<size_t>(g)] = static_cast<double>(g) / static_cast<double>(grid_size - 1);
    profile.low.setZero(J, grid_size);
    profile.high.setZero(J, grid_size);

    int n_low = 0, n_high = 0;
    for (size_t i = 0; i < train.engines.size(); ++i) {
        bool is_low = labels[i] == classify::Group::kLow;
        (is_low ? n_low : n_high) += 1;
        Eigen::MatrixXd& target = is_low ? profile.low : profile.high;
        for (int j = 0; j < J; ++j)
            for (int g = 0; g < grid_size; ++g)
                target(j, g) += smoothing::eval_curve(train.engines[i].curves[static_cast<size_t>(j)],
                                                      profile.grid[static_cast<size_t>(g)], 2);
    }
    if (n_low == 0 || n_high == 0)
        throw DomainError(kModule, "second_derivative_profile: both groups must be present");
    profile.low /= static_cast<double>(n_low);
    profile.high /= static_cast<double>(n_high);
    return profile;
}

}  // namespace fdaprog::prognosis
