#include "fdaprog/classify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fdaprog/error.hpp"

namespace fdaprog::classify {

namespace {

const char* kModule = "classify";
constexpr double kSdFloor = 1e-6;
constexpr double kLogTol = 1e-10;
constexpr int kMaxIter = 500;

double log_normal_pdf(double x, double mean, double sd) {
    double z = (x - mean) / sd;
    return -0.5 * z * z - std::log(sd) - 0.9189385332046727;  // log(sqrt(2*pi))
}

double quantile_sorted(const std::vector<double>& sorted, double p) {
    const size_t n = sorted.size();
    double pos = p * static_cast<double>(n - 1);
    size_t lo = static_cast<size_t>(pos);
    size_t hi = std::min(lo + 1, n - 1);
    double frac = pos - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

}  // namespace

double Mixture2::posterior_high(double x) const {
    double ll = std::log(weight_low) + log_normal_pdf(x, mean_low, sd);
    double lh = std::log(1.0 - weight_low) + log_normal_pdf(x, mean_high, sd);
    double m = std::max(ll, lh);
    double denom = std::exp(ll - m) + std::exp(lh - m);
    return std::exp(lh - m) / denom;
}

Mixture2 fit_mixture(const std::vector<double>& scores) {
    const size_t n = scores.size();
    if (n < 4) throw DomainError(kModule, "fit_mixture needs at least 4 scores, got " + std::to_string(n));
    std::vector<double> sorted(scores);
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back())
        throw NumericalError(kModule, "fit_mixture: degenerate sample (all scores identical)");

    double mean = 0.0;
    for (double x : scores) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0.0;
    for (double x : scores) ss += (x - mean) * (x - mean);
    double sample_sd = std::sqrt(ss / static_cast<double>(n - 1));

    Mixture2 mix;
    mix.mean_low = quantile_sorted(sorted, 0.25);
    mix.mean_high = quantile_sorted(sorted, 0.75);
    mix.sd = std::max(sample_sd, kSdFloor);
    mix.weight_low = 0.5;
    mix.log_likelihood = -std::numeric_limits<double>::infinity();

    std::vector<double> resp(n);  // responsibility of the low component
    for (int iter = 1; iter <= kMaxIter; ++iter) {
        double loglik = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double ll = std::log(mix.weight_low) + log_normal_pdf(scores[i], mix.mean_low, mix.sd);
            double lh = std::log(1.0 - mix.weight_low) + log_normal_pdf(scores[i], mix.mean_high, mix.sd);
            double m = std::max(ll, lh);
            double sum = std::exp(ll - m) + std::exp(lh - m);
            loglik += m + std::log(sum);
            resp[i] = std::exp(ll - m) / sum;
        }
        double gain = loglik - mix.log_likelihood;
        if (iter > 1 && gain < -1e-8 * (1.0 + std::abs(loglik)))
            throw NumericalError(kModule, "EM log-likelihood decreased at iteration " + std::to_string(iter));
        mix.log_likelihood = loglik;
        mix.iterations = iter;
        if (iter > 1 && gain < kLogTol) break;

        double r_sum = 0.0, x_low = 0.0, x_high = 0.0;
        for (size_t i = 0; i < n; ++i) {
            r_sum += resp[i];
            x_low += resp[i] * scores[i];
            x_high += (1.0 - resp[i]) * scores[i];
        }
        if (r_sum < 1e-12 || r_sum > static_cast<double>(n) - 1e-12)
            throw NumericalError(kModule, "fit_mixture: a component collapsed to zero weight");
        mix.mean_low = x_low / r_sum;
        mix.mean_high = x_high / (static_cast<double>(n) - r_sum);
        double var = 0.0;
        for (size_t i = 0; i < n; ++i) {
            double dl = scores[i] - mix.mean_low;
            double dh = scores[i] - mix.mean_high;
            var += resp[i] * dl * dl + (1.0 - resp[i]) * dh * dh;
        }
        mix.sd = std::max(std::sqrt(var / static_cast<double>(n)), kSdFloor);
        mix.weight_low = r_sum / static_cast<double>(n);
    }

    if (mix.mean_low > mix.mean_high) {
        std::swap(mix.mean_low, mix.mean_high);
        mix.weight_low = 1.0 - mix.weight_low;
    }
    if (mix.mean_low == mix.mean_high)
        throw NumericalError(kModule, "fit_mixture: components collapsed to one mean");
    return mix;
}

std::vector<Group> assign_groups(const Mixture2& mix, const std::vector<double>& scores) {
    std::vector<Group> labels(scores.size());
    for (size_t i = 0; i < scores.size(); ++i)
        labels[i] = mix.posterior_high(scores[i]) >= 0.5 ? Group::kHigh : Group::kLow;
    return labels;
}

Cutoff youden_cutoff(const std::vector<double>& values, const std::vector<Group>& labels) {
    if (values.size() != labels.size()) throw DomainError(kModule, "youden_cutoff: size mismatch");
    size_t n_high = 0, n_low = 0;
    for (Group g : labels) (g == Group::kHigh ? n_high : n_low) += 1;
    if (n_high == 0 || n_low == 0) throw DomainError(kModule, "youden_cutoff: both classes must be present");

    std::vector<double> sorted(values);
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());

    std::vector<double> pooled(values);
    std::sort(pooled.begin(), pooled.end());
    double median = pooled.size() % 2 == 1 ? pooled[pooled.size() / 2]
                                           : 0.5 * (pooled[pooled.size() / 2 - 1] + pooled[pooled.size() / 2]);

    if (sorted.size() < 2) return Cutoff{sorted.front(), +1, 0.0};

    Cutoff best;
    bool have = false;
    for (size_t i = 0; i + 1 < sorted.size(); ++i) {
        double c = 0.5 * (sorted[i] + sorted[i + 1]);
        for (int dir : {+1, -1}) {
            size_t hit_high = 0, hit_low = 0;
            for (size_t k = 0; k < values.size(); ++k) {
                bool votes_high = dir > 0 ? values[k] >= c : values[k] <= c;
                if (labels[k] == Group::kHigh && votes_high) ++hit_high;
                if (labels[k] == Group::kLow && !votes_high) ++hit_low;
            }
            double j = static_cast<double>(hit_high) / static_cast<double>(n_high) +
                       static_cast<double>(hit_low) / static_cast<double>(n_low) - 1.0;
            bool better = !have || j > best.youden ||
                          (j == best.youden && std::abs(c - median) < std::abs(best.value - median)) ||
                          (j == best.youden && std::abs(c - median) == std::abs(best.value - median) &&
                           c < best.value);
            if (better) {
                best = Cutoff{c, dir, j};
                have = true;
            }
        }
    }
    return best;
}

GroupModel build_group_model(const Eigen::MatrixXd& train_initial, const std::vector<Group>& labels) {
    const int n = static_cast<int>(train_initial.rows());
    const int J = static_cast<int>(train_initial.cols());
    if (static_cast<size_t>(n) != labels.size()) throw DomainError(kModule, "build_group_model: size mismatch");

    GroupModel model;
    model.train_labels = labels;
    model.low_mean_initial.setZero(J);
    model.high_mean_initial.setZero(J);
    model.initial_sd.setZero(J);

    int n_low = 0, n_high = 0;
    for (int i = 0; i < n; ++i) {
        if (labels[static_cast<size_t>(i)] == Group::kLow) {
            model.low_mean_initial += train_initial.row(i).transpose();
            ++n_low;
        } else {
            model.high_mean_initial += train_initial.row(i).transpose();
            ++n_high;
        }
    }
    if (n_low == 0 || n_high == 0) throw DomainError(kModule, "build_group_model: both groups must be present");
    model.low_mean_initial /= static_cast<double>(n_low);
    model.high_mean_initial /= static_cast<double>(n_high);

    for (int j = 0; j < J; ++j) {
        double mean = train_initial.col(j).mean();
        double ss = (train_initial.col(j).array() - mean).square().sum();
        model.initial_sd(j) = std::max(std::sqrt(ss / static_cast<double>(n - 1)), kSdFloor);
    }

    model.cutoffs.reserve(static_cast<size_t>(J));
    for (int j = 0; j < J; ++j) {
        std::vector<double> col(static_cast<size_t>(n));
        for (int i = 0; i < n; ++i) col[static_cast<size_t>(i)] = train_initial(i, j);
        model.cutoffs.push_back(youden_cutoff(col, labels));
    }
    return model;
}

Vote classify_test(const GroupModel& model, const Eigen::VectorXd& test_initial) {
    const int J = static_cast<int>(model.cutoffs.size());
    if (test_initial.size() != J) throw DomainError(kModule, "classify_test: expected " + std::to_string(J) + " values");

    Vote vote;
    vote.per_sensor.reserve(static_cast<size_t>(J));
    int high_votes = 0;
    for (int j = 0; j < J; ++j) {
        const Cutoff& c = model.cutoffs[static_cast<size_t>(j)];
        bool is_high = c.high_side > 0 ? test_initial(j) >= c.value : test_initial(j) <= c.value;
        vote.per_sensor.push_back(is_high ? Group::kHigh : Group::kLow);
        if (is_high) ++high_votes;
    }
    if (2 * high_votes > J) {
        vote.label = Group::kHigh;
    } else if (2 * high_votes < J) {
        vote.label = Group::kLow;
    } else {
        Eigen::VectorXd z_low = (test_initial - model.low_mean_initial).cwiseQuotient(model.initial_sd);
        Eigen::VectorXd z_high = (test_initial - model.high_mean_initial).cwiseQuotient(model.initial_sd);
        vote.label = z_high.norm() <= z_low.norm() ? Group::kHigh : Group::kLow;
        vote.tie_broken_by_distance = true;
    }
    return vote;
}

}  // namespace fdaprog::classify
