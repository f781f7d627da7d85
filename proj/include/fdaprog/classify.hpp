#pragma once

#include <Eigen/Dense>
#include <vector>

namespace fdaprog::classify {

enum class Group : int { kLow = 1, kHigh = 2 };

/// Two-Gaussian mixture with a shared standard deviation, fitted by EM.
struct Mixture2 {
    double mean_low = 0.0;   // m1 < m2
    double mean_high = 0.0;
    double sd = 1.0;         // shared, floored at 1e-6
    double weight_low = 0.5; // mixing weight of the low component
    double log_likelihood = 0.0;
    int iterations = 0;

    /// Posterior probability of the high component at x.
    double posterior_high(double x) const;
};

/// EM with deterministic initialization (25th/75th percentiles, pooled sd,
/// equal weights); stops when the log-likelihood gain drops below 1e-10 or
/// after 500 iterations. The log-likelihood is non-decreasing across
/// iterations.
Mixture2 fit_mixture(const std::vector<double>& scores);

/// HIGH iff posterior of the high component >= 0.5 (ties go high).
std::vector<Group> assign_groups(const Mixture2& mix, const std::vector<double>& scores);

struct Cutoff {
    double value = 0.0;
    int high_side = +1;  // +1: x >= value votes HIGH; -1: x <= value votes HIGH
    double youden = 0.0; // sensitivity + specificity - 1 at the cutoff
};

/// Cutoff maximizing the Youden index over midpoints of sorted distinct
/// values; direction chosen so J >= 0; ties resolved toward the midpoint
/// closest to the pooled median.
Cutoff youden_cutoff(const std::vector<double>& values, const std::vector<Group>& labels);

/// Per-sensor cutoffs plus what the tie rule needs: group mean initial
/// vectors and pooled per-sensor sds of the training initial values.
struct GroupModel {
    std::vector<Group> train_labels;
    std::vector<Cutoff> cutoffs;               // one per sensor
    Eigen::VectorXd low_mean_initial;          // J
    Eigen::VectorXd high_mean_initial;         // J
    Eigen::VectorXd initial_sd;                // J, pooled
};

/// Build the group model from training initial values (n x J, the smoothed
/// curves evaluated at v=0) and mixture labels.
GroupModel build_group_model(const Eigen::MatrixXd& train_initial, const std::vector<Group>& labels);

struct Vote {
    std::vector<Group> per_sensor;
    Group label = Group::kLow;
    bool tie_broken_by_distance = false;
};

/// Majority vote of the per-sensor cutoffs on a test engine's initial
/// values; an exact tie goes to the group whose mean initial vector is
/// nearer in sd-normalized Euclidean distance (equidistant -> HIGH).
Vote classify_test(const GroupModel& model, const Eigen::VectorXd& test_initial);

}  // namespace fdaprog::classify
