#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "fdaprog/classify.hpp"
#include "fdaprog/mfpca.hpp"

namespace fdaprog::prognosis {

enum class ComparisonScale {
    kOriginal,    // evaluate pool curves at the test engine's observed cycles (default)
    kRegistered,  // compare registered prefixes on a common [0,1] fraction grid
};

struct Options {
    int k = 6;
    bool aggregate_median = false;     // failure-time aggregate driving trajectories/alarm
    double alarm_fraction = 0.8;
    ComparisonScale scale = ComparisonScale::kOriginal;
    bool fallback_drop_group = false;  // on empty pool, retry with only the longevity filter
};

/// Values of each engine (rows: pool members then, last, the test engine)
/// divided per sensor by the pointwise eligible-pool mean.
struct NormalizedGrid {
    std::vector<double> grid;                 // original-scale cycles
    std::vector<Eigen::MatrixXd> values;      // per engine: J x |grid|
};

/// Eligible neighbors of one test engine, sorted by ascending distance
/// (ties by unit id).
struct NeighborRanking {
    int test_unit_id = 0;
    int test_endpoint = 0;
    std::vector<int> pool_unit_ids;       // eligibility order (sample order)
    std::vector<int> pool_endpoints;
    std::vector<double> distances;        // aligned with pool_unit_ids
    std::vector<int> order;               // indices into the pool, sorted
    bool group_filter_dropped = false;
};

struct Trajectory {
    std::vector<int> cycles;
    Eigen::MatrixXd values;  // J x cycles
};

struct RulPrediction {
    int test_unit_id = 0;
    int observed_endpoint = 0;
    int k = 0;
    int predicted_failure_mean = 0;
    int predicted_failure_median = 0;
    int rul_mean = 0;
    int rul_median = 0;
    Trajectory trajectories;
    int alarm_cycle = 0;
    bool alarm_already_passed = false;
};

/// Divide every engine's sensor values by the pointwise pool mean on the
/// grid. `curves` are evaluated on the original cycle scale through their
/// own registration endpoints; the last entry is treated as the test engine
/// and shares the pool denominator.
NormalizedGrid normalize_at_grid(const std::vector<const mfpca::EngineCurves*>& pool,
                                 const mfpca::EngineCurves& test, const std::vector<double>& grid);

/// Mean over grid points of the per-point J-dimensional Euclidean distance.
double multivariate_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Rank group-compatible training engines that outlive the test engine by
/// normalized multivariate curve distance on the test engine's observed
/// cycles 1..T_obs.
NeighborRanking rank_neighbors(const mfpca::EngineCurves& test, classify::Group test_group,
                               const mfpca::MultivariateFunctionalSample& train,
                               const std::vector<classify::Group>& train_labels, const Options& options = {});

/// Failure-time and RUL point predictions from the top-k neighbors
/// (mean and median endpoints, rounded half-up), plus trajectories to the
/// predicted failure and the alarm point.
RulPrediction predict_rul(const NeighborRanking& ranking, const mfpca::MultivariateFunctionalSample& train,
                          const Options& options = {});

/// Per-sensor trajectory on cycles (T_obs..horizon]: mean over the top-k
/// neighbors still alive at each cycle of their original-scale smoothed
/// values; stops early if every neighbor is past its own failure.
Trajectory predict_trajectories(const NeighborRanking& ranking, const mfpca::MultivariateFunctionalSample& train,
                                int k, int horizon);

/// round(fraction * predicted mean failure), half-up.
int alarm_point(int predicted_failure_mean, double fraction = 0.8);

/// Per-sensor, per-group mean second derivative d2/dv2 of the registered
/// training curves on a uniform grid in [0,1].
struct DerivativeProfile {
    std::vector<double> grid;
    Eigen::MatrixXd low;   // J x grid
    Eigen::MatrixXd high;  // J x grid
};

DerivativeProfile second_derivative_profile(const mfpca::MultivariateFunctionalSample& train,
                                            const std::vector<classify::Group>& labels, int grid_size = 200);

}  // namespace fdaprog::prognosis
