#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fdaprog/classify.hpp"
#include "fdaprog/ingest.hpp"
#include "fdaprog/mfpca.hpp"
#include "fdaprog/prognosis.hpp"

namespace fdaprog::evaluation {

struct RulEvalReport {
    double rmse = 0.0;
    int error_min = 0;            // signed errors are predicted - true
    int error_max = 0;
    int correct_count = 0;        // errors exactly 0
    int correct_within_one = 0;   // |error| <= 1, reported alongside
    std::vector<int> errors;      // per unit, input order
};

/// RMSE, signed-error range and exact-hit counts of integer predictions
/// against integer truth.
RulEvalReport rul_eval(const std::vector<int>& predicted, const std::vector<int>& truth);

struct AlarmReport {
    int total = 0;
    int later = 0;    // alarm at or after true failure
    int earlier = 0;  // alarm strictly before true failure
    int c40 = 0;      // alarm >= (1 - 0.40) * true failure, etc.
    int c30 = 0;
    int c20 = 0;
    int c10 = 0;
    int c5 = 0;
};

/// Table-5-style tally: "last x% of total life" means
/// alarm_cycle >= (1 - x) * true_failure.
AlarmReport alarm_eval(const std::vector<int>& alarm_cycles, const std::vector<int>& true_failures);

struct CurveRmseRow {
    int unit_id = 0;
    double fraction = 0.0;
    int cutoff_cycle = 0;      // floor(fraction * observed length)
    int tail_points = 0;       // withheld observations actually compared
    double rmse = 0.0;         // averaged over sensors
    std::string note;          // "skipped: ..." when not evaluable
};

/// Everything curve_rmse_at_fractions needs to re-run the downstream
/// pipeline on truncated test engines.
struct CurveStudyInputs {
    const mfpca::MultivariateFunctionalSample* train = nullptr;
    const mfpca::MfpcaModel* model = nullptr;
    const classify::GroupModel* groups = nullptr;
    double lambda = 0.0;
    prognosis::Options prog_options;
};

/// Truncate each chosen test engine at floor(fraction * observed length),
/// re-smooth, re-classify, re-rank, and score the predicted trajectories
/// against the withheld observed tail (RMSE averaged over the J sensors).
std::vector<CurveRmseRow> curve_rmse_at_fractions(const CurveStudyInputs& inputs,
                                                  const std::vector<ingest::MultiSensorSeries>& test_series,
                                                  const std::vector<int>& unit_ids,
                                                  const std::vector<double>& fractions);

}  // namespace fdaprog::evaluation
