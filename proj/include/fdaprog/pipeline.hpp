#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fdaprog/classify.hpp"
#include "fdaprog/config.hpp"
#include "fdaprog/evaluation.hpp"
#include "fdaprog/ingest.hpp"
#include "fdaprog/mfpca.hpp"
#include "fdaprog/prognosis.hpp"

namespace fdaprog::pipeline {

/// Parsed input files (RUL may be absent).
struct DataBundle {
    std::vector<ingest::RawEngineSeries> train_raw;
    std::vector<ingest::RawEngineSeries> test_raw;
    std::vector<int> rul;  // empty when no rul_path given
};

DataBundle load_data(const config::Config& cfg);

struct ScreenResult {
    ingest::SensorScreenReport report;
    std::vector<int> selected_ids;
    std::vector<std::string> selected_names;
};

/// Auto-screen the training fleet or resolve the explicit sensor list.
ScreenResult run_screen(const config::Config& cfg, const DataBundle& data);

struct FitResult {
    smoothing::BasisPtr basis;
    double lambda = 0.0;
    mfpca::MultivariateFunctionalSample train_sample;
    mfpca::MfpcaModel model;  // train_labels filled from the mixture
    classify::Mixture2 mixture;
    classify::GroupModel groups;
};

/// Register + smooth the training fleet with one GCV/LOO-CV-selected lambda,
/// fit MFPCA, fit the score mixture and the per-sensor Youden cutoffs.
FitResult run_fit(const config::Config& cfg, const DataBundle& data, const ScreenResult& screen);

struct TestPrediction {
    int unit_id = 0;
    classify::Vote vote;
    double pc1_score = 0.0;  // projection of the censored-scale curves (informational)
    prognosis::RulPrediction prediction;
    bool group_filter_dropped = false;
};

struct PredictResult {
    std::vector<TestPrediction> per_unit;
    std::vector<ingest::MultiSensorSeries> test_series;  // selected sensors, original scale
};

PredictResult run_predict(const config::Config& cfg, const DataBundle& data, const ScreenResult& screen,
                          const FitResult& fit);

struct EvalResult {
    evaluation::RulEvalReport rul_mean;
    evaluation::RulEvalReport rul_median;
    evaluation::AlarmReport alarm;
};

/// Requires true RUL values in the bundle.
EvalResult run_evaluate(const DataBundle& data, const PredictResult& predict);

std::vector<evaluation::CurveRmseRow> run_curve_study(const config::Config& cfg, const FitResult& fit,
                                                      const PredictResult& predict);

/// Artifact writers (all deterministic; shortest round-trip number text).
void write_screen_report(const ScreenResult& screen, const std::string& path);
void write_train_groups_csv(const FitResult& fit, const std::string& path);
void write_cutoffs_csv(const FitResult& fit, const std::string& path);
void write_predictions_csv(const PredictResult& predict, const std::vector<int>& rul, const std::string& path);
void write_trajectories(const PredictResult& predict, const std::vector<std::string>& sensor_names,
                        const std::string& dir);
void write_rul_eval_csv(const EvalResult& eval, const std::string& path);
void write_alarm_csv(const EvalResult& eval, const std::string& path);
void write_curve_rmse_csv(const std::vector<evaluation::CurveRmseRow>& rows, const std::string& path);
void write_plot_data(const config::Config& cfg, const DataBundle& data, const ScreenResult& screen,
                     const FitResult& fit, const std::string& dir);
void write_summary(const config::Config& cfg, const ScreenResult& screen, const FitResult* fit,
                   const PredictResult* predict, const EvalResult* eval, const std::string& path);

/// CLI entry: subcommand in {screen, fit, predict, evaluate, alarm, curves, all}.
/// Returns a process exit status; human-readable progress goes to `log`.
int run_command(const std::string& subcommand, const config::Config& cfg, std::ostream& log);

}  // namespace fdaprog::pipeline
