#pragma once

#include <string>
#include <vector>

namespace fdaprog::config {

/// Pipeline configuration: every field has a default that reproduces the
/// reference FD001 pipeline. Loaded from a line-oriented key=value file
/// ('#' comments) and/or --set overrides, last assignment wins.
struct Config {
    // inputs / outputs
    std::string train_path;
    std::string test_path;
    std::string rul_path;       // optional; enables true-RUL columns and evaluation
    std::string output_dir = "out";

    // sensor selection
    std::string sensors_mode = "auto";  // auto | explicit
    std::vector<std::string> sensors_list;  // names or 1-based ids, used when explicit
    double screen_const_tol = 1e-9;
    int screen_max_distinct = 2;
    double screen_consistency = 0.9;

    // basis and smoothing
    int basis_degree = 3;
    int basis_interior_knots = 19;
    int basis_penalty_order = 2;
    double lambda_min = 1e-6;
    double lambda_max = 1e2;
    int lambda_count = 25;
    std::string lambda_selector = "gcv";  // gcv | loocv

    // mfpca
    int mfpca_q = 0;  // 0 = pick by variance target (min 2)
    double mfpca_variance_target = 0.995;
    std::string mfpca_scaling = "none";  // none | variance

    // classification
    std::string classify_vote = "majority";

    // prognosis
    int prognosis_k = 6;
    std::string prognosis_aggregate = "mean";  // mean | median
    std::string prognosis_scale = "original";  // original | registered
    bool prognosis_fallback_drop_group = true;
    double alarm_fraction = 0.8;

    // evaluation
    std::vector<double> eval_fractions = {0.35, 0.5, 0.8, 0.9};
    std::vector<int> eval_curve_units = {20, 31, 34, 35, 42, 68, 76, 81, 82};

    void set(const std::string& key, const std::string& value);
    void validate() const;
};

Config load_config(const std::string& path);
void apply_overrides(Config& cfg, const std::vector<std::string>& key_value_pairs);

/// All recognized keys with their current values, for `summary.txt` and docs.
std::vector<std::pair<std::string, std::string>> to_key_values(const Config& cfg);

}  // namespace fdaprog::config
