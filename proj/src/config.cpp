#include "fdaprog/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "fdaprog/error.hpp"

namespace fdaprog::config {

namespace {

const char* kModule = "config";

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream ss(s);
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double as_double(const std::string& key, const std::string& value) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError(kModule, key + ": expected a number, got '" + value + "'");
    return v;
}

int as_int(const std::string& key, const std::string& value) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
    if (ec != std::errc{} || ptr != value.data() + value.size())
        throw ConfigError(kModule, key + ": expected an integer, got '" + value + "'");
    return v;
}

bool as_bool(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1" || value == "yes") return true;
    if (value == "false" || value == "0" || value == "no") return false;
    throw ConfigError(kModule, key + ": expected true/false, got '" + value + "'");
}

std::string num(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::string join(const std::vector<std::string>& items) {
    std::string out;
    for (size_t i = 0; i < items.size(); ++i) {
        if (i) out += ",";
        out += items[i];
    }
    return out;
}

}  // namespace

void Config::set(const std::string& key, const std::string& value) {
    if (key == "train_path") train_path = value;
    else if (key == "test_path") test_path = value;
    else if (key == "rul_path") rul_path = value;
    else if (key == "output_dir") output_dir = value;
    else if (key == "sensors.mode") sensors_mode = value;
    else if (key == "sensors.list") sensors_list = split_list(value);
    else if (key == "screen.const_tol") screen_const_tol = as_double(key, value);
    else if (key == "screen.max_distinct") screen_max_distinct = as_int(key, value);
    else if (key == "screen.consistency") screen_consistency = as_double(key, value);
    else if (key == "basis.degree") basis_degree = as_int(key, value);
    else if (key == "basis.interior_knots") basis_interior_knots = as_int(key, value);
    else if (key == "basis.penalty_order") basis_penalty_order = as_int(key, value);
    else if (key == "lambda.min") lambda_min = as_double(key, value);
    else if (key == "lambda.max") lambda_max = as_double(key, value);
    else if (key == "lambda.count") lambda_count = as_int(key, value);
    else if (key == "lambda.selector") lambda_selector = value;
    else if (key == "mfpca.q") mfpca_q = as_int(key, value);
    else if (key == "mfpca.variance_target") mfpca_variance_target = as_double(key, value);
    else if (key == "mfpca.scaling") mfpca_scaling = value;
    else if (key == "classify.vote") classify_vote = value;
    else if (key == "prognosis.k") prognosis_k = as_int(key, value);
    else if (key == "prognosis.aggregate") prognosis_aggregate = value;
    else if (key == "prognosis.scale") prognosis_scale = value;
    else if (key == "prognosis.fallback_drop_group") prognosis_fallback_drop_group = as_bool(key, value);
    else if (key == "alarm.fraction") alarm_fraction = as_double(key, value);
    else if (key == "eval.fractions") {
        eval_fractions.clear();
        for (const auto& item : split_list(value)) eval_fractions.push_back(as_double(key, item));
    } else if (key == "eval.curve_units") {
        eval_curve_units.clear();
        for (const auto& item : split_list(value)) eval_curve_units.push_back(as_int(key, item));
    } else {
        throw ConfigError(kModule, "unknown key '" + key + "'");
    }
}

void Config::validate() const {
    auto require = [](bool ok, const std::string& message) {
        if (!ok) throw ConfigError(kModule, message);
    };
    require(sensors_mode == "auto" || sensors_mode == "explicit", "sensors.mode must be auto or explicit");
    require(sensors_mode != "explicit" || !sensors_list.empty(), "sensors.list required when sensors.mode=explicit");
    require(screen_const_tol >= 0.0, "screen.const_tol must be >= 0");
    require(screen_max_distinct >= 1, "screen.max_distinct must be >= 1");
    require(screen_consistency > 0.5 && screen_consistency <= 1.0, "screen.consistency must be in (0.5, 1]");
    require(basis_degree >= 1 && basis_degree <= 5, "basis.degree must be in 1..5");
    require(basis_interior_knots >= 0, "basis.interior_knots must be >= 0");
    require(basis_penalty_order >= 1 && basis_penalty_order <= 3, "basis.penalty_order must be in 1..3");
    require(lambda_min > 0.0 && lambda_max >= lambda_min, "lambda.min/max must satisfy 0 < min <= max");
    require(lambda_count >= 1, "lambda.count must be >= 1");
    require(lambda_selector == "gcv" || lambda_selector == "loocv", "lambda.selector must be gcv or loocv");
    require(mfpca_q >= 0, "mfpca.q must be >= 0");
    require(mfpca_variance_target > 0.0 && mfpca_variance_target <= 1.0,
            "mfpca.variance_target must be in (0, 1]");
    require(mfpca_scaling == "none" || mfpca_scaling == "variance", "mfpca.scaling must be none or variance");
    require(classify_vote == "majority", "classify.vote: only majority is implemented");
    require(prognosis_k >= 1 && prognosis_k <= 20, "prognosis.k must be in 1..20");
    require(prognosis_aggregate == "mean" || prognosis_aggregate == "median",
            "prognosis.aggregate must be mean or median");
    require(prognosis_scale == "original" || prognosis_scale == "registered",
            "prognosis.scale must be original or registered");
    require(alarm_fraction > 0.0 && alarm_fraction < 1.0, "alarm.fraction must be in (0,1)");
    for (double f : eval_fractions)
        require(f > 0.0 && f <= 1.0, "eval.fractions entries must be in (0,1]");
}

Config load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(kModule, "cannot open config file: " + path);
    Config cfg;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string s = trim(line);
        if (s.empty() || s[0] == '#') continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            throw ConfigError(kModule, path + ":" + std::to_string(line_no) + ": expected key=value");
        cfg.set(trim(s.substr(0, eq)), trim(s.substr(eq + 1)));
    }
    return cfg;
}

void apply_overrides(Config& cfg, const std::vector<std::string>& key_value_pairs) {
    for (const auto& pair : key_value_pairs) {
        size_t eq = pair.find('=');
        if (eq == std::string::npos) throw ConfigError(kModule, "--set expects key=value, got '" + pair + "'");
        cfg.set(trim(pair.substr(0, eq)), trim(pair.substr(eq + 1)));
    }
}

std::vector<std::pair<std::string, std::string>> to_key_values(const Config& cfg) {
    std::vector<std::string> fractions, units;
    for (double f : cfg.eval_fractions) fractions.push_back(num(f));
    for (int u : cfg.eval_curve_units) units.push_back(std::to_string(u));
    return {
        {"train_path", cfg.train_path},
        {"test_path", cfg.test_path},
        {"rul_path", cfg.rul_path},
        {"output_dir", cfg.output_dir},
        {"sensors.mode", cfg.sensors_mode},
        {"sensors.list", join(cfg.sensors_list)},
        {"screen.const_tol", num(cfg.screen_const_tol)},
        {"screen.max_distinct", std::to_string(cfg.screen_max_distinct)},
        {"screen.consistency", num(cfg.screen_consistency)},
        {"basis.degree", std::to_string(cfg.basis_degree)},
        {"basis.interior_knots", std::to_string(cfg.basis_interior_knots)},
        {"basis.penalty_order", std::to_string(cfg.basis_penalty_order)},
        {"lambda.min", num(cfg.lambda_min)},
        {"lambda.max", num(cfg.lambda_max)},
        {"lambda.count", std::to_string(cfg.lambda_count)},
        {"lambda.selector", cfg.lambda_selector},
        {"mfpca.q", std::to_string(cfg.mfpca_q)},
        {"mfpca.variance_target", num(cfg.mfpca_variance_target)},
        {"mfpca.scaling", cfg.mfpca_scaling},
        {"classify.vote", cfg.classify_vote},
        {"prognosis.k", std::to_string(cfg.prognosis_k)},
        {"prognosis.aggregate", cfg.prognosis_aggregate},
        {"prognosis.scale", cfg.prognosis_scale},
        {"prognosis.fallback_drop_group", cfg.prognosis_fallback_drop_group ? "true" : "false"},
        {"alarm.fraction", num(cfg.alarm_fraction)},
        {"eval.fractions", join(fractions)},
        {"eval.curve_units", join(units)},
    };
}

}  // namespace fdaprog::config
