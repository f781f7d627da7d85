#include "fdaprog/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <ostream>

#include "fdaprog/curves.hpp"
#include "fdaprog/error.hpp"
#include "fdaprog/registration.hpp"

namespace fdaprog::pipeline {

namespace {

const char* kModule = "pipeline";

std::string num(double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, ptr);
}

std::ofstream open_out(const std::string& path) {
    std::filesystem::path p(path);
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(kModule, "cannot write " + path);
    return out;
}

const char* group_name(classify::Group g) { return g == classify::Group::kHigh ? "HIGH" : "LOW"; }

prognosis::Options prognosis_options(const config::Config& cfg) {
    prognosis::Options opt;
    opt.k = cfg.prognosis_k;
    opt.aggregate_median = cfg.prognosis_aggregate == "median";
    opt.alarm_fraction = cfg.alarm_fraction;
    opt.scale = cfg.prognosis_scale == "registered" ? prognosis::ComparisonScale::kRegistered
                                                    : prognosis::ComparisonScale::kOriginal;
    opt.fallback_drop_group = cfg.prognosis_fallback_drop_group;
    return opt;
}

std::vector<int> true_failures(const DataBundle& data, const PredictResult& predict) {
    std::vector<int> out;
    out.reserve(predict.per_unit.size());
    for (size_t i = 0; i < predict.per_unit.size(); ++i)
        out.push_back(predict.per_unit[i].prediction.observed_endpoint + data.rul[i]);
    return out;
}

}  // namespace

DataBundle load_data(const config::Config& cfg) {
    cfg.validate();
    if (cfg.train_path.empty()) throw ConfigError(kModule, "train_path is required");
    DataBundle data;
    data.train_raw = ingest::parse_unit_file(cfg.train_path);
    if (!cfg.test_path.empty()) data.test_raw = ingest::parse_unit_file(cfg.test_path);
    if (!cfg.rul_path.empty()) {
        data.rul = ingest::parse_rul_file(cfg.rul_path);
        if (!data.test_raw.empty() && data.rul.size() != data.test_raw.size())
            throw StructuralError(kModule, "RUL file has " + std::to_string(data.rul.size()) + " entries but " +
                                               std::to_string(data.test_raw.size()) + " test units were parsed");
    }
    return data;
}

ScreenResult run_screen(const config::Config& cfg, const DataBundle& data) {
    ScreenResult out;
    ingest::ScreenConfig sc{cfg.screen_const_tol, cfg.screen_max_distinct, cfg.screen_consistency};
    out.report = ingest::screen_sensors(data.train_raw, sc);
    if (cfg.sensors_mode == "explicit") {
        for (const auto& item : cfg.sensors_list) {
            int id = 0;
            auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), id);
            if (ec == std::errc{} && ptr == item.data() + item.size())
                out.selected_ids.push_back(id);
            else
                out.selected_ids.push_back(ingest::sensor_id(item));
        }
    } else {
        out.selected_ids = out.report.informative_ids;
    }
    if (out.selected_ids.empty())
        throw StructuralError(kModule, "sensor screening left no informative sensor; nothing to model");
    for (int id : out.selected_ids) {
        if (id < 1 || id > ingest::kSensorCount)
            throw ConfigError(kModule, "sensor id out of range: " + std::to_string(id));
        out.selected_names.push_back(ingest::sensor_names()[static_cast<size_t>(id - 1)]);
    }
    return out;
}

FitResult run_fit(const config::Config& cfg, const DataBundle& data, const ScreenResult& screen) {
    FitResult fit;
    fit.basis = std::make_shared<smoothing::BasisSpec>(
        smoothing::BasisSpec::cubic_on_unit(cfg.basis_interior_knots, cfg.basis_degree, cfg.basis_penalty_order));

    // one smoothing parameter across every (engine, sensor) training curve
    std::vector<std::vector<smoothing::Point>> all_curves;
    std::vector<registration::RegisteredSeries> registered;
    registered.reserve(data.train_raw.size());
    for (const auto& raw : data.train_raw) {
        ingest::MultiSensorSeries selected = ingest::select_sensors(raw, screen.selected_ids);
        registered.push_back(registration::register_series(selected));
        const auto& reg = registered.back();
        for (const auto& sensor : reg.values) {
            std::vector<smoothing::Point> pts(reg.v.size());
            for (size_t k = 0; k < reg.v.size(); ++k) pts[k] = {reg.v[k], sensor[k]};
            all_curves.push_back(std::move(pts));
        }
    }
    std::vector<double> grid = smoothing::log_lambda_grid(cfg.lambda_min, cfg.lambda_max, cfg.lambda_count);
    smoothing::Selector selector =
        cfg.lambda_selector == "loocv" ? smoothing::Selector::kLoocv : smoothing::Selector::kGcv;
    fit.lambda = smoothing::select_global_lambda(all_curves, fit.basis, grid, selector);

    fit.train_sample.basis = fit.basis;
    fit.train_sample.sensor_names = screen.selected_names;
    fit.train_sample.engines.reserve(registered.size());
    std::vector<smoothing::Point> pts;
    for (const auto& reg : registered) {
        mfpca::EngineCurves engine;
        engine.unit_id = reg.unit_id;
        engine.endpoint_cycle = reg.endpoint_cycle;
        pts.resize(reg.v.size());
        for (const auto& sensor : reg.values) {
            for (size_t k = 0; k < reg.v.size(); ++k) pts[k] = {reg.v[k], sensor[k]};
            engine.curves.push_back(smoothing::fit_curve(pts, fit.basis, fit.lambda).first);
        }
        fit.train_sample.engines.push_back(std::move(engine));
    }

    mfpca::FitOptions options;
    options.q = cfg.mfpca_q;
    options.variance_target = cfg.mfpca_variance_target;
    options.scaling = cfg.mfpca_scaling == "variance" ? mfpca::Scaling::kVariance : mfpca::Scaling::kNone;
    fit.model = mfpca::fit(fit.train_sample, options);

    std::vector<double> pc1(static_cast<size_t>(fit.model.n));
    for (int i = 0; i < fit.model.n; ++i) pc1[static_cast<size_t>(i)] = fit.model.train_scores(i, 0);
    fit.mixture = classify::fit_mixture(pc1);
    std::vector<classify::Group> labels = classify::assign_groups(fit.mixture, pc1);
    for (int i = 0; i < fit.model.n; ++i)
        fit.model.train_labels[static_cast<size_t>(i)] = static_cast<int>(labels[static_cast<size_t>(i)]);

    Eigen::MatrixXd initial(fit.model.n, fit.train_sample.sensors());
    for (int i = 0; i < fit.model.n; ++i)
        initial.row(i) = initial_values(fit.train_sample.engines[static_cast<size_t>(i)]).transpose();
    fit.groups = classify::build_group_model(initial, labels);
    return fit;
}

PredictResult run_predict(const config::Config& cfg, const DataBundle& data, const ScreenResult& screen,
                          const FitResult& fit) {
    if (data.test_raw.empty()) throw ConfigError(kModule, "test_path is required for prediction");
    PredictResult out;
    prognosis::Options options = prognosis_options(cfg);

    out.test_series.reserve(data.test_raw.size());
    for (const auto& raw : data.test_raw) out.test_series.push_back(ingest::select_sensors(raw, screen.selected_ids));

    for (const auto& series : out.test_series) {
        mfpca::EngineCurves engine = smooth_engine(series, fit.basis, fit.lambda);
        TestPrediction tp;
        tp.unit_id = engine.unit_id;
        tp.vote = classify::classify_test(fit.groups, initial_values(engine));
        tp.pc1_score = mfpca::score(fit.model, engine.curves)(0);
        prognosis::NeighborRanking ranking =
            prognosis::rank_neighbors(engine, tp.vote.label, fit.train_sample, fit.groups.train_labels, options);
        tp.group_filter_dropped = ranking.group_filter_dropped;
        prognosis::Options engine_options = options;
        engine_options.k = std::min(options.k, static_cast<int>(ranking.order.size()));
        tp.prediction = prognosis::predict_rul(ranking, fit.train_sample, engine_options);
        out.per_unit.push_back(std::move(tp));
    }
    return out;
}

EvalResult run_evaluate(const DataBundle& data, const PredictResult& predict) {
    if (data.rul.empty()) throw ConfigError(kModule, "rul_path is required for evaluation");
    if (data.rul.size() != predict.per_unit.size())
        throw StructuralError(kModule, "prediction/truth count mismatch");
    EvalResult eval;
    std::vector<int> pred_mean, pred_median, alarms;
    for (const auto& tp : predict.per_unit) {
        pred_mean.push_back(tp.prediction.rul_mean);
        pred_median.push_back(tp.prediction.rul_median);
        alarms.push_back(tp.prediction.alarm_cycle);
    }
    eval.rul_mean = evaluation::rul_eval(pred_mean, data.rul);
    eval.rul_median = evaluation::rul_eval(pred_median, data.rul);
    eval.alarm = evaluation::alarm_eval(alarms, true_failures(data, predict));
    return eval;
}

std::vector<evaluation::CurveRmseRow> run_curve_study(const config::Config& cfg, const FitResult& fit,
                                                      const PredictResult& predict) {
    evaluation::CurveStudyInputs inputs;
    inputs.train = &fit.train_sample;
    inputs.model = &fit.model;
    inputs.groups = &fit.groups;
    inputs.lambda = fit.lambda;
    inputs.prog_options = prognosis_options(cfg);
    inputs.prog_options.fallback_drop_group = true;  // truncated prefixes must always find a pool
    return evaluation::curve_rmse_at_fractions(inputs, predict.test_series, cfg.eval_curve_units,
                                               cfg.eval_fractions);
}

void write_screen_report(const ScreenResult& screen, const std::string& path) {
    auto out = open_out(path);
    auto section = [&](const char* name, const std::vector<int>& ids) {
        out << name;
        for (int id : ids) out << ' ' << ingest::sensor_names()[static_cast<size_t>(id - 1)];
        out << '\n';
    };
    section("constant:", screen.report.constant_ids);
    section("inconsistent:", screen.report.inconsistent_ids);
    section("informative:", screen.report.informative_ids);
    out << "trend:";
    for (size_t i = 0; i < screen.report.informative_ids.size(); ++i)
        out << ' ' << ingest::sensor_names()[static_cast<size_t>(screen.report.informative_ids[i] - 1)] << '='
            << (screen.report.trend_sign[i] > 0 ? "+1" : "-1");
    out << '\n';
    out << "selected:";
    for (const auto& name : screen.selected_names) out << ' ' << name;
    out << '\n';
}

void write_train_groups_csv(const FitResult& fit, const std::string& path) {
    auto out = open_out(path);
    out << "unit_id,group,pc1_score,endpoint_cycle\n";
    for (int i = 0; i < fit.model.n; ++i)
        out << fit.model.train_unit_ids[static_cast<size_t>(i)] << ','
            << group_name(fit.groups.train_labels[static_cast<size_t>(i)]) << ','
            << num(fit.model.train_scores(i, 0)) << ',' << fit.model.train_endpoints[static_cast<size_t>(i)]
            << '\n';
}

void write_cutoffs_csv(const FitResult& fit, const std::string& path) {
    auto out = open_out(path);
    out << "sensor,cutoff,high_side,youden_j\n";
    for (size_t j = 0; j < fit.groups.cutoffs.size(); ++j) {
        const auto& c = fit.groups.cutoffs[j];
        out << fit.train_sample.sensor_names[j] << ',' << num(c.value) << ',' << (c.high_side > 0 ? "above" : "below")
            << ',' << num(c.youden) << '\n';
    }
}

void write_predictions_csv(const PredictResult& predict, const std::vector<int>& rul, const std::string& path) {
    auto out = open_out(path);
    out << "unit_id,group,k,pred_fail_mean,pred_fail_median,rul_mean,rul_median,true_rul,alarm_cycle,alarm_flag";
    out << ",votes\n";
    for (size_t i = 0; i < predict.per_unit.size(); ++i) {
        const auto& tp = predict.per_unit[i];
        const auto& p = tp.prediction;
        out << tp.unit_id << ',' << group_name(tp.vote.label) << ',' << p.k << ',' << p.predicted_failure_mean << ','
            << p.predicted_failure_median << ',' << p.rul_mean << ',' << p.rul_median << ',';
        if (!rul.empty()) out << rul[i];
        out << ',' << p.alarm_cycle << ',' << (p.alarm_already_passed ? "already_passed" : "pending") << ',';
        for (const auto& v : tp.vote.per_sensor) out << (v == classify::Group::kHigh ? 'H' : 'L');
        out << '\n';
    }
}

void write_trajectories(const PredictResult& predict, const std::vector<std::string>& sensor_names,
                        const std::string& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& tp : predict.per_unit) {
        auto out = open_out(dir + "/unit_" + std::to_string(tp.unit_id) + ".csv");
        out << "cycle";
        for (const auto& name : sensor_names) out << ',' << name;
        out << '\n';
        const auto& traj = tp.prediction.trajectories;
        for (size_t c = 0; c < traj.cycles.size(); ++c) {
            out << traj.cycles[c];
            for (int j = 0; j < traj.values.rows(); ++j) out << ',' << num(traj.values(j, static_cast<int>(c)));
            out << '\n';
        }
    }
}

void write_rul_eval_csv(const EvalResult& eval, const std::string& path) {
    auto out = open_out(path);
    out << "method,rmse,error_min,error_max,correct,correct_within_1,source\n";
    out << "Exp,45.4,-135,63,1,,published\n";
    out << "FPCA (Mean),28.06,-82,65,3,,published\n";
    out << "FPCA (Median),28.7,-83,68,5,,published\n";
    auto row = [&](const char* name, const evaluation::RulEvalReport& r) {
        out << name << ',' << num(r.rmse) << ',' << r.error_min << ',' << r.error_max << ',' << r.correct_count
            << ',' << r.correct_within_one << ",computed\n";
    };
    row("M-FPCA (Mean)", eval.rul_mean);
    row("M-FPCA (Median)", eval.rul_median);
}

void write_alarm_csv(const EvalResult& eval, const std::string& path) {
    auto out = open_out(path);
    const auto& a = eval.alarm;
    out << "metric,count\n";
    out << "total_test_engines," << a.total << '\n';
    out << "alarm_later_than_true_failure," << a.later << '\n';
    out << "alarm_earlier_than_true_failure," << a.earlier << '\n';
    out << "alarm_in_last_40pct," << a.c40 << '\n';
    out << "alarm_in_last_30pct," << a.c30 << '\n';
    out << "alarm_in_last_20pct," << a.c20 << '\n';
    out << "alarm_in_last_10pct," << a.c10 << '\n';
    out << "alarm_in_last_5pct," << a.c5 << '\n';
}

void write_curve_rmse_csv(const std::vector<evaluation::CurveRmseRow>& rows, const std::string& path) {
    auto out = open_out(path);
    out << "unit_id,fraction,cutoff_cycle,tail_points,rmse,note\n";
    for (const auto& r : rows)
        out << r.unit_id << ',' << num(r.fraction) << ',' << r.cutoff_cycle << ',' << r.tail_points << ','
            << (r.note.empty() ? num(r.rmse) : "") << ',' << r.note << '\n';
}

void write_plot_data(const config::Config& cfg, const DataBundle& data, const ScreenResult& screen,
                     const FitResult& fit, const std::string& dir) {
    std::filesystem::create_directories(dir);
    const int grid_size = 200;
    std::vector<double> grid(grid_size);
    for (int g = 0; g < grid_size; ++g) grid[static_cast<size_t>(g)] = static_cast<double>(g) / (grid_size - 1);

    {
        auto out = open_out(dir + "/registered_curves.csv");
        out << "unit_id,sensor,v,value\n";
        for (const auto& raw : data.train_raw) {
            ingest::MultiSensorSeries selected = ingest::select_sensors(raw, screen.selected_ids);
            registration::RegisteredSeries reg = registration::register_series(selected);
            for (size_t j = 0; j < reg.values.size(); ++j)
                for (size_t k = 0; k < reg.v.size(); ++k)
                    out << reg.unit_id << ',' << screen.selected_names[j] << ',' << num(reg.v[k]) << ','
                        << num(reg.values[j][k]) << '\n';
        }
    }
    {
        auto out = open_out(dir + "/smooth_curves.csv");
        out << "unit_id,sensor,v,value\n";
        for (const auto& engine : fit.train_sample.engines)
            for (size_t j = 0; j < engine.curves.size(); ++j)
                for (double v : grid)
                    out << engine.unit_id << ',' << fit.train_sample.sensor_names[j] << ',' << num(v) << ','
                        << num(engine.curves[j](v)) << '\n';
    }
    {
        auto out = open_out(dir + "/mean_curves.csv");
        out << "sensor,v,value\n";
        for (int j = 0; j < fit.model.sensors(); ++j) {
            smoothing::FunctionalCurve mean = fit.model.mean_curve(j);
            for (double v : grid)
                out << fit.model.sensor_names[static_cast<size_t>(j)] << ',' << num(v) << ',' << num(mean(v)) << '\n';
        }
    }
    {
        auto out = open_out(dir + "/eigenfunctions.csv");
        out << "component,sensor,v,value\n";
        int components = std::min(3, fit.model.q());
        for (int k = 0; k < components; ++k)
            for (int j = 0; j < fit.model.sensors(); ++j) {
                smoothing::FunctionalCurve f = fit.model.eigenfunction(k, j);
                for (double v : grid)
                    out << (k + 1) << ',' << fit.model.sensor_names[static_cast<size_t>(j)] << ',' << num(v) << ','
                        << num(f(v)) << '\n';
            }
    }
    {
        auto out = open_out(dir + "/score_histogram.csv");
        out << "unit_id,pc1_score,group\n";
        for (int i = 0; i < fit.model.n; ++i)
            out << fit.model.train_unit_ids[static_cast<size_t>(i)] << ',' << num(fit.model.train_scores(i, 0)) << ','
                << group_name(fit.groups.train_labels[static_cast<size_t>(i)]) << '\n';
    }
    {
        auto out = open_out(dir + "/second_derivative_profiles.csv");
        out << "group,sensor,v,value\n";
        prognosis::DerivativeProfile profile =
            prognosis::second_derivative_profile(fit.train_sample, fit.groups.train_labels, grid_size);
        for (int j = 0; j < fit.model.sensors(); ++j)
            for (int g = 0; g < grid_size; ++g) {
                out << "LOW," << fit.model.sensor_names[static_cast<size_t>(j)] << ','
                    << num(profile.grid[static_cast<size_t>(g)]) << ',' << num(profile.low(j, g)) << '\n';
            }
        for (int j = 0; j < fit.model.sensors(); ++j)
            for (int g = 0; g < grid_size; ++g) {
                out << "HIGH," << fit.model.sensor_names[static_cast<size_t>(j)] << ','
                    << num(profile.grid[static_cast<size_t>(g)]) << ',' << num(profile.high(j, g)) << '\n';
            }
    }
    (void)cfg;
}

void write_summary(const config::Config& cfg, const ScreenResult& screen, const FitResult* fit,
                   const PredictResult* predict, const EvalResult* eval, const std::string& path) {
    auto out = open_out(path);
    out << "n_informative=" << screen.report.informative_ids.size() << '\n';
    out << "informative=";
    for (size_t i = 0; i < screen.report.informative_ids.size(); ++i)
        out << (i ? "," : "")
            << ingest::sensor_names()[static_cast<size_t>(screen.report.informative_ids[i] - 1)];
    out << '\n';
    out << "selected=";
    for (size_t i = 0; i < screen.selected_names.size(); ++i) out << (i ? "," : "") << screen.selected_names[i];
    out << '\n';
    if (fit) {
        out << "lambda_star=" << num(fit->lambda) << '\n';
        out << "basis_dimension=" << fit->basis->size() << '\n';
        out << "q=" << fit->model.q() << '\n';
        out << "scaling=" << cfg.mfpca_scaling << '\n';
        auto shares = mfpca::explained_variance(fit->model);
        for (size_t k = 0; k < shares.size() && k < 3; ++k) {
            out << "pc" << (k + 1) << "_ratio=" << num(shares[k].ratio) << '\n';
            out << "pc" << (k + 1) << "_cumulative=" << num(shares[k].cumulative) << '\n';
        }
        out << "mixture_mean_low=" << num(fit->mixture.mean_low) << '\n';
        out << "mixture_mean_high=" << num(fit->mixture.mean_high) << '\n';
        out << "mixture_sd=" << num(fit->mixture.sd) << '\n';
        out << "mixture_weight_low=" << num(fit->mixture.weight_low) << '\n';
    }
    if (predict) {
        out << "n_test=" << predict->per_unit.size() << '\n';
        int dropped = 0;
        for (const auto& tp : predict->per_unit) dropped += tp.group_filter_dropped ? 1 : 0;
        out << "group_filter_dropped=" << dropped << '\n';
    }
    if (eval) {
        out << "rmse_mean=" << num(eval->rul_mean.rmse) << '\n';
        out << "rmse_median=" << num(eval->rul_median.rmse) << '\n';
        out << "error_min_mean=" << eval->rul_mean.error_min << '\n';
        out << "error_max_mean=" << eval->rul_mean.error_max << '\n';
        out << "correct_mean=" << eval->rul_mean.correct_count << '\n';
        out << "correct_within1_mean=" << eval->rul_mean.correct_within_one << '\n';
        out << "error_min_median=" << eval->rul_median.error_min << '\n';
        out << "error_max_median=" << eval->rul_median.error_max << '\n';
        out << "correct_median=" << eval->rul_median.correct_count << '\n';
        out << "alarm_total=" << eval->alarm.total << '\n';
        out << "alarm_later=" << eval->alarm.later << '\n';
        out << "alarm_earlier=" << eval->alarm.earlier << '\n';
        out << "alarm_c40=" << eval->alarm.c40 << '\n';
        out << "alarm_c30=" << eval->alarm.c30 << '\n';
        out << "alarm_c20=" << eval->alarm.c20 << '\n';
        out << "alarm_c10=" << eval->alarm.c10 << '\n';
        out << "alarm_c5=" << eval->alarm.c5 << '\n';
    }
    for (const auto& [key, value] : config::to_key_values(cfg)) out << "config." << key << '=' << value << '\n';
}

int run_command(const std::string& subcommand, const config::Config& cfg, std::ostream& log) {
    const std::string& dir = cfg.output_dir;
    DataBundle data = load_data(cfg);
    log << "parsed " << data.train_raw.size() << " training units";
    if (!data.test_raw.empty()) log << ", " << data.test_raw.size() << " test units";
    log << "\n";

    ScreenResult screen = run_screen(cfg, data);
    write_screen_report(screen, dir + "/sensor_screen.txt");
    log << "screen: " << screen.report.informative_ids.size() << " informative sensors\n";
    if (subcommand == "screen") {
        write_summary(cfg, screen, nullptr, nullptr, nullptr, dir + "/summary.txt");
        return 0;
    }

    FitResult fit = run_fit(cfg, data, screen);
    mfpca::save(fit.model, dir + "/model.txt");
    write_train_groups_csv(fit, dir + "/train_groups.csv");
    write_cutoffs_csv(fit, dir + "/cutoffs.csv");
    log << "fit: lambda*=" << fit.lambda << ", q=" << fit.model.q() << ", pc1="
        << (fit.model.total_variance > 0 ? fit.model.eigenvalues(0) / fit.model.total_variance : 0.0) << "\n";
    if (subcommand == "fit") {
        write_summary(cfg, screen, &fit, nullptr, nullptr, dir + "/summary.txt");
        return 0;
    }

    PredictResult predict = run_predict(cfg, data, screen, fit);
    write_predictions_csv(predict, data.rul, dir + "/predictions.csv");
    write_trajectories(predict, fit.train_sample.sensor_names, dir + "/trajectories");
    log << "predict: " << predict.per_unit.size() << " test units\n";
    if (subcommand == "predict") {
        write_summary(cfg, screen, &fit, &predict, nullptr, dir + "/summary.txt");
        return 0;
    }

    if (subcommand == "curves") {
        auto rows = run_curve_study(cfg, fit, predict);
        write_curve_rmse_csv(rows, dir + "/curve_rmse.csv");
        write_summary(cfg, screen, &fit, &predict, nullptr, dir + "/summary.txt");
        log << "curves: " << rows.size() << " rows\n";
        return 0;
    }

    EvalResult eval = run_evaluate(data, predict);
    write_rul_eval_csv(eval, dir + "/rul_eval.csv");
    write_alarm_csv(eval, dir + "/alarm_report.csv");
    log << "evaluate: rmse_mean=" << eval.rul_mean.rmse << ", alarms earlier=" << eval.alarm.earlier << "/"
        << eval.alarm.total << "\n";
    if (subcommand == "evaluate" || subcommand == "alarm") {
        write_summary(cfg, screen, &fit, &predict, &eval, dir + "/summary.txt");
        return 0;
    }

    if (subcommand == "all") {
        auto rows = run_curve_study(cfg, fit, predict);
        write_curve_rmse_csv(rows, dir + "/curve_rmse.csv");
        write_plot_data(cfg, data, screen, fit, dir + "/plots");
        write_summary(cfg, screen, &fit, &predict, &eval, dir + "/summary.txt");
        log << "all: artifacts in " << dir << "\n";
        return 0;
    }
    throw ConfigError(kModule, "unknown subcommand '" + subcommand + "'");
}

}  // namespace fdaprog::pipeline
