#include "fdaprog/evaluation.hpp"

#include <algorithm>
#include <cmath>

#include "fdaprog/curves.hpp"
#include "fdaprog/error.hpp"

namespace fdaprog::evaluation {

namespace {
const char* kModule = "evaluation";
}

RulEvalReport rul_eval(const std::vector<int>& predicted, const std::vector<int>& truth) {
    if (predicted.size() != truth.size())
        throw DomainError(kModule, "rul_eval: " + std::to_string(predicted.size()) + " predictions vs " +
                                       std::to_string(truth.size()) + " truth values");
    if (predicted.empty()) throw DomainError(kModule, "rul_eval: empty input");

    RulEvalReport report;
    report.errors.reserve(predicted.size());
    double ss = 0.0;
    for (size_t i = 0; i < predicted.size(); ++i) {
        int e = predicted[i] - truth[i];
        report.errors.push_back(e);
        ss += static_cast<double>(e) * static_cast<double>(e);
        if (e == 0) ++report.correct_count;
        if (std::abs(e) <= 1) ++report.correct_within_one;
    }
    report.rmse = std::sqrt(ss / static_cast<double>(predicted.size()));
    report.error_min = *std::min_element(report.errors.begin(), report.errors.end());
    report.error_max = *std::max_element(report.errors.begin(), report.errors.end());
    return report;
}

AlarmReport alarm_eval(const std::vector<int>& alarm_cycles, const std::vector<int>& true_failures) {
    if (alarm_cycles.size() != true_failures.size()) throw DomainError(kModule, "alarm_eval: size mismatch");
    AlarmReport report;
    report.total = static_cast<int>(alarm_cycles.size());
    auto in_window = [](int alarm, int fail, double x) {
        return static_cast<double>(alarm) >= (1.0 - x) * static_cast<double>(fail);
    };
    for (size_t i = 0; i < alarm_cycles.size(); ++i) {
        int alarm = alarm_cycles[i];
        int fail = true_failures[i];
        if (alarm < fail) ++report.earlier;
        else ++report.later;  // an alarm exactly at failure counts as late
        if (in_window(alarm, fail, 0.40)) ++report.c40;
        if (in_window(alarm, fail, 0.30)) ++report.c30;
        if (in_window(alarm, fail, 0.20)) ++report.c20;
        if (in_window(alarm, fail, 0.10)) ++report.c10;
        if (in_window(alarm, fail, 0.05)) ++report.c5;
    }
    return report;
}

std::vector<CurveRmseRow> curve_rmse_at_fractions(const CurveStudyInputs& inputs,
                                                  const std::vector<ingest::MultiSensorSeries>& test_series,
                                                  const std::vector<int>& unit_ids,
                                                  const std::vector<double>& fractions) {
    if (!inputs.train || !inputs.model || !inputs.groups)
        throw DomainError(kModule, "curve_rmse_at_fractions: incomplete inputs");
    for (double f : fractions)
        if (!(f > 0.0 && f <= 1.0))  // 1.0 degenerates to an empty tail and is skipped per engine
            throw DomainError(kModule, "curve_rmse_at_fractions: fraction " + std::to_string(f) +
                                           " outside (0,1]");

    std::vector<CurveRmseRow> rows;
    for (int unit : unit_ids) {
        auto it = std::find_if(test_series.begin(), test_series.end(),
                               [unit](const auto& s) { return s.unit_id == unit; });
        if (it == test_series.end())
            throw DomainError(kModule, "curve_rmse_at_fractions: unknown test unit " + std::to_string(unit));
        const ingest::MultiSensorSeries& full = *it;
        const int T_obs = full.endpoint_cycle;
        const int J = static_cast<int>(full.values.size());

        for (double f : fractions) {
            CurveRmseRow row;
            row.unit_id = unit;
            row.fraction = f;
            row.cutoff_cycle = static_cast<int>(std::floor(f * static_cast<double>(T_obs)));

            if (row.cutoff_cycle < 2) {
                row.note = "skipped: truncated series shorter than 2 cycles";
                rows.push_back(row);
                continue;
            }
            if (row.cutoff_cycle >= T_obs) {
                row.note = "skipped: empty withheld tail";
                rows.push_back(row);
                continue;
            }

            ingest::MultiSensorSeries truncated = full;
            truncated.endpoint_cycle = row.cutoff_cycle;
            for (auto& sensor : truncated.values) sensor.resize(static_cast<size_t>(row.cutoff_cycle));

            mfpca::EngineCurves engine = smooth_engine(truncated, inputs.model->basis, inputs.lambda);
            classify::Vote vote = classify::classify_test(*inputs.groups, initial_values(engine));
            prognosis::NeighborRanking ranking =
                prognosis::rank_neighbors(engine, vote.label, *inputs.train, inputs.groups->train_labels,
                                          inputs.prog_options);
            int k = std::min(inputs.prog_options.k, static_cast<int>(ranking.order.size()));
            prognosis::Trajectory traj = prognosis::predict_trajectories(ranking, *inputs.train, k, T_obs);

            double rmse_sum = 0.0;
            int tail = 0;
            for (size_t c = 0; c < traj.cycles.size(); ++c) {
                if (traj.cycles[c] <= row.cutoff_cycle || traj.cycles[c] > T_obs) continue;
                ++tail;
            }
            if (tail == 0) {
                row.note = "skipped: no trajectory overlap with the withheld tail";
                rows.push_back(row);
                continue;
            }
            for (int j = 0; j < J; ++j) {
                double ss = 0.0;
                int count = 0;
                for (size_t c = 0; c < traj.cycles.size(); ++c) {
                    int t = traj.cycles[c];
                    if (t <= row.cutoff_cycle || t > T_obs) continue;
                    double actual = full.values[static_cast<size_t>(j)][static_cast<size_t>(t - 1)];
                    double diff = traj.values(j, static_cast<int>(c)) - actual;
                    ss += diff * diff;
                    ++count;
                }
                rmse_sum += std::sqrt(ss / static_cast<double>(count));
            }
            row.tail_points = tail;
            row.rmse = rmse_sum / static_cast<double>(J);
            rows.push_back(row);
        }
    }
    return rows;
}

}  // namespace fdaprog::evaluation
