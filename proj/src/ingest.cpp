#include "fdaprog/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "fdaprog/error.hpp"

namespace fdaprog::ingest {

namespace {

const char* kModule = "ingest";

std::vector<std::string_view> split_fields(std::string_view line) {
    std::vector<std::string_view> out;
    size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
        size_t start = i;
        while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
        if (i > start) out.push_back(line.substr(start, i - start));
    }
    return out;
}

double parse_double(std::string_view tok, size_t line_no, const std::string& origin) {
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError(kModule, origin + ":" + std::to_string(line_no) + ": non-numeric token '" + std::string(tok) + "'");
    return v;
}

long parse_integer(std::string_view tok, size_t line_no, const std::string& origin) {
    long v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
        throw ParseError(kModule, origin + ":" + std::to_string(line_no) + ": expected integer, got '" + std::string(tok) + "'");
    return v;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(kModule, "cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Shortest text that parses back to exactly the same double.
void append_double(std::string& out, double v) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    out.append(buf, ptr);
}

// Spearman rank correlation of y against its index order (cycles are already
// 1..T, so index rank == cycle rank). Ties in y get average ranks.
double spearman_vs_index(const std::vector<double>& y) {
    const size_t n = y.size();
    std::vector<size_t> idx(n);
    for (size_t i = 0; i < n; ++i) idx[i] = i;
    std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return y[a] < y[b]; });
    std::vector<double> rank(n);
    size_t i = 0;
    while (i < n) {
        size_t j = i;
        while (j + 1 < n && y[idx[j + 1]] == y[idx[i]]) ++j;
        double r = 0.5 * static_cast<double>(i + j) + 1.0;  // average rank, 1-based
        for (size_t k = i; k <= j; ++k) rank[idx[k]] = r;
        i = j + 1;
    }
    const double mean = 0.5 * static_cast<double>(n + 1);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t k = 0; k < n; ++k) {
        double dx = static_cast<double>(k + 1) - mean;
        double dy = rank[k] - mean;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (syy == 0.0) return 0.0;  // constant sensor within this engine
    return sxy / std::sqrt(sxx * syy);
}

}  // namespace

const std::array<std::string, kSensorCount>& sensor_names() {
    static const std::array<std::string, kSensorCount> names = {
        "T2",  "T24", "T30", "T50",  "P2",        "P15", "P30",
        "Nf",  "Nc",  "epr", "Ps30", "phi",       "NRf", "NRc",
        "BPR", "farB", "htBleed", "Nf_dmd", "PCNfR_dmd", "W31", "W32"};
    return names;
}

int sensor_id(const std::string& name) {
    const auto& names = sensor_names();
    for (int i = 0; i < kSensorCount; ++i)
        if (names[static_cast<size_t>(i)] == name) return i + 1;
    throw DomainError(kModule, "unknown sensor name '" + name + "'");
}

std::vector<int> default_informative_ids() {
    return {2, 3, 4, 7, 11, 12, 15, 20, 21};  // T24 T30 T50 P30 Ps30 phi BPR W31 W32
}

std::vector<RawEngineSeries> parse_unit_text(const std::string& text, const std::string& origin) {
    std::map<int, RawEngineSeries> units;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        auto fields = split_fields(line);
        if (fields.empty()) continue;  // blank line
        if (fields.size() != 2 + kSettingCount + kSensorCount)
            throw ParseError(kModule, origin + ":" + std::to_string(line_no) + ": expected 26 fields, got " +
                                          std::to_string(fields.size()));
        long unit = parse_integer(fields[0], line_no, origin);
        long cycle = parse_integer(fields[1], line_no, origin);
        if (unit <= 0)
            throw ParseError(kModule, origin + ":" + std::to_string(line_no) + ": unit id must be positive");
        auto& series = units[static_cast<int>(unit)];
        series.unit_id = static_cast<int>(unit);
        series.cycles.push_back(static_cast<int>(cycle));
        for (int s = 0; s < kSettingCount; ++s)
            series.op_settings[static_cast<size_t>(s)].push_back(
                parse_double(fields[static_cast<size_t>(2 + s)], line_no, origin));
        for (int s = 0; s < kSensorCount; ++s)
            series.sensors[static_cast<size_t>(s)].push_back(
                parse_double(fields[static_cast<size_t>(2 + kSettingCount + s)], line_no, origin));
    }
    std::vector<RawEngineSeries> out;
    out.reserve(units.size());
    for (auto& [id, series] : units) {
        if (series.length() < 2)
            throw StructuralError(kModule, "unit " + std::to_string(id) + ": needs at least 2 cycles, has " +
                                               std::to_string(series.length()));
        for (int k = 0; k < series.length(); ++k) {
            if (series.cycles[static_cast<size_t>(k)] != k + 1)
                throw StructuralError(kModule, "unit " + std::to_string(id) + ": cycles not contiguous from 1 (cycle " +
                                                   std::to_string(series.cycles[static_cast<size_t>(k)]) +
                                                   " at position " + std::to_string(k + 1) + ")");
        }
        out.push_back(std::move(series));
    }
    return out;
}

std::vector<RawEngineSeries> parse_unit_file(const std::string& path) {
    return parse_unit_text(read_file(path), path);
}

std::string serialize_unit_series(const std::vector<RawEngineSeries>& series) {
    std::string out;
    for (const auto& s : series) {
        for (int k = 0; k < s.length(); ++k) {
            out += std::to_string(s.unit_id);
            out += ' ';
            out += std::to_string(s.cycles[static_cast<size_t>(k)]);
            for (int j = 0; j < kSettingCount; ++j) {
                out += ' ';
                append_double(out, s.op_settings[static_cast<size_t>(j)][static_cast<size_t>(k)]);
            }
            for (int j = 0; j < kSensorCount; ++j) {
                out += ' ';
                append_double(out, s.sensors[static_cast<size_t>(j)][static_cast<size_t>(k)]);
            }
            out += '\n';
        }
    }
    return out;
}

std::vector<int> parse_rul_text(const std::string& text, const std::string& origin) {
    std::vector<int> out;
    size_t line_no = 0;
    size_t pos = 0;
    while (pos < text.size()) {
        size_t eol = text.find('\n', pos);
        if (eol == std::string::npos) eol = text.size();
        std::string_view line(text.data() + pos, eol - pos);
        pos = eol + 1;
        ++line_no;
        auto fields = split_fields(line);
        if (fields.empty()) continue;
        if (fields.size() != 1)
            throw ParseError(kModule, origin + ":" + std::to_string(line_no) + ": expected one integer per line");
        long v = parse_integer(fields[0], line_no, origin);
        if (v < 0)
            throw ParseError(kModule, origin + ":" + std::to_string(line_no) + ": RUL must be non-negative, got " +
                                          std::to_string(v));
        out.push_back(static_cast<int>(v));
    }
    return out;
}

std::vector<int> parse_rul_file(const std::string& path) {
    return parse_rul_text(read_file(path), path);
}

SensorScreenReport screen_sensors(const std::vector<RawEngineSeries>& train, const ScreenConfig& cfg) {
    if (train.empty()) throw DomainError(kModule, "screen_sensors: empty training set");
    SensorScreenReport report;
    const double n_engines = static_cast<double>(train.size());
    for (int s = 0; s < kSensorCount; ++s) {
        bool constant = true;
        for (const auto& eng : train) {
            const auto& y = eng.sensors[static_cast<size_t>(s)];
            std::set<double> distinct(y.begin(), y.end());
            if (static_cast<int>(distinct.size()) <= cfg.max_distinct) continue;
            double mean = 0.0;
            for (double v : y) mean += v;
            mean /= static_cast<double>(y.size());
            double ss = 0.0;
            for (double v : y) ss += (v - mean) * (v - mean);
            double sd = std::sqrt(ss / static_cast<double>(y.size() - 1));
            if (sd > cfg.const_tol) {
                constant = false;
                break;
            }
        }
        if (constant) {
            report.constant_ids.push_back(s + 1);
            continue;
        }
        int pos = 0, neg = 0;
        for (const auto& eng : train) {
            double rho = spearman_vs_index(eng.sensors[static_cast<size_t>(s)]);
            if (rho > 0) ++pos;
            else if (rho < 0) ++neg;
        }
        int majority = std::max(pos, neg);
        if (static_cast<double>(majority) / n_engines < cfg.consistency) {
            report.inconsistent_ids.push_back(s + 1);
        } else {
            report.informative_ids.push_back(s + 1);
            report.trend_sign.push_back(pos >= neg ? +1 : -1);
        }
    }
    return report;
}

MultiSensorSeries select_sensors(const RawEngineSeries& series, const std::vector<int>& ids) {
    if (ids.empty()) throw DomainError(kModule, "select_sensors: empty sensor selection");
    MultiSensorSeries out;
    out.unit_id = series.unit_id;
    out.endpoint_cycle = series.length();
    out.sensor_ids = ids;
    out.values.reserve(ids.size());
    for (int id : ids) {
        if (id < 1 || id > kSensorCount)
            throw DomainError(kModule, "select_sensors: sensor id " + std::to_string(id) + " outside 1..21");
        out.values.push_back(series.sensors[static_cast<size_t>(id - 1)]);
    }
    return out;
}

}  // namespace fdaprog::ingest
