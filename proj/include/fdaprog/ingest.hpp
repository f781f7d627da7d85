#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace fdaprog::ingest {

inline constexpr int kSensorCount = 21;
inline constexpr int kSettingCount = 3;

/// Sensor names in file-column order (columns 6..26 of the unit files).
const std::array<std::string, kSensorCount>& sensor_names();

/// 1-based column index of a sensor name; throws DomainError for unknown names.
int sensor_id(const std::string& name);

/// One unit's run-to-failure (or run-to-censoring) record as parsed from a
/// unit file: cycles are consecutive integers 1..T, all sequences aligned.
struct RawEngineSeries {
    int unit_id = 0;
    std::vector<int> cycles;
    std::array<std::vector<double>, kSettingCount> op_settings;
    std::array<std::vector<double>, kSensorCount> sensors;

    int length() const { return static_cast<int>(cycles.size()); }
};

/// Screening thresholds; defaults reproduce the nine-sensor set on FD001.
struct ScreenConfig {
    double const_tol = 1e-9;   // within-engine sd at or below this => constant
    int max_distinct = 2;      // <= this many distinct values per engine => constant/binary
    double consistency = 0.9;  // required majority fraction of Spearman trend signs
};

/// Partition of the 21 sensors into constant, inconsistent and informative,
/// with the majority trend sign (+1/-1) for each informative sensor.
struct SensorScreenReport {
    std::vector<int> constant_ids;
    std::vector<int> inconsistent_ids;
    std::vector<int> informative_ids;  // stable file-column order
    std::vector<int> trend_sign;       // aligned with informative_ids
};

/// Projection of a RawEngineSeries onto a chosen sensor subset.
struct MultiSensorSeries {
    int unit_id = 0;
    int endpoint_cycle = 0;  // failure cycle (train) or last observed cycle (test)
    std::vector<int> sensor_ids;
    std::vector<std::vector<double>> values;  // [sensor][cycle-1]
};

/// Parse a C-MAPSS-format unit file: 26 whitespace-separated numeric fields
/// per line (unit, cycle, 3 settings, 21 sensors). Returns one series per
/// unit, ordered by unit id, cycles validated contiguous from 1 with T >= 2.
std::vector<RawEngineSeries> parse_unit_file(const std::string& path);

/// Same validation, from an in-memory buffer (used by tests and round-trips).
std::vector<RawEngineSeries> parse_unit_text(const std::string& text, const std::string& origin = "<memory>");

/// Serialize back to 26-column text. Values are printed with shortest
/// round-trip precision, so parse(serialize(parse(f))) == parse(f) bit-for-bit.
std::string serialize_unit_series(const std::vector<RawEngineSeries>& series);

/// Parse a RUL file: one non-negative decimal integer per line.
std::vector<int> parse_rul_file(const std::string& path);
std::vector<int> parse_rul_text(const std::string& text, const std::string& origin = "<memory>");

/// Classify the 21 sensors over the training fleet.
SensorScreenReport screen_sensors(const std::vector<RawEngineSeries>& train, const ScreenConfig& cfg = {});

/// Project a series onto the given sensor ids (1-based, non-empty).
MultiSensorSeries select_sensors(const RawEngineSeries& series, const std::vector<int>& ids);

/// The paper's nine informative FD001 sensors, in file-column order.
std::vector<int> default_informative_ids();

}  // namespace fdaprog::ingest
