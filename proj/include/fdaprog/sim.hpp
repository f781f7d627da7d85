#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fdaprog/ingest.hpp"

namespace fdaprog::sim {

/// Synthetic turbofan fleet in C-MAPSS file layout, for demos and for the
/// acceptance suite when the real FD001 files are not on disk. Two latent
/// wear populations drive nine informative sensors (trend + initial-offset
/// + two weaker shape modes); the remaining twelve columns are constant,
/// two-valued, or trend-inconsistent. Deterministic for a fixed seed on any
/// platform (own Box-Muller over mt19937_64).
struct SimConfig {
    int n_train = 100;
    int n_test = 100;
    std::uint64_t seed = 20250811;

    // latent score mixture (low/high wear populations)
    double low_fraction = 0.63;
    double mean_low = -2.874;
    double mean_high = 4.893;
    double score_sd = 2.649;

    // lifetime model:
    // T = round(life_base + life_slope * score + life_mode2_slope * mode2 + N(0, life_sd))
    double life_base = 208.0;
    double life_slope = 7.5;
    double life_mode2_slope = 16.0;  // ties lifetime to the mid-life shape mode
    double life_sd = 50.0;        // scaled by expected lifetime / life_base before clipping
    double life_noise_floor = -38.0;  // clip for the short-lived side (drives overprediction)
    double life_noise_cap = 58.0;     // clip for the long-lived side
    int life_min = 100;
    int life_max = 420;

    // secondary shape modes and observation noise
    double mode2_sd = 0.836;
    double mode3_sd = 0.296;
    double noise_scale = 0.015;  // per-sensor sd as a fraction of its amplitude

    // test censoring
    int rul_min = 7;
    int rul_max = 145;
    int min_observed = 31;
};

struct SimData {
    std::vector<ingest::RawEngineSeries> train;
    std::vector<ingest::RawEngineSeries> test;
    std::vector<int> rul;  // aligned with test
};

SimData generate(const SimConfig& config = {});

/// Write train.txt / test.txt / rul.txt under dir (created if missing).
void write_files(const SimData& data, const std::string& dir);

}  // namespace fdaprog::sim
