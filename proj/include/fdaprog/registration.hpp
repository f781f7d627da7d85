#pragma once

#include <vector>

#include "fdaprog/ingest.hpp"
#include "fdaprog/smoothing.hpp"

namespace fdaprog::registration {

/// An engine's series with the time axis mapped onto [0,1] by v = t/T.
/// Sensor values are untouched; only the argument changes.
struct RegisteredSeries {
    int unit_id = 0;
    int endpoint_cycle = 0;                   // original-scale T (failure or censoring)
    std::vector<double> v;                    // strictly increasing, last is exactly 1
    std::vector<std::vector<double>> values;  // [sensor][k], aligned with v
};

/// Warp cycles 1..T onto (0,1]: v_k = t_k / T exactly.
RegisteredSeries register_series(const ingest::MultiSensorSeries& series);

/// Evaluate a registered curve on the original cycle scale: value (or d-th
/// derivative) of X(t) = X*(t/T) at t in [0, T]; derivatives pick up the
/// chain-rule factor (1/T)^d.
double unregister_eval(const smoothing::FunctionalCurve& curve, int endpoint_cycle, double t, int deriv = 0);

}  // namespace fdaprog::registration
