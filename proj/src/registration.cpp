#include "fdaprog/registration.hpp"

#include <cmath>
#include <string>

#include "fdaprog/error.hpp"

namespace fdaprog::registration {

namespace {
const char* kModule = "registration";
}

RegisteredSeries register_series(const ingest::MultiSensorSeries& series) {
    const int T = series.endpoint_cycle;
    if (T < 2)
        throw DomainError(kModule, "unit " + std::to_string(series.unit_id) + ": endpoint cycle " +
                                       std::to_string(T) + " below 2");
    RegisteredSeries out;
    out.unit_id = series.unit_id;
    out.endpoint_cycle = T;
    out.v.resize(static_cast<size_t>(T));
    for (int k = 1; k <= T; ++k) out.v[static_cast<size_t>(k - 1)] = static_cast<double>(k) / static_cast<double>(T);
    out.values = series.values;
    return out;
}

double unregister_eval(const smoothing::FunctionalCurve& curve, int endpoint_cycle, double t, int deriv) {
    if (endpoint_cycle < 1) throw DomainError(kModule, "endpoint cycle must be >= 1");
    const double T = static_cast<double>(endpoint_cycle);
    if (!(t >= 0.0 && t <= T))
        throw DomainError(kModule, "cycle t=" + std::to_string(t) + " outside [0, " + std::to_string(endpoint_cycle) +
                                       "]");
    double value = smoothing::eval_curve(curve, t / T, deriv);
    return value / std::pow(T, deriv);
}

}  // namespace fdaprog::registration
