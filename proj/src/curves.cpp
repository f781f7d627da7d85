#include "fdaprog/curves.hpp"

namespace fdaprog {

mfpca::EngineCurves smooth_engine(const ingest::MultiSensorSeries& series, const smoothing::BasisPtr& basis,
                                  double lambda) {
    registration::RegisteredSeries reg = registration::register_series(series);
    mfpca::EngineCurves engine;
    engine.unit_id = reg.unit_id;
    engine.endpoint_cycle = reg.endpoint_cycle;
    engine.curves.reserve(reg.values.size());
    std::vector<smoothing::Point> points(reg.v.size());
    for (const auto& sensor : reg.values) {
        for (size_t k = 0; k < reg.v.size(); ++k) points[k] = {reg.v[k], sensor[k]};
        engine.curves.push_back(smoothing::fit_curve(points, basis, lambda).first);
    }
    return engine;
}

Eigen::VectorXd initial_values(const mfpca::EngineCurves& engine) {
    Eigen::VectorXd out(static_cast<int>(engine.curves.size()));
    for (size_t j = 0; j < engine.curves.size(); ++j) out(static_cast<int>(j)) = engine.curves[j](0.0);
    return out;
}

}  // namespace fdaprog
