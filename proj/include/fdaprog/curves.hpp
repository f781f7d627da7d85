#pragma once

#include "fdaprog/ingest.hpp"
#include "fdaprog/mfpca.hpp"
#include "fdaprog/registration.hpp"
#include "fdaprog/smoothing.hpp"

namespace fdaprog {

/// Register a series onto [0,1] and fit all its sensors with the shared
/// basis and smoothing parameter.
mfpca::EngineCurves smooth_engine(const ingest::MultiSensorSeries& series, const smoothing::BasisPtr& basis,
                                  double lambda);

/// Initial values of an engine's smoothed sensors (curves at v = 0).
Eigen::VectorXd initial_values(const mfpca::EngineCurves& engine);

}  // namespace fdaprog
