#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "fdaprog/smoothing.hpp"

namespace fdaprog::mfpca {

/// One engine: J smoothed sensor curves on [0,1] plus its original endpoint.
struct EngineCurves {
    int unit_id = 0;
    int endpoint_cycle = 0;
    std::vector<smoothing::FunctionalCurve> curves;  // one per sensor, shared basis
};

/// n engines x J sensors of curves in one shared basis.
struct MultivariateFunctionalSample {
    std::vector<EngineCurves> engines;
    std::vector<std::string> sensor_names;
    smoothing::BasisPtr basis;

    int n() const { return static_cast<int>(engines.size()); }
    int sensors() const { return static_cast<int>(sensor_names.size()); }
};

enum class Scaling {
    kNone,      // centering only (paper behavior)
    kVariance,  // divide each centered sensor block by its integrated sd
};

struct FitOptions {
    int q = 0;                    // retained components; 0 = pick by variance target
    double variance_target = 0.995;
    int min_q = 2;
    Scaling scaling = Scaling::kNone;
};

/// Fitted multivariate functional PCA model. Eigenfunctions are orthonormal
/// under the multivariate L2 inner product; component k's training scores
/// have mean ~0 and variance eigenvalue_k. Components are oriented so scores
/// correlate non-negatively with training endpoint cycles.
struct MfpcaModel {
    smoothing::BasisPtr basis;
    std::vector<std::string> sensor_names;
    int n = 0;                                // training sample size
    Eigen::VectorXd mean_coef;                // J*B, per-sensor blocks
    Eigen::VectorXd sensor_scale;             // J, divisors applied to centered blocks (all 1 when unscaled)
    Scaling scaling = Scaling::kNone;
    Eigen::VectorXd eigenvalues;              // retained q, non-increasing, >= 0
    double total_variance = 0.0;              // sum over ALL components
    Eigen::MatrixXd eigenfunction_coef;       // (J*B) x q, columns W-orthonormal
    Eigen::MatrixXd train_scores;             // n x q
    std::vector<int> train_unit_ids;
    std::vector<int> train_endpoints;
    std::vector<int> train_labels;            // 0 = unset; classify fills 1 (LOW) / 2 (HIGH)
    Eigen::MatrixXd gram;                     // B x B basis inner products

    int q() const { return static_cast<int>(eigenvalues.size()); }
    int sensors() const { return static_cast<int>(sensor_names.size()); }

    smoothing::FunctionalCurve mean_curve(int sensor) const;
    smoothing::FunctionalCurve eigenfunction(int component, int sensor) const;
};

/// Exact Gram matrix of basis inner products, Gauss-Legendre per knot
/// interval (exact for products of cubics).
Eigen::MatrixXd gram_matrix(const smoothing::BasisSpec& spec);

/// Fit by the coefficient reduction: with the mean-centered coefficient
/// matrix C (n x J*B) and block-diagonal Gram W, the covariance-operator
/// eigenproblem reduces to the symmetric eigenproblem of
/// W^{1/2} (C'C/(n-1)) W^{1/2}; eigenfunction coefficients are W^{-1/2} u.
MfpcaModel fit(const MultivariateFunctionalSample& sample, const FitOptions& options = {});

/// Scores of one engine's curves against the model (Eq. 19 inner products,
/// computed exactly through the Gram matrix).
Eigen::VectorXd score(const MfpcaModel& model, const std::vector<smoothing::FunctionalCurve>& engine_curves);

/// Truncated Karhunen-Loeve reconstruction: mean + sum_k score_k f_jk,
/// returned in original sensor units.
std::vector<smoothing::FunctionalCurve> reconstruct(const MfpcaModel& model, const Eigen::VectorXd& scores);

struct VarianceShare {
    double eigenvalue;
    double ratio;
    double cumulative;
};

std::vector<VarianceShare> explained_variance(const MfpcaModel& model);

/// Multivariate L2 inner product of two J-curve bundles through the Gram matrix.
double inner_product(const MfpcaModel& model, const std::vector<smoothing::FunctionalCurve>& a,
                     const std::vector<smoothing::FunctionalCurve>& b);

/// Versioned flat text serialization; numbers use shortest round-trip
/// form, so load(save(m)) == m exactly. Line-oriented sections:
///   fdaprog-mfpca v1
///   basis degree=D interior=I penalty=P
///   sensors <name...>
///   shape n=N J=J B=B q=Q
///   scaling none|variance
///   sensor_scale <J values> / total_variance <value>
///   units | endpoints | labels <N integers each>
///   mean <J*B coefficients>
///   eigenvalues <Q values>
///   eigenfunction K <J*B coefficients>   (one line per component)
///   scores UNIT <Q values>               (one line per training engine)
std::string serialize(const MfpcaModel& model);
MfpcaModel deserialize(const std::string& text);
void save(const MfpcaModel& model, const std::string& path);
MfpcaModel load(const std::string& path);

}  // namespace fdaprog::mfpca
