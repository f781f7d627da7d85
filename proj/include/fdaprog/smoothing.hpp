#pragma once

#include <Eigen/Dense>
#include <memory>
#include <span>
#include <utility>
#include <vector>

namespace fdaprog::smoothing {

/// Clamped B-spline basis on [0,1]: equally spaced interior knots, boundary
/// knots repeated degree+1 times. Basis dimension B = interior + degree + 1.
/// Immutable after construction; share via BasisPtr across curves/threads.
struct BasisSpec {
    int degree = 3;
    int interior_knots = 19;
    int penalty_order = 2;
    std::vector<double> knots;

    static BasisSpec cubic_on_unit(int interior_knots = 19, int degree = 3, int penalty_order = 2);

    int size() const { return static_cast<int>(knots.size()) - degree - 1; }

    bool operator==(const BasisSpec& other) const;
};

using BasisPtr = std::shared_ptr<const BasisSpec>;

/// All B basis values (or d-th derivatives, d in 0..2) at t in [0,1]; at most
/// degree+1 entries are nonzero. Cox-de Boor recursion with 0/0 := 0.
Eigen::VectorXd basis_eval(const BasisSpec& spec, double t, int deriv = 0);

/// A smooth function on [0,1] as coefficients in a shared basis.
struct FunctionalCurve {
    BasisPtr basis;
    Eigen::VectorXd coef;

    double operator()(double t, int deriv = 0) const;
};

/// Sum_b c_b * B_b^(d)(t).
double eval_curve(const FunctionalCurve& curve, double t, int deriv = 0);

/// Discrete roughness penalty P_d = D_d' D_d with D_d the order-d difference
/// operator on coefficients. Symmetric PSD, annihilates degree<d coefficient
/// polynomials.
Eigen::MatrixXd build_penalty(const BasisSpec& spec);

/// Per-(curve,lambda) diagnostics of a penalized fit.
struct SmoothingFit {
    double lambda = 0.0;
    double gcv = 0.0;           // (K * residual_mse) / (K - hat_trace)^2
    double hat_trace = 0.0;     // trace of the hat matrix H(lambda)
    double residual_mse = 0.0;  // mean squared residual at the K data points
};

struct Point {
    double v;  // registered argument in [0,1]
    double y;
};

/// Penalized least squares: coefficients minimize
///   sum_k (y_k - sum_b c_b B_b(v_k))^2 + lambda * c' P_d c.
std::pair<FunctionalCurve, SmoothingFit> fit_curve(std::span<const Point> points, const BasisPtr& basis,
                                                   double lambda);

/// One fit per grid lambda, sharing the design factorization.
std::vector<SmoothingFit> gcv_profile(std::span<const Point> points, const BasisPtr& basis,
                                      std::span<const double> lambdas);

enum class Selector { kGcv, kLoocv };

/// Exact leave-one-out CV score of the linear smoother at lambda
/// (Eq. 8-9 form), computed from the hat-matrix diagonal.
double loocv_score(std::span<const Point> points, const BasisPtr& basis, double lambda);

/// Log-spaced lambda grid, count points over [lo, hi].
std::vector<double> log_lambda_grid(double lo = 1e-6, double hi = 1e2, int count = 25);

/// One smoothing parameter for the whole sample: argmin over the grid of the
/// mean criterion across all curves, ties broken toward the larger lambda.
/// A grid point is skipped if any curve fails to fit there.
double select_global_lambda(const std::vector<std::vector<Point>>& curves, const BasisPtr& basis,
                            std::span<const double> grid, Selector selector = Selector::kGcv);

}  // namespace fdaprog::smoothing
