#include "fdaprog/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "fdaprog/error.hpp"

namespace fdaprog::smoothing {

namespace {

const char* kModule = "smoothing";

// Index of the knot span containing t: largest k with knots[k] <= t and
// knots[k] < knots[k+1]; t == 1 maps into the last nonempty span so the
// clamped basis stays a partition of unity on the closed interval.
int find_span(const std::vector<double>& knots, double t) {
    int last = static_cast<int>(knots.size()) - 2;
    int span = -1;
    for (int k = 0; k <= last; ++k) {
        if (knots[static_cast<size_t>(k)] < knots[static_cast<size_t>(k + 1)]) {
            if (t >= knots[static_cast<size_t>(k)] && t < knots[static_cast<size_t>(k + 1)]) return k;
            span = k;  // last nonempty span seen so far
        }
    }
    return span;  // t == right boundary
}

struct CurveDesign {
    Eigen::MatrixXd phi;       // K x B
    Eigen::MatrixXd xtx;       // B x B
    Eigen::VectorXd xty;       // B
    Eigen::VectorXd y;         // K
    Eigen::MatrixXd penalty;   // B x B
};

CurveDesign build_design(std::span<const Point> points, const BasisSpec& spec) {
    const int K = static_cast<int>(points.size());
    const int B = spec.size();
    CurveDesign d;
    d.phi.resize(K, B);
    d.y.resize(K);
    for (int k = 0; k < K; ++k) {
        d.phi.row(k) = basis_eval(spec, points[static_cast<size_t>(k)].v, 0).transpose();
        d.y(k) = points[static_cast<size_t>(k)].y;
    }
    d.xtx.noalias() = d.phi.transpose() * d.phi;
    d.xty.noalias() = d.phi.transpose() * d.y;
    d.penalty = build_penalty(spec);
    return d;
}

struct FitResult {
    Eigen::VectorXd coef;
    SmoothingFit fit;
    Eigen::LDLT<Eigen::MatrixXd> ldlt;  // kept for hat-diagonal reuse
};

FitResult fit_at(const CurveDesign& d, double lambda) {
    const int K = static_cast<int>(d.y.size());
    Eigen::MatrixXd m = d.xtx + lambda * d.penalty;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(m);
    const auto& diag = ldlt.vectorD();
    double dmax = diag.cwiseAbs().maxCoeff();
    double dmin = diag.cwiseAbs().minCoeff();
    if (ldlt.info() != Eigen::Success || !(dmin > 0.0) || dmin < dmax * 1e-15) {
        double cond = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();
        throw NumericalError(kModule, "singular penalized normal matrix at lambda=" + std::to_string(lambda) +
                                          " (condition estimate " + std::to_string(cond) + ")");
    }
    FitResult r;
    r.coef = ldlt.solve(d.xty);
    Eigen::VectorXd resid = d.y - d.phi * r.coef;
    double mse = resid.squaredNorm() / static_cast<double>(K);
    double hat_trace = ldlt.solve(d.xtx).trace();
    double denom = static_cast<double>(K) - hat_trace;
    double gcv = denom * denom > 0.0 ? static_cast<double>(K) * mse / (denom * denom)
                                     : std::numeric_limits<double>::infinity();
    r.fit = SmoothingFit{lambda, gcv, hat_trace, mse};
    r.ldlt = std::move(ldlt);
    return r;
}

double loocv_from(const CurveDesign& d, const FitResult& r) {
    const int K = static_cast<int>(d.y.size());
    Eigen::VectorXd fitted = d.phi * r.coef;
    // H_kk = phi_k' (X'X + lambda P)^-1 phi_k
    Eigen::MatrixXd solved = r.ldlt.solve(d.phi.transpose());  // B x K
    double ss = 0.0;
    for (int k = 0; k < K; ++k) {
        double hkk = d.phi.row(k).dot(solved.col(k));
        double denom = 1.0 - hkk;
        if (std::abs(denom) < 1e-14) return std::numeric_limits<double>::infinity();
        double e = (d.y(k) - fitted(k)) / denom;
        ss += e * e;
    }
    return std::sqrt(ss / static_cast<double>(K));
}

void check_domain(double t) {
    if (!(t >= 0.0 && t <= 1.0))
        throw DomainError(kModule, "argument t=" + std::to_string(t) + " outside [0,1]");
}

}  // namespace

BasisSpec BasisSpec::cubic_on_unit(int interior_knots, int degree, int penalty_order) {
    if (degree < 0) throw DomainError(kModule, "degree must be >= 0");
    if (interior_knots < 0) throw DomainError(kModule, "interior knot count must be >= 0");
    BasisSpec spec;
    spec.degree = degree;
    spec.interior_knots = interior_knots;
    spec.penalty_order = penalty_order;
    for (int i = 0; i <= degree; ++i) spec.knots.push_back(0.0);
    for (int i = 1; i <= interior_knots; ++i)
        spec.knots.push_back(static_cast<double>(i) / static_cast<double>(interior_knots + 1));
    for (int i = 0; i <= degree; ++i) spec.knots.push_back(1.0);
    if (penalty_order >= spec.size())
        throw DomainError(kModule, "penalty order " + std::to_string(penalty_order) +
                                       " must be below basis dimension " + std::to_string(spec.size()));
    return spec;
}

bool BasisSpec::operator==(const BasisSpec& other) const {
    return degree == other.degree && penalty_order == other.penalty_order && knots == other.knots;
}

Eigen::VectorXd basis_eval(const BasisSpec& spec, double t, int deriv) {
    check_domain(t);
    if (deriv < 0 || deriv > 2)
        throw DomainError(kModule, "derivative order " + std::to_string(deriv) + " outside 0..2");
    const auto& tau = spec.knots;
    const int p = spec.degree;
    const int B = spec.size();
    const int d = std::min(deriv, p);  // derivatives beyond the degree vanish
    const int nfun0 = static_cast<int>(tau.size()) - 1;

    Eigen::VectorXd work = Eigen::VectorXd::Zero(nfun0);
    int span = find_span(tau, t);
    if (span >= 0) work(span) = 1.0;

    // Raise degree to p-d with the Cox-de Boor value recursion.
    for (int deg = 1; deg <= p - d; ++deg) {
        int nfun = static_cast<int>(tau.size()) - deg - 1;
        for (int k = 0; k < nfun; ++k) {
            double left = 0.0, right = 0.0;
            double den1 = tau[static_cast<size_t>(k + deg)] - tau[static_cast<size_t>(k)];
            if (den1 > 0.0) left = (t - tau[static_cast<size_t>(k)]) / den1 * work(k);
            double den2 = tau[static_cast<size_t>(k + deg + 1)] - tau[static_cast<size_t>(k + 1)];
            if (den2 > 0.0) right = (tau[static_cast<size_t>(k + deg + 1)] - t) / den2 * work(k + 1);
            work(k) = left + right;
        }
    }
    // Each remaining degree raise is a derivative lift:
    // B^{(r)}_{k,deg} = deg * (B^{(r-1)}_{k,deg-1}/(tau_{k+deg}-tau_k)
    //                        - B^{(r-1)}_{k+1,deg-1}/(tau_{k+deg+1}-tau_{k+1})).
    for (int deg = p - d + 1; deg <= p; ++deg) {
        int nfun = static_cast<int>(tau.size()) - deg - 1;
        for (int k = 0; k < nfun; ++k) {
            double left = 0.0, right = 0.0;
            double den1 = tau[static_cast<size_t>(k + deg)] - tau[static_cast<size_t>(k)];
            if (den1 > 0.0) left = work(k) / den1;
            double den2 = tau[static_cast<size_t>(k + deg + 1)] - tau[static_cast<size_t>(k + 1)];
            if (den2 > 0.0) right = work(k + 1) / den2;
            work(k) = static_cast<double>(deg) * (left - right);
        }
    }
    Eigen::VectorXd out = work.head(B);
    if (deriv > d) out.setZero();
    return out;
}

double eval_curve(const FunctionalCurve& curve, double t, int deriv) {
    return curve.coef.dot(basis_eval(*curve.basis, t, deriv));
}

double FunctionalCurve::operator()(double t, int deriv) const { return eval_curve(*this, t, deriv); }

Eigen::MatrixXd build_penalty(const BasisSpec& spec) {
    const int B = spec.size();
    const int d = spec.penalty_order;
    if (d >= B)
        throw DomainError(kModule, "penalty order " + std::to_string(d) + " must be below basis dimension " +
                                       std::to_string(B));
    Eigen::MatrixXd diff = Eigen::MatrixXd::Identity(B, B);
    for (int r = 0; r < d; ++r) {
        int rows = static_cast<int>(diff.rows()) - 1;
        Eigen::MatrixXd next(rows, B);
        for (int i = 0; i < rows; ++i) next.row(i) = diff.row(i + 1) - diff.row(i);
        diff = std::move(next);
    }
    return diff.transpose() * diff;
}

std::pair<FunctionalCurve, SmoothingFit> fit_curve(std::span<const Point> points, const BasisPtr& basis,
                                                   double lambda) {
    if (lambda < 0.0) throw DomainError(kModule, "lambda must be >= 0");
    if (points.empty()) throw DomainError(kModule, "fit_curve: no observations");
    CurveDesign design = build_design(points, *basis);
    FitResult r = fit_at(design, lambda);
    return {FunctionalCurve{basis, std::move(r.coef)}, r.fit};
}

std::vector<SmoothingFit> gcv_profile(std::span<const Point> points, const BasisPtr& basis,
                                      std::span<const double> lambdas) {
    if (lambdas.empty()) throw DomainError(kModule, "gcv_profile: empty lambda grid");
    CurveDesign design = build_design(points, *basis);
    std::vector<SmoothingFit> out;
    out.reserve(lambdas.size());
    for (double lambda : lambdas) {
        if (lambda < 0.0) throw DomainError(kModule, "lambda must be >= 0");
        out.push_back(fit_at(design, lambda).fit);
    }
    return out;
}

double loocv_score(std::span<const Point> points, const BasisPtr& basis, double lambda) {
    CurveDesign design = build_design(points, *basis);
    FitResult r = fit_at(design, lambda);
    return loocv_from(design, r);
}

std::vector<double> log_lambda_grid(double lo, double hi, int count) {
    if (count < 1 || !(lo > 0.0) || !(hi >= lo))
        throw DomainError(kModule, "invalid lambda grid specification");
    std::vector<double> grid(static_cast<size_t>(count));
    if (count == 1) {
        grid[0] = lo;
        return grid;
    }
    double llo = std::log(lo), lhi = std::log(hi);
    for (int i = 0; i < count; ++i)
        grid[static_cast<size_t>(i)] = std::exp(llo + (lhi - llo) * static_cast<double>(i) / (count - 1));
    return grid;
}

double select_global_lambda(const std::vector<std::vector<Point>>& curves, const BasisPtr& basis,
                            std::span<const double> grid, Selector selector) {
    if (curves.empty()) throw DomainError(kModule, "select_global_lambda: empty sample");
    if (grid.empty()) throw DomainError(kModule, "select_global_lambda: empty lambda grid");

    std::vector<CurveDesign> designs;
    designs.reserve(curves.size());
    for (const auto& pts : curves) designs.push_back(build_design(pts, *basis));

    double best_lambda = -1.0;
    double best_score = std::numeric_limits<double>::infinity();
    bool any = false;
    for (double lambda : grid) {
        double sum = 0.0;
        bool ok = true;
        for (const auto& design : designs) {  // fixed order keeps the mean bit-stable
            try {
                FitResult r = fit_at(design, lambda);
                sum += selector == Selector::kGcv ? r.fit.gcv : loocv_from(design, r);
            } catch (const NumericalError&) {
                ok = false;
                break;
            }
            if (!std::isfinite(sum)) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        double mean = sum / static_cast<double>(curves.size());
        // ties go to the larger (smoother) lambda; grid is scanned ascending
        if (!any || mean <= best_score) {
            best_score = mean;
            best_lambda = lambda;
            any = true;
        }
    }
    if (!any) throw NumericalError(kModule, "select_global_lambda: every grid lambda failed");
    return best_lambda;
}

}  // namespace fdaprog::smoothing
