#include <doctest.h>

#include <cmath>
#include <random>

#include "fdaprog/error.hpp"
#include "fdaprog/smoothing.hpp"
#include "support/oracles.hpp"

using namespace fdaprog;
using smoothing::BasisSpec;
using smoothing::Point;

namespace {

smoothing::BasisPtr make_basis(int interior = 7, int degree = 3, int penalty = 2) {
    return std::make_shared<BasisSpec>(BasisSpec::cubic_on_unit(interior, degree, penalty));
}

std::vector<Point> sine_data(int count, double noise_sd, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> noise(0.0, noise_sd);
    std::vector<Point> pts(static_cast<size_t>(count));
    for (int k = 0; k < count; ++k) {
        double v = static_cast<double>(k) / (count - 1);
        pts[static_cast<size_t>(k)] = {v, std::sin(2.0 * M_PI * v) + noise(rng)};
    }
    return pts;
}

}  // namespace

TEST_SUITE("smoothing") {

TEST_CASE("basis dimension follows the clamped-knot rule") {
    auto spec = BasisSpec::cubic_on_unit(19);
    CHECK(spec.size() == 23);
    CHECK(spec.knots.size() == 27u);
    CHECK(spec.knots.front() == 0.0);
    CHECK(spec.knots.back() == 1.0);
    auto bezier = BasisSpec::cubic_on_unit(0);
    CHECK(bezier.size() == 4);
}

TEST_CASE("degree-0 basis is the span indicator") {
    auto spec = BasisSpec::cubic_on_unit(3, 0, 0);  // knots 0,.25,.5,.75,1
    Eigen::VectorXd values = smoothing::basis_eval(spec, 0.3, 0);
    CHECK(values.size() == 4);
    CHECK(values(1) == 1.0);
    CHECK(values.sum() == 1.0);
    // right boundary falls into the last span
    Eigen::VectorXd at_end = smoothing::basis_eval(spec, 1.0, 0);
    CHECK(at_end(3) == 1.0);
}

TEST_CASE("partition of unity on a 1000-point grid") {
    auto basis = make_basis(19);
    for (int g = 0; g <= 1000; ++g) {
        double t = static_cast<double>(g) / 1000.0;
        double sum = smoothing::basis_eval(*basis, t, 0).sum();
        CHECK(std::abs(sum - 1.0) <= 1e-10);
    }
}

TEST_CASE("values match the recursive reference at mid-knot and random points") {
    auto basis = make_basis(6);
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    std::vector<double> ts = {0.0, 0.5, 1.0, basis->knots[5], 0.5 * (basis->knots[5] + basis->knots[6])};
    for (int r = 0; r < 50; ++r) ts.push_back(uni(rng));
    for (double t : ts) {
        Eigen::VectorXd got = smoothing::basis_eval(*basis, t, 0);
        Eigen::VectorXd want = oracles::ref_basis_all(*basis, t);
        CHECK((got - want).cwiseAbs().maxCoeff() <= 1e-13);
    }
}

TEST_CASE("local support: basis k vanishes outside its knot window") {
    auto basis = make_basis(8);
    const auto& tau = basis->knots;
    for (int k = 0; k < basis->size(); ++k) {
        for (int g = 0; g <= 200; ++g) {
            double t = static_cast<double>(g) / 200.0;
            bool inside = t >= tau[static_cast<size_t>(k)] && t <= tau[static_cast<size_t>(k + basis->degree + 1)];
            if (!inside) CHECK(smoothing::basis_eval(*basis, t, 0)(k) == 0.0);
        }
    }
}

TEST_CASE("analytic derivatives agree with finite differences of the reference") {
    auto basis = make_basis(7);
    // interior points away from knots
    for (double t : {0.037, 0.21, 0.333, 0.46, 0.55, 0.68, 0.805, 0.93}) {
        Eigen::VectorXd d1 = smoothing::basis_eval(*basis, t, 1);
        Eigen::VectorXd d2 = smoothing::basis_eval(*basis, t, 2);
        for (int k = 0; k < basis->size(); ++k) {
            auto f = [&](double x) { return oracles::ref_bspline(basis->knots, k, basis->degree, x, true); };
            double fd1 = oracles::central_diff(f, t, 1e-6);
            double fd2 = oracles::second_diff(f, t, 1e-5);
            CHECK(std::abs(d1(k) - fd1) <= 1e-5 * std::max(1.0, std::abs(d1(k))));
            CHECK(std::abs(d2(k) - fd2) <= 1e-4 * std::max(1.0, std::abs(d2(k))));
        }
    }
}

TEST_CASE("second-difference penalty stencil and nullspace") {
    auto spec = BasisSpec::cubic_on_unit(0, 3, 2);  // B = 4
    Eigen::MatrixXd p = smoothing::build_penalty(spec);
    Eigen::MatrixXd d(2, 4);
    d << 1, -2, 1, 0, 0, 1, -2, 1;
    CHECK((p - d.transpose() * d).cwiseAbs().maxCoeff() == 0.0);

    auto big = BasisSpec::cubic_on_unit(9, 3, 2);
    Eigen::MatrixXd pen = smoothing::build_penalty(big);
    Eigen::VectorXd constant = Eigen::VectorXd::Constant(big.size(), 3.7);
    Eigen::VectorXd ramp(big.size());
    for (int i = 0; i < big.size(); ++i) ramp(i) = -1.0 + 0.5 * i;
    CHECK(std::abs(constant.dot(pen * constant)) <= 1e-12);
    CHECK(std::abs(ramp.dot(pen * ramp)) <= 1e-10);
}

TEST_CASE("cubic data is reproduced exactly at lambda = 0") {
    auto basis = make_basis(5);
    std::vector<Point> pts;
    for (int k = 0; k < 40; ++k) {
        double v = static_cast<double>(k) / 39.0;
        pts.push_back({v, 2.0 - v + 3.0 * v * v - 0.5 * v * v * v});
    }
    auto [curve, fit] = smoothing::fit_curve(pts, basis, 0.0);
    CHECK(fit.residual_mse <= 1e-16);
    CHECK(std::abs(curve(0.314) - (2.0 - 0.314 + 3.0 * 0.314 * 0.314 - 0.5 * 0.314 * 0.314 * 0.314)) <= 1e-7);
}

TEST_CASE("huge lambda with d=2 collapses to the least-squares line") {
    // data kept away from the boundary intervals, where coefficient-linear
    // and function-linear coincide
    auto basis = make_basis(9);
    std::mt19937_64 rng(11);
    std::normal_distribution<double> noise(0.0, 0.3);
    std::vector<Point> pts;
    std::vector<double> xs, ys;
    for (int k = 0; k < 60; ++k) {
        double v = 0.15 + 0.7 * static_cast<double>(k) / 59.0;
        double y = 1.0 + 2.0 * v + std::sin(6.0 * v) * 0.2 + noise(rng);
        pts.push_back({v, y});
        xs.push_back(v);
        ys.push_back(y);
    }
    auto [curve, fit] = smoothing::fit_curve(pts, basis, 1e12);
    auto [a, b] = oracles::ols_line(xs, ys);
    for (const auto& p : pts) CHECK(std::abs(curve(p.v) - (a + b * p.v)) <= 1e-3);
    CHECK(fit.hat_trace == doctest::Approx(2.0).epsilon(1e-3));
}

TEST_CASE("lambda = 0 fit equals ordinary least squares") {
    auto basis = make_basis(4);
    auto pts = sine_data(50, 0.1, 3);
    auto [curve, fit] = smoothing::fit_curve(pts, basis, 0.0);
    Eigen::MatrixXd phi(50, basis->size());
    Eigen::VectorXd y(50);
    for (int k = 0; k < 50; ++k) {
        phi.row(k) = smoothing::basis_eval(*basis, pts[static_cast<size_t>(k)].v, 0).transpose();
        y(k) = pts[static_cast<size_t>(k)].y;
    }
    Eigen::VectorXd ols = phi.colPivHouseholderQr().solve(y);
    CHECK((phi * curve.coef - phi * ols).cwiseAbs().maxCoeff() <= 1e-8);
}

TEST_CASE("residual mse is monotone in lambda") {
    auto basis = make_basis(9);
    auto pts = sine_data(80, 0.25, 5);
    double prev = -1.0;
    for (double lambda : smoothing::log_lambda_grid(1e-6, 1e2, 25)) {
        auto [curve, fit] = smoothing::fit_curve(pts, basis, lambda);
        CHECK(fit.residual_mse >= prev - 1e-12);
        prev = fit.residual_mse;
    }
}

TEST_CASE("gcv profile: single grid point equals fit_curve; matches explicit hat-matrix oracle") {
    auto basis = make_basis(9);
    auto pts = sine_data(30, 0.2, 9);
    std::vector<double> one = {0.01};
    auto profile = smoothing::gcv_profile(pts, basis, one);
    auto [curve, fit] = smoothing::fit_curve(pts, basis, 0.01);
    CHECK(profile.size() == 1);
    CHECK(profile[0].gcv == doctest::Approx(fit.gcv).epsilon(1e-12));
    CHECK(profile[0].gcv == doctest::Approx(oracles::ref_gcv(pts, *basis, 0.01)).epsilon(1e-9));
}

TEST_CASE("gcv has an interior minimum on noisy data, matching a fine-grid scan") {
    auto basis = make_basis(9);
    auto pts = sine_data(30, 0.2, 13);
    auto grid = smoothing::log_lambda_grid(1e-6, 1e2, 25);
    auto profile = smoothing::gcv_profile(pts, basis, grid);
    size_t argmin = 0;
    for (size_t i = 1; i < profile.size(); ++i)
        if (profile[i].gcv < profile[argmin].gcv) argmin = i;
    CHECK(argmin > 0);
    CHECK(argmin + 1 < profile.size());

    // brute force on a 5x denser grid through the independent GCV path
    auto fine = smoothing::log_lambda_grid(1e-6, 1e2, 121);
    size_t fine_argmin = 0;
    double best = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < fine.size(); ++i) {
        double gcv = oracles::ref_gcv(pts, *basis, fine[i]);
        if (gcv < best) {
            best = gcv;
            fine_argmin = i;
        }
    }
    double coarse_best = std::log(grid[argmin]);
    double fine_best = std::log(fine[fine_argmin]);
    double coarse_step = std::log(grid[1]) - std::log(grid[0]);
    CHECK(std::abs(coarse_best - fine_best) <= coarse_step + 1e-12);
}

TEST_CASE("noise-free representable data drives gcv to the smallest lambda") {
    auto basis = make_basis(6);
    std::vector<Point> pts;
    for (int k = 0; k < 50; ++k) {
        double v = static_cast<double>(k) / 49.0;
        pts.push_back({v, 1.0 + v * v});
    }
    auto grid = smoothing::log_lambda_grid(1e-6, 1e2, 25);
    auto profile = smoothing::gcv_profile(pts, basis, grid);
    size_t argmin = 0;
    for (size_t i = 1; i < profile.size(); ++i)
        if (profile[i].gcv < profile[argmin].gcv) argmin = i;
    CHECK(argmin == 0);
}

TEST_CASE("global lambda: identical curves reduce to the single-curve minimizer") {
    auto basis = make_basis(9);
    auto pts = sine_data(40, 0.15, 21);
    auto grid = smoothing::log_lambda_grid(1e-4, 1e1, 15);
    std::vector<std::vector<Point>> sample = {pts, pts, pts};
    double lambda = smoothing::select_global_lambda(sample, basis, grid);

    auto profile = smoothing::gcv_profile(pts, basis, grid);
    size_t argmin = 0;
    for (size_t i = 1; i < profile.size(); ++i)
        if (profile[i].gcv <= profile[argmin].gcv) argmin = i;  // same larger-lambda tie rule
    CHECK(lambda == grid[argmin]);
}

TEST_CASE("global lambda minimizes the summed profile (two-curve brute force)") {
    auto basis = make_basis(9);
    auto a = sine_data(40, 0.05, 31);
    auto b = sine_data(35, 0.6, 37);
    auto grid = smoothing::log_lambda_grid(1e-6, 1e2, 25);
    std::vector<std::vector<Point>> sample = {a, b};
    double lambda = smoothing::select_global_lambda(sample, basis, grid);

    double best = std::numeric_limits<double>::infinity();
    double best_lambda = -1.0;
    for (double l : grid) {
        double sum = oracles::ref_gcv(a, *basis, l) + oracles::ref_gcv(b, *basis, l);
        if (sum <= best) {
            best = sum;
            best_lambda = l;
        }
    }
    CHECK(lambda == doctest::Approx(best_lambda).epsilon(1e-12));
}

TEST_CASE("loocv selector runs and the hat-diagonal shortcut is sane") {
    auto basis = make_basis(6);
    auto pts = sine_data(40, 0.2, 41);
    double score_small = smoothing::loocv_score(pts, basis, 1e-4);
    double score_large = smoothing::loocv_score(pts, basis, 1e3);
    CHECK(score_small > 0.0);
    CHECK(score_large > 0.0);
    std::vector<std::vector<Point>> sample = {pts};
    auto grid = smoothing::log_lambda_grid(1e-4, 1e1, 10);
    double lambda = smoothing::select_global_lambda(sample, basis, grid, smoothing::Selector::kLoocv);
    CHECK(lambda >= 1e-4);
    CHECK(lambda <= 1e1);
}

TEST_CASE("eval_curve: partition of unity makes constant coefficients a constant curve") {
    auto basis = make_basis(9);
    smoothing::FunctionalCurve curve{basis, Eigen::VectorXd::Constant(basis->size(), 4.2)};
    for (double t : {0.0, 0.31, 0.77, 1.0}) {
        CHECK(curve(t) == doctest::Approx(4.2).epsilon(1e-12));
        CHECK(std::abs(curve(t, 1)) <= 1e-9);
    }
}

TEST_CASE("eval_curve derivative matches a central finite difference") {
    auto basis = make_basis(9);
    std::mt19937_64 rng(55);
    std::normal_distribution<double> coef(0.0, 1.0);
    Eigen::VectorXd c(basis->size());
    for (int i = 0; i < c.size(); ++i) c(i) = coef(rng);
    smoothing::FunctionalCurve curve{basis, c};
    double analytic = curve(0.37, 1);
    double fd = (curve(0.37 + 1e-6) - curve(0.37 - 1e-6)) / 2e-6;
    CHECK(std::abs(analytic - fd) <= 1e-5 * std::max(1.0, std::abs(analytic)));
}

TEST_CASE("domain and failure errors") {
    auto basis = make_basis(5);
    CHECK_THROWS_AS(smoothing::basis_eval(*basis, -0.01, 0), DomainError);
    CHECK_THROWS_AS(smoothing::basis_eval(*basis, 1.01, 0), DomainError);
    CHECK_THROWS_AS(smoothing::basis_eval(*basis, 0.5, 3), DomainError);

    // fewer observations than basis functions and no penalty: singular
    std::vector<Point> few = {{0.1, 1.0}, {0.5, 2.0}, {0.9, 0.5}};
    CHECK_THROWS_AS(smoothing::fit_curve(few, basis, 0.0), NumericalError);
    // a positive penalty restores solvability
    CHECK_NOTHROW(smoothing::fit_curve(few, basis, 1e-3));

    std::vector<std::vector<Point>> sample = {few};
    std::vector<double> zero_grid = {0.0};
    CHECK_THROWS_AS(smoothing::select_global_lambda(sample, basis, zero_grid), NumericalError);
}

}  // TEST_SUITE
