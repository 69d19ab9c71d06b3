#include "tfd/volterra.hpp"

#include "tfd/mittag.hpp"

#include <doctest.h>

#include <cmath>

using namespace tfd;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;

// system with A~(t_j) supplied directly and no lower-order terms
GalerkinSystem make_system(std::shared_ptr<const EigenBasis> basis, TimeGrid grid,
                           const std::function<Eigen::MatrixXd(double)>& At,
                           const Eigen::VectorXd& c0) {
    GalerkinSystem sys(std::move(basis), grid);
    sys.A.resize(grid.nodes());
    bool constant = true;
    for (int j = 0; j < grid.nodes(); ++j) {
        sys.A[j] = At(grid.node(j));
        if ((sys.A[j] - sys.A[0]).cwiseAbs().maxCoeff() != 0.0) constant = false;
    }
    sys.time_constant = constant;
    sys.F = Eigen::MatrixXd::Zero(grid.nodes(), sys.modes());
    sys.F_raw = sys.F;
    sys.c0 = c0;
    return sys;
}
} // namespace

TEST_CASE("zero data gives the zero trajectory in one sweep") {
    auto basis = std::make_shared<EigenBasis>(Domain::interval(kPi), 3);
    TimeGrid grid(1.0, 64);
    auto sys = make_system(basis, grid, [&](double) {
        return Eigen::MatrixXd(Eigen::Vector3d(1.0, 4.0, 9.0).asDiagonal());
    }, Eigen::Vector3d::Zero());

    auto [field, trace] = picard_solve(sys, FracOrder(0.5));
    CHECK(field.coefficients.cwiseAbs().maxCoeff() == 0.0);
    CHECK(trace.windows.size() == 1);
    CHECK(trace.windows[0].iterations <= 2);
    CHECK(trace.final_residual == 0.0);

    auto l1 = l1_step_solve(sys, FracOrder(0.5));
    CHECK(l1.coefficients.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("diagonal relaxation reproduces the mittag-leffler decay") {
    auto basis = std::make_shared<EigenBasis>(Domain::interval(kPi), 4);
    TimeGrid grid(1.0, 2048);
    Eigen::VectorXd lam(4);
    for (int k = 0; k < 4; ++k) lam(k) = basis->eigenvalue(k);
    Eigen::VectorXd c0 = Eigen::VectorXd::Unit(4, 0);
    auto sys = make_system(basis, grid, [&](double) {
        return Eigen::MatrixXd(lam.asDiagonal());
    }, c0);

    const FracOrder half(0.5);
    auto [pic, trace] = picard_solve(sys, half);
    auto l1 = l1_step_solve(sys, half);
    double worst_p = 0.0, worst_l = 0.0;
    for (int j = 0; j <= 2048; ++j) {
        const double exact = mittag_leffler(0.5, 1.0, -std::sqrt(grid.node(j)));
        worst_p = std::max(worst_p, std::abs(pic.coefficients(j, 0) - exact));
        worst_l = std::max(worst_l, std::abs(l1.coefficients(j, 0) - exact));
        for (int k = 1; k < 4; ++k) CHECK(pic.coefficients(j, k) == 0.0);
    }
    CHECK(worst_p < 5e-3);
    CHECK(worst_l < 5e-3);

    // accepted windows tile [0, T] with contraction below one
    double t = 0.0;
    for (const auto& w : trace.windows) {
        if (!w.accepted) continue;
        CHECK(w.t_begin == doctest::Approx(t));
        CHECK(w.t_end > w.t_begin);
        CHECK(w.contraction < 1.0);
        t = w.t_end;
    }
    CHECK(t == doctest::Approx(1.0));
}

TEST_CASE("alpha near one approaches the classical exponential") {
    auto basis = std::make_shared<EigenBasis>(Domain::interval(kPi), 1);
    TimeGrid grid(1.0, 2048);
    auto sys = make_system(basis, grid, [](double) {
        return Eigen::MatrixXd::Identity(1, 1);
    }, Eigen::VectorXd::Ones(1));
    auto field = l1_step_solve(sys, FracOrder(0.95));
    double worst = 0.0;
    for (int j = 0; j <= 2048; ++j)
        worst = std::max(worst, std::abs(field.coefficients(j, 0) - std::exp(-grid.node(j))));
    CHECK(worst < 5e-2);
}

TEST_CASE("time-dependent scalar system: picard and l1 agree") {
    auto basis = std::make_shared<EigenBasis>(Domain::interval(kPi), 1);
    TimeGrid grid(1.0, 4096);
    auto sys = make_system(basis, grid, [](double t) {
        return Eigen::MatrixXd::Constant(1, 1, 1.0 + t);
    }, Eigen::VectorXd::Ones(1));
    const FracOrder half(0.5);
    auto [pic, trace] = picard_solve(sys, half);
    auto l1 = l1_step_solve(sys, half);
    CHECK((pic.coefficients - l1.coefficients).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("cross-solver discrepancy shrinks under refinement") {
    auto basis = std::make_shared<EigenBasis>(Domain::interval(kPi), 1);
    const FracOrder order(0.6);
    double prev = -1.0;
    for (int N : {512, 1024, 2048}) {
        TimeGrid grid(1.0, N);
        auto sys = make_system(basis, grid, [](double) {
            return Eigen::MatrixXd::Identity(1, 1);
        }, Eigen::VectorXd::Ones(1));
        auto [pic, trace] = picard_solve(sys, order);
        auto l1 = l1_step_solve(sys, order);
        const double gap = (pic.coefficients - l1.coefficients).cwiseAbs().maxCoeff();
        if (prev > 0.0) CHECK(prev / gap >= 1.5);
        prev = gap;
    }
}

TEST_CASE("residual: exact, converged, and perturbed trajectories") {
    auto basis = std::make_shared<EigenBasis>(Domain::interval(kPi), 2);
    TimeGrid grid(1.0, 256);
    auto sys = make_system(basis, grid, [&](double) {
        return Eigen::MatrixXd(Eigen::Vector2d(1.0, 4.0).asDiagonal());
    }, Eigen::Vector2d(1.0, 0.5));
    const FracOrder order(0.5);

    auto [field, trace] = picard_solve(sys, order);
    auto res = volterra_residual(field, sys, order);
    CHECK(res.values().cwiseAbs().maxCoeff() <= 1e-8);

    SpectralField bumped = field;
    bumped.coefficients(100, 0) += 1e-3;
    auto res2 = volterra_residual(bumped, sys, order);
    CHECK(res2.values().cwiseAbs().maxCoeff() >= 5e-4);
}

TEST_CASE("diagonal systems decouple into scalar solves") {
    TimeGrid grid(1.0, 512);
    const FracOrder order(0.4);
    auto basis3 = std::make_shared<EigenBasis>(Domain::interval(kPi), 3);
    Eigen::Vector3d lam(1.0, 4.0, 9.0);
    Eigen::Vector3d c0(1.0, -0.5, 0.25);
    auto g = [](double t) { return 1.0 + 0.5 * std::sin(t); };
    auto coupled = make_system(basis3, grid, [&](double t) {
        return Eigen::MatrixXd((g(t) * lam).asDiagonal());
    }, c0);
    auto full = l1_step_solve(coupled, order);

    for (int k = 0; k < 3; ++k) {
        auto basis1 = std::make_shared<EigenBasis>(Domain::interval(kPi), 1);
        auto scalar = make_system(basis1, grid, [&](double t) {
            return Eigen::MatrixXd::Constant(1, 1, g(t) * lam(k));
        }, Eigen::VectorXd::Constant(1, c0(k)));
        auto one = l1_step_solve(scalar, order);
        double worst = 0.0;
        for (int j = 0; j <= 512; ++j)
            worst = std::max(worst, std::abs(one.coefficients(j, 0) - full.coefficients(j, k)));
        CHECK(worst < 1e-12);
    }
}

TEST_CASE("fixed point is independent of the initial iterate") {
    auto basis = std::make_shared<EigenBasis>(Domain::interval(kPi), 1);
    TimeGrid grid(1.0, 512);
    auto sys = make_system(basis, grid, [](double t) {
        return Eigen::MatrixXd::Constant(1, 1, 1.0 + 0.25 * t);
    }, Eigen::VectorXd::Ones(1));
    const FracOrder order(0.5);
    PicardConfig c1, c2;
    c2.initial = PicardConfig::Initial::zero_extension;
    auto [f1, t1] = picard_solve(sys, order, c1);
    auto [f2, t2] = picard_solve(sys, order, c2);
    CHECK((f1.coefficients - f2.coefficients).cwiseAbs().maxCoeff() <= 10.0 * c1.tol);
}

TEST_CASE("hopeless stiffness reports non-convergence with a trace") {
    auto basis = std::make_shared<EigenBasis>(Domain::interval(kPi), 1);
    TimeGrid grid(1.0, 16);
    auto sys = make_system(basis, grid, [](double) {
        return Eigen::MatrixXd::Constant(1, 1, 1e7);
    }, Eigen::VectorXd::Ones(1));
    try {
        picard_solve(sys, FracOrder(0.5));
        FAIL("expected NonConvergenceError");
    } catch (const NonConvergenceError& e) {
        CHECK(!e.trace.windows.empty());
        CHECK(std::string(e.what()).find("window") != std::string::npos);
    }
}
