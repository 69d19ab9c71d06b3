#include "tfd/fraccalc.hpp"

#include <doctest.h>

#include <cmath>
#include <random>

using namespace tfd;

namespace {
double sup_diff(const TimeSeries& a, const TimeSeries& b, int from = 0) {
    double m = 0.0;
    for (int j = from; j < a.grid().nodes(); ++j)
        m = std::max(m, std::abs(a(j) - b(j)));
    return m;
}
} // namespace

TEST_CASE("fractional integral of a constant is the power-law moment") {
    TimeGrid g(1.0, 256);
    auto one = TimeSeries::sample(g, [](double) { return 1.0; });
    auto I = frac_integral(one, FracOrder(0.5));
    CHECK(I(0) == 0.0);
    // I^a 1 = t^a / Gamma(1+a), exact for the product-trapezoid rule
    for (int j : {1, 100, 256})
        CHECK(I(j) == doctest::Approx(std::pow(g.node(j), 0.5) / std::tgamma(1.5)).epsilon(1e-13));
    CHECK(I(256) == doctest::Approx(1.1283791670955126).epsilon(1e-12));
}

TEST_CASE("fractional integral of t is exact") {
    TimeGrid g(2.0, 128);
    auto lin = TimeSeries::sample(g, [](double t) { return t; });
    for (double a : {0.25, 0.5, 0.75}) {
        auto I = frac_integral(lin, FracOrder(a));
        for (int j : {1, 64, 128}) {
            const double t = g.node(j);
            CHECK(I(j) == doctest::Approx(std::pow(t, 1.0 + a) / std::tgamma(2.0 + a)).epsilon(1e-12));
        }
    }
}

TEST_CASE("caputo derivative annihilates constants and is exact on t") {
    TimeGrid g(1.0, 200);
    auto c = TimeSeries::sample(g, [](double) { return 7.25; });
    auto Dc = caputo_derivative(c, FracOrder(0.3));
    for (int j = 1; j <= 200; ++j) CHECK(Dc(j) == 0.0);

    auto lin = TimeSeries::sample(g, [](double t) { return t; });
    auto Dl = caputo_derivative(lin, FracOrder(0.5));
    for (int j : {1, 50, 200}) {
        const double t = g.node(j);
        CHECK(Dl(j) == doctest::Approx(std::pow(t, 0.5) / std::tgamma(1.5)).epsilon(1e-12));
    }
    CHECK_FALSE(Dl.origin_defined());
}

TEST_CASE("riemann-liouville derivative of constants and linear combinations") {
    TimeGrid g(1.0, 128);
    auto one = TimeSeries::sample(g, [](double) { return 1.0; });
    auto R = rl_derivative(one, FracOrder(0.5));
    for (int j : {1, 32, 128}) {
        const double t = g.node(j);
        CHECK(R(j) == doctest::Approx(std::pow(t, -0.5) / std::tgamma(0.5)).epsilon(1e-12));
    }

    // f = 1 + t: linearity of the two power laws
    auto f = TimeSeries::sample(g, [](double t) { return 1.0 + t; });
    auto Rf = rl_derivative(f, FracOrder(0.5));
    for (int j : {1, 64, 128}) {
        const double t = g.node(j);
        const double want =
            std::pow(t, -0.5) / std::tgamma(0.5) + std::pow(t, 0.5) / std::tgamma(1.5);
        CHECK(Rf(j) == doctest::Approx(want).epsilon(1e-12));
    }
}

TEST_CASE("rl and caputo differ exactly by the initial-value correction") {
    TimeGrid g(1.5, 64);
    auto f = TimeSeries::sample(g, [](double t) { return std::cos(3 * t) + 2.0; });
    const FracOrder a(0.37);
    auto D = caputo_derivative(f, a);
    auto R = rl_derivative(f, a);
    const double ginv = 1.0 / std::tgamma(1.0 - a.value());
    for (int j = 1; j <= 64; ++j) {
        const double corr = f(0) * std::pow(g.node(j), -a.value()) * ginv;
        CHECK(R(j) - D(j) == corr); // same arithmetic path, bit-level
    }
}

TEST_CASE("operators are linear on a fixed grid") {
    TimeGrid g(1.0, 96);
    std::mt19937 rng(991u);
    std::uniform_real_distribution<double> uni(-1.0, 1.0);
    Eigen::MatrixXd va(g.nodes(), 1), vb(g.nodes(), 1);
    for (int j = 0; j < g.nodes(); ++j) {
        va(j, 0) = uni(rng);
        vb(j, 0) = uni(rng);
    }
    TimeSeries fa(g, va), fb(g, vb);
    const double c1 = 1.7, c2 = -0.4;
    TimeSeries mix(g, c1 * va + c2 * vb);
    const FracOrder a(0.6);

    auto lhsI = frac_integral(mix, a);
    auto rI = frac_integral(fa, a), sI = frac_integral(fb, a);
    auto lhsD = caputo_derivative(mix, a);
    auto rD = caputo_derivative(fa, a), sD = caputo_derivative(fb, a);
    for (int j = 1; j < g.nodes(); ++j) {
        CHECK(lhsI(j) == doctest::Approx(c1 * rI(j) + c2 * sI(j)).epsilon(1e-12));
        CHECK(lhsD(j) == doctest::Approx(c1 * rD(j) + c2 * sD(j)).epsilon(1e-11));
    }
}

TEST_CASE("roundtrip I^a D^a f recovers f - f(0) under refinement, monotonically") {
    const FracOrder a(0.5);
    double prev = -1.0;
    for (int N : {128, 256, 512, 1024}) {
        TimeGrid g(1.0, N);
        auto f = TimeSeries::sample(g, [](double t) { return t + std::sin(t); });
        auto round = frac_integral(caputo_derivative(f, a), a);
        double worst = 0.0;
        for (int j = 1; j <= N; ++j)
            worst = std::max(worst, std::abs(round(j) - (f(j) - f(0))));
        if (prev >= 0.0) CHECK(worst < prev); // monotone decrease across dyadic refinement
        prev = worst;
    }
    CHECK(prev < 2e-4);
}

TEST_CASE("semigroup I^a I^b = I^{a+b} residual halves per grid doubling") {
    double prev = -1.0;
    for (int N : {256, 512, 1024}) {
        TimeGrid g(1.0, N);
        auto f = TimeSeries::sample(g, [](double t) { return std::sin(t); });
        auto two = frac_integral(frac_integral(f, 0.4), 0.3);
        auto one = frac_integral(f, 0.7);
        const double d = sup_diff(two, one);
        if (prev > 0.0) CHECK(prev / d >= 2.0);
        prev = d;
    }
    CHECK(prev < 1e-6); // frozen from the N=16384 development run (6.6e-9 at N=1024)
}

TEST_CASE("composition ra(D^a f) approximates D^{a+b} f for f = t^2") {
    // exact D^{0.5} t^2 = 2 t^{1.5} / Gamma(2.5)
    TimeGrid g(1.0, 2048);
    auto f = TimeSeries::sample(g, [](double t) { return t * t; });
    auto inner = caputo_derivative(f, FracOrder(0.3));
    Eigen::MatrixXd iv = inner.values();
    iv(0, 0) = 0.0; // continuum limit of D^0.3 t^2 at t = 0
    auto lhs = rl_derivative(TimeSeries(g, iv), FracOrder(0.2));
    auto direct = caputo_derivative(f, FracOrder(0.5));
    double worst_vs_exact = 0.0, worst_pair = 0.0;
    for (int j = 16; j <= 2048; ++j) {
        const double exact = 2.0 * std::pow(g.node(j), 1.5) / std::tgamma(2.5);
        worst_vs_exact = std::max(worst_vs_exact, std::abs(direct(j) - exact));
        worst_pair = std::max(worst_pair, std::abs(lhs(j) - direct(j)));
    }
    CHECK(worst_vs_exact < 1e-5);
    CHECK(worst_pair < 5e-4); // discretization envelope, shrinks under refinement
}

TEST_CASE("y_alpha norm of presets") {
    TimeGrid g(1.0, 4096);
    const FracOrder a(0.5);
    auto c = TimeSeries::sample(g, [](double) { return -3.5; });
    CHECK(y_alpha_norm(c, a) == doctest::Approx(3.5));

    // f = t^alpha: weighted derivative is the constant alpha
    auto p = TimeSeries::sample(g, [](double t) { return std::pow(t, 0.5); });
    CHECK(y_alpha_norm(p, a) == doctest::Approx(1.0 + 0.5).epsilon(1e-3));

    // fine-grid reference value for sin on [0,1] (dev run at N = 65536: 1.4833026)
    auto s = TimeSeries::sample(g, [](double t) { return std::sin(t); });
    CHECK(y_alpha_norm(s, a) == doctest::Approx(1.4833037).epsilon(0.01));

    TimeGrid tiny(1.0, 3);
    auto t3 = TimeSeries::sample(tiny, [](double t) { return t; });
    CHECK_THROWS_AS(y_alpha_norm(t3, a), std::invalid_argument);
}

TEST_CASE("non-finite input is rejected with the offending index") {
    TimeGrid g(1.0, 8);
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(9, 1);
    v(5, 0) = std::numeric_limits<double>::infinity();
    CHECK_THROWS_WITH_AS(TimeSeries(g, v), doctest::Contains("index 5"), std::invalid_argument);
}

TEST_CASE("frac orders outside (0,1) are rejected") {
    CHECK_THROWS_AS(FracOrder(0.0), std::invalid_argument);
    CHECK_THROWS_AS(FracOrder(1.0), std::invalid_argument);
    CHECK_THROWS_AS(FracOrder(-0.2), std::invalid_argument);
}
