#include "tfd/basis.hpp"

#include <doctest.h>

#include <cmath>

using namespace tfd;

namespace {
constexpr double kPi = 3.141592653589793238462643383279502884;
}

TEST_CASE("interval eigenpairs are the analytic sine family") {
    EigenBasis basis(Domain::interval(kPi), 4);
    CHECK(basis.eigenvalue(1) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(basis.phi(1, 0.7) ==
          doctest::Approx(std::sqrt(2.0 / kPi) * std::sin(2 * 0.7)).epsilon(1e-14));
}

TEST_CASE("rectangle spectrum is sorted with the lexicographic tie-break") {
    EigenBasis basis(Domain::rectangle(kPi, kPi, 16), 6);
    CHECK(basis.eigenvalue(0) == doctest::Approx(2.0));
    CHECK(basis.eigenvalue(1) == doctest::Approx(5.0));
    CHECK(basis.eigenvalue(2) == doctest::Approx(5.0));
    CHECK(basis.eigenvalue(3) == doctest::Approx(8.0));
    CHECK(basis.mode_indices(1) == std::pair<int, int>{1, 2}); // (1,2) before (2,1)
    CHECK(basis.mode_indices(2) == std::pair<int, int>{2, 1});
}

TEST_CASE("gram matrix is the identity under the shared quadrature") {
    EigenBasis basis(Domain::interval(kPi, 128), 64);
    const QuadLattice lat = domain_quadrature(basis.domain());
    Eigen::MatrixXd phi(lat.size(), 64);
    for (int k = 0; k < 64; ++k)
        for (size_t i = 0; i < lat.size(); ++i)
            phi(static_cast<Eigen::Index>(i), k) = basis.phi(k, lat.x[i], 0.0);
    Eigen::VectorXd w(lat.size());
    for (size_t i = 0; i < lat.size(); ++i) w(static_cast<Eigen::Index>(i)) = lat.w[i];
    Eigen::MatrixXd G = phi.transpose() * w.asDiagonal() * phi;
    CHECK((G - Eigen::MatrixXd::Identity(64, 64)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("stiffness matrix reproduces the eigenvalues") {
    EigenBasis basis(Domain::interval(kPi, 128), 24);
    const QuadLattice lat = domain_quadrature(basis.domain());
    Eigen::MatrixXd dphi(lat.size(), 24);
    for (int k = 0; k < 24; ++k)
        for (size_t i = 0; i < lat.size(); ++i) {
            double gx, gy;
            basis.grad_phi(k, lat.x[i], 0.0, gx, gy);
            dphi(static_cast<Eigen::Index>(i), k) = gx;
        }
    Eigen::VectorXd w(lat.size());
    for (size_t i = 0; i < lat.size(); ++i) w(static_cast<Eigen::Index>(i)) = lat.w[i];
    Eigen::MatrixXd S = dphi.transpose() * w.asDiagonal() * dphi;
    for (int k = 0; k < 24; ++k) {
        CHECK(S(k, k) == doctest::Approx(basis.eigenvalue(k)).epsilon(1e-8));
        for (int m = 0; m < 24; ++m)
            if (m != k) CHECK(std::abs(S(k, m)) < 1e-8);
    }
}

TEST_CASE("boundary vanishing to machine precision") {
    EigenBasis b1(Domain::interval(kPi), 16);
    for (int k = 0; k < 16; ++k) {
        CHECK(std::abs(b1.phi(k, 0.0)) == 0.0);
        CHECK(std::abs(b1.phi(k, kPi)) < 1e-13);
    }
    EigenBasis b2(Domain::rectangle(1.0, 2.0, 16), 9);
    for (int k = 0; k < 9; ++k) {
        CHECK(std::abs(b2.phi(k, 0.0, 0.7)) == 0.0);
        CHECK(std::abs(b2.phi(k, 1.0, 0.7)) < 1e-13);
        CHECK(std::abs(b2.phi(k, 0.3, 2.0)) < 1e-13);
    }
}

TEST_CASE("projection of a basis function is a unit vector") {
    EigenBasis basis(Domain::interval(kPi, 128), 8);
    auto f = [&](double x, double) { return basis.phi(2, x, 0.0); };
    Eigen::VectorXd c = project(f, basis);
    for (int k = 0; k < 8; ++k)
        CHECK(c(k) == doctest::Approx(k == 2 ? 1.0 : 0.0).epsilon(1e-10).scale(1.0));

    Eigen::VectorXd z = project([](double, double) { return 0.0; }, basis);
    CHECK(z.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("parabola coefficients match the closed-form sine integrals") {
    // <x(pi-x), phi_k> = 4 sqrt(2/pi) / k^3 for odd k, 0 for even k
    EigenBasis basis(Domain::interval(kPi, 128), 12);
    Eigen::VectorXd c = project(spatial_preset("parabola", basis.domain()), basis);
    for (int k = 1; k <= 12; ++k) {
        const double want = (k % 2 == 1) ? 4.0 * std::sqrt(2.0 / kPi) / (k * k * k) : 0.0;
        CHECK(c(k - 1) == doctest::Approx(want).epsilon(1e-10).scale(1.0));
    }
}

TEST_CASE("reconstruct inverts projection on the span") {
    EigenBasis basis(Domain::interval(2.0, 64), 6);
    Eigen::VectorXd coeffs(6);
    coeffs << 0.3, -1.2, 0.05, 0.0, 2.0, -0.7;
    std::vector<std::array<double, 2>> pts;
    for (int i = 0; i <= 40; ++i) pts.push_back({2.0 * i / 40.0, 0.0});
    Eigen::VectorXd vals = reconstruct(coeffs, basis, pts);
    // project the reconstructed field back
    Eigen::VectorXd back = project(
        [&](double x, double) {
            double acc = 0.0;
            for (int k = 0; k < 6; ++k) acc += coeffs(k) * basis.phi(k, x, 0.0);
            return acc;
        },
        basis);
    CHECK((back - coeffs).cwiseAbs().maxCoeff() < 1e-10);

    Eigen::VectorXd e1 = Eigen::VectorXd::Unit(6, 0);
    Eigen::VectorXd v1 = reconstruct(e1, basis, pts);
    for (size_t i = 0; i < pts.size(); ++i)
        CHECK(v1(static_cast<Eigen::Index>(i)) ==
              doctest::Approx(basis.phi(0, pts[i][0], 0.0)).epsilon(1e-14));

    CHECK_THROWS_AS(reconstruct(Eigen::VectorXd::Zero(5), basis, pts), std::invalid_argument);
}

TEST_CASE("spectral truncation error of the parabola stays below 1e-3 at n = 32") {
    EigenBasis basis(Domain::interval(kPi, 128), 32);
    auto f = spatial_preset("parabola", basis.domain());
    Eigen::VectorXd c = project(f, basis);
    const QuadLattice lat = domain_quadrature(basis.domain());
    double fsq = 0.0;
    for (size_t i = 0; i < lat.size(); ++i) fsq += lat.w[i] * f(lat.x[i], 0.0) * f(lat.x[i], 0.0);
    const double err2 = fsq - c.squaredNorm(); // Parseval remainder
    CHECK(err2 > 0.0);
    CHECK(std::sqrt(err2) < 1e-3);
    CHECK(std::sqrt(err2) > 1e-5); // sanity: the tail is genuinely there
}

TEST_CASE("domain validation") {
    CHECK_THROWS_AS(Domain::interval(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(Domain::interval(1.0, 8), std::invalid_argument); // resolution floor
    CHECK_THROWS_AS(EigenBasis(Domain::interval(1.0), 0), std::invalid_argument);
}
