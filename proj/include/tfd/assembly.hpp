#pragma once

#include "tfd/basis.hpp"
#include "tfd/coefficients.hpp"
#include "tfd/grid.hpp"

#include <memory>
#include <vector>

namespace tfd {

/// How a signal on [0,T] is extended before time mollification.
/// even: reflection about both endpoints.
/// odd:  odd reflection about t=0 (origin sample treated as 0), zero beyond T.
/// zero: zero outside [0,T].
enum class ExtensionMode { even, odd, zero };

/// Convolve with a discrete-unit-mass symmetric C-infinity bump of support
/// radius epsilon after extending per `mode`.  epsilon == 0 is the identity;
/// 0 < epsilon <= dt is rejected (kernel unresolvable on the grid);
/// epsilon must stay below the horizon.
TimeSeries mollify(const TimeSeries& signal, double epsilon, ExtensionMode mode);

/// Forcing data: absent, a general field f(x[,y],t), or the modal form
/// f = g(t) * phi_k.
struct ForcingSpec {
    enum class Kind { none, expression, modal };
    Kind kind = Kind::none;
    ScalarField field;
    int mode = 1;
    Expr g;

    static ForcingSpec none() { return {}; }
    static ForcingSpec expression(ScalarField f) {
        ForcingSpec s;
        s.kind = Kind::expression;
        s.field = std::move(f);
        return s;
    }
    static ForcingSpec modal(int k, Expr g_of_t) {
        ForcingSpec s;
        s.kind = Kind::modal;
        s.mode = k;
        s.g = std::move(g_of_t);
        return s;
    }
};

/// Time-sampled Galerkin matrices and data of the projected problem
///   D^alpha c = -A(t) c + B(t) c + C(t) c + F(t),  c(0) = c0.
struct GalerkinSystem {
    std::shared_ptr<const EigenBasis> basis;
    TimeGrid grid;
    std::vector<Eigen::MatrixXd> A;
    std::vector<Eigen::MatrixXd> B; // empty when the drift vanishes
    std::vector<Eigen::MatrixXd> C; // empty when the reaction vanishes
    Eigen::MatrixXd F;              // (N+1) x n, mollified forcing coefficients
    Eigen::MatrixXd F_raw;          // (N+1) x n, before mollification (diagnostics)
    Eigen::VectorXd c0;
    double lambda = 1.0, mu = 1.0;
    double epsilon = 0.0;
    double sup_drift = 0.0;    // sup over lattice of |b(x,t)|
    double sup_reaction = 0.0; // sup over lattice of |c(x,t)|
    bool time_constant = false;

    GalerkinSystem(std::shared_ptr<const EigenBasis> bas, TimeGrid g)
        : basis(std::move(bas)), grid(g) {}

    int modes() const { return basis->count(); }
    bool lower_order_present() const { return !B.empty() || !C.empty(); }

    /// A - B - C at node j (the operator of the fixed-point form).
    Eigen::MatrixXd a_tilde(int j) const {
        Eigen::MatrixXd m = A.at(j);
        if (!B.empty()) m -= B[j];
        if (!C.empty()) m -= C[j];
        return m;
    }
};

/// Assemble the system: validates ellipticity, computes the spatial inner
/// products on the shared quadrature lattice, mollifies the matrix entries
/// in time (even extension for A, zero for B and C, odd for F), and
/// projects the initial data.
GalerkinSystem assemble(const CoefficientSet& coeffs, const ForcingSpec& forcing,
                        const SpatialFn& initial, std::shared_ptr<const EigenBasis> basis,
                        const TimeGrid& grid, double epsilon);

} // namespace tfd
