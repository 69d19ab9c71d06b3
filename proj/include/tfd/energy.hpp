#pragma once

#include "tfd/assembly.hpp"
#include "tfd/fraccalc.hpp"
#include "tfd/volterra.hpp"

#include <map>
#include <string>
#include <vector>

namespace tfd {

/// Term-by-term record of one identity or estimate evaluation.  Reports are
/// deterministic for fixed inputs and serialize to text or (term,value) CSV.
struct EnergyReport {
    std::string identity;
    std::vector<std::pair<std::string, double>> terms;
    Eigen::VectorXd nodewise_defect; // defect (identities) or margin (estimates) at t_1..t_N
    double residual_l1 = 0.0;        // L1-in-time norm of the defect
    double defect_sup = 0.0;
    bool inequality_holds = true;
    double min_margin = 0.0;
    int grid_steps = 0;
    double horizon = 0.0;
    double alpha = 0.0;

    double term(const std::string& name) const;
    std::string to_text() const;
    void write_csv(const std::string& path) const;
};

/// Defect of the coercivity identity for the Caputo derivative of ||w||^2:
///   D^a||w||^2 + (a/G(1-a)) int_0^t (t-s)^{-a-1}||w(t)-w(s)||^2 ds
///     + t^{-a}/G(1-a) ||w(t)-w(0)||^2 - 2<D^a w, w>
/// evaluated at t_1..t_N with subtracted-singularity product quadrature.
EnergyReport caputo_energy_identity_residual(const TimeSeries& w, const FracOrder& order);

/// Defect of the quadratic Riemann-Liouville identity on [0,T]:
///   int ra(w) w dt - (a/4) double Gagliardo integral
///     - 1/(2 G(1-a)) int [(T-t)^{-a} + t^{-a}] w^2 dt.
EnergyReport rl_quadratic_identity_residual(const TimeSeries& w, const FracOrder& order);

/// LHS - RHS of the lower bound
///   int_0^{t*} ra(w) w >= t*^{-a}/(2 G(1-a)) int_0^{t*} w^2  (>= 0 expected).
double rl_lower_bound_gap(const TimeSeries& w, const FracOrder& order, double t_star);

/// First energy estimate for a Galerkin solution: all four left-hand terms
/// against the proof-assembled right-hand constant (Mittag-Leffler constants
/// d0, d1 from the Gronwall step of the chain).  The margin at every node is
/// recorded; `inequality_holds` is the verdict.
EnergyReport first_energy_check(const SpectralField& u, const GalerkinSystem& system,
                                const FracOrder& order);

/// Gagliardo seminorm (double integral over [0,T]^2) ^(1/2).
double h_alpha_half_seminorm(const TimeSeries& u, const FracOrder& order);
inline double h_alpha_half_seminorm(const SpectralField& u, const FracOrder& order) {
    return h_alpha_half_seminorm(u.as_series(), order);
}

struct TraceCheckReport {
    bool exact = false;
    bool converged = false;
    bool diverged = false;
    double fitted_exponent = 0.0;
    double holder_exponent = 0.0; // alpha - 1/p
    bool consistent = false;      // fitted >= holder - 0.1 (when converged)
    std::string to_text() const;
};

/// Fits the decay exponent of ||u(t) - u0|| as t -> 0 over dyadic nodes and
/// compares it with the alpha - 1/p Hoelder exponent of the initial-trace
/// criterion.  Divergence (growth toward t = 0) is flagged.
TraceCheckReport initial_trace_check(const TimeSeries& u, const Eigen::VectorXd& u0,
                                     const FracOrder& order, double p);
inline TraceCheckReport initial_trace_check(const SpectralField& u, const Eigen::VectorXd& u0,
                                            const FracOrder& order, double p) {
    return initial_trace_check(u.as_series(), u0, order, p);
}

struct CounterexampleReport {
    double alpha = 0.0, beta = 0.0;
    double exponent = 0.0; // alpha + beta
    double constant = 0.0; // Gamma(beta+1)/Gamma(alpha+beta+1)
    bool continuous = false;
    // (delta, sup over t in [delta^4, delta] of |w - w0|); the sample floor
    // deepens with delta so an unbounded sup actually shows up in the numbers
    std::vector<std::pair<double, double>> sup_by_delta;
    bool unbounded_demonstrated = false;
    std::string to_text() const;
};

/// The forcing-regularity counterexample: solves D^a w = t^beta in closed
/// form, w - w0 = (Gamma(beta+1)/Gamma(alpha+beta+1)) t^{alpha+beta}, and
/// demonstrates on a grid whether sup_{t<=delta}|w - w0| stays bounded.
/// beta <= -1/2 is rejected (the forcing leaves L^2).
CounterexampleReport counterexample_demo(const FracOrder& order, double beta);

} // namespace tfd
