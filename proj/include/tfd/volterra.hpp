#pragma once

#include "tfd/assembly.hpp"
#include "tfd/fraccalc.hpp"

#include <string>
#include <vector>

namespace tfd {

/// Controls for the windowed Picard iteration on the fixed-point form
///   c = c0 - I^alpha(A~ c) + I^alpha F.
struct PicardConfig {
    double rho = 0.5;          // accepted empirical contraction factor
    int max_iterations = 200;  // per window
    double shrink = 0.5;       // window shrink factor on failure
    double tol = 1e-10;        // sup-norm increment for convergence
    enum class Initial { constant_extension, zero_extension };
    Initial initial = Initial::constant_extension;

    void validate() const {
        if (!(rho > 0.0) || !(rho < 1.0)) throw std::invalid_argument("PicardConfig: rho in (0,1)");
        if (max_iterations < 1) throw std::invalid_argument("PicardConfig: max_iterations >= 1");
        if (!(shrink > 0.0) || !(shrink < 1.0))
            throw std::invalid_argument("PicardConfig: shrink in (0,1)");
        if (!(tol > 0.0)) throw std::invalid_argument("PicardConfig: tol > 0");
    }
};

struct WindowRecord {
    double t_begin = 0, t_end = 0;
    int iterations = 0;
    double contraction = 0; // max successive-increment ratio over the convergent tail
    bool accepted = false;
};

struct SolveTrace {
    std::vector<WindowRecord> windows;
    double final_residual = 0.0;       // sup-norm defect of the fixed-point equation
    double cross_discrepancy = -1.0;   // sup-norm gap between solvers, when both ran
    std::string to_text() const;
};

struct NonConvergenceError : std::runtime_error {
    SolveTrace trace;
    NonConvergenceError(const std::string& msg, SolveTrace t)
        : std::runtime_error(msg), trace(std::move(t)) {}
};

/// Picard iteration on successive windows; a window is accepted once the
/// iterate increment drops below tol with contraction ratio at most rho,
/// otherwise it shrinks and retries.  Accepted values are frozen.
std::pair<SpectralField, SolveTrace> picard_solve(const GalerkinSystem& system,
                                                  const FracOrder& order,
                                                  const PicardConfig& config = {});

/// Implicit L1 time stepper for D^alpha c = -A~(t) c + F(t): an independent
/// discretization used to cross-validate the fixed-point solver.
SpectralField l1_step_solve(const GalerkinSystem& system, const FracOrder& order);

/// Nodewise sup-norm of c - c0 + I^alpha(A~ c) - I^alpha F.
TimeSeries volterra_residual(const SpectralField& field, const GalerkinSystem& system,
                             const FracOrder& order);

} // namespace tfd
