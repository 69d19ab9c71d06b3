#pragma once

#include "tfd/energy.hpp"
#include "tfd/volterra.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace tfd {

enum class SolverMethod { automatic, picard, l1, both };

/// A full problem description: domain, time discretization, coefficients,
/// data, and solver controls.  Parses from an INI-style config with the
/// sections [domain], [time], [coefficients], [forcing], [initial], [solver].
struct ProblemConfig {
    Domain domain = Domain::interval(3.141592653589793238462643383279502884, 128);
    double alpha = 0.5;
    double horizon = 1.0;
    int steps = 256;
    int modes = 8;

    CoefficientSet coefficients;
    ForcingSpec forcing;
    std::string initial_kind = "zero"; // zero | preset | expr | csv
    std::string initial_arg;

    double epsilon = -1.0; // < 0: default 1/modes
    SolverMethod method = SolverMethod::automatic;
    PicardConfig picard;

    static ProblemConfig parse_file(const std::string& path);
    static ProblemConfig parse_string(const std::string& text);

    SpatialFn initial_fn() const;
    double effective_epsilon() const { return epsilon >= 0.0 ? epsilon : 1.0 / modes; }
    SolverMethod effective_method() const {
        if (method != SolverMethod::automatic) return method;
        return steps <= 4096 ? SolverMethod::both : SolverMethod::l1;
    }
    void validate() const;
    std::string canonical_text() const;
    uint64_t hash() const; // FNV-1a over the canonical text
};

/// Shipped demonstration problems: "heat", "forced", "drift".
ProblemConfig problem_preset(const std::string& name);

struct Solution {
    SpectralField field; // fixed-point solution when available, else the L1 one
    std::optional<SpectralField> secondary;
    SolveTrace trace;
    double residual_sup = 0.0;
    double residual_relative = 0.0;
    uint64_t spec_hash = 0;

    /// (t, x[, y], u) samples over the full time grid; `spatial_samples`
    /// points per axis including the boundary.
    void write_solution_csv(const std::string& path, int spatial_samples = 65) const;
    void write_trace(const std::string& path) const;
};

/// Pipeline: validate -> eigenpairs -> assemble -> solve -> package.
/// With both solvers requested the sup-norm discrepancy lands in the trace.
Solution solve(const ProblemConfig& config);

/// Separable manufactured solution u*(x,t) = g(t) phi_k(x) with
/// g a sum of c * t^p terms (p = 0 or p >= alpha).  Only constant isotropic
/// principal coefficients without lower-order terms are supported; the
/// matching forcing is generated in closed form.
struct ManufacturedDescriptor {
    struct Term {
        double coef = 0.0;
        double power = 0.0;
    };
    std::vector<Term> g_terms;
    int mode = 1;

    /// text grammar: "1 + t^2", "1 + 0.5*t^0.5", "t"
    static ManufacturedDescriptor parse(const std::string& g_text, int mode);
    double g(double t) const;
    double caputo_g(double t, double alpha) const;
};

struct ErrorStudyRow {
    int steps = 0;
    double err_final = 0.0; // L2(space) at t = T
    double err_l2l2 = 0.0;  // L2 in space and time
};

struct ErrorStudy {
    std::vector<ErrorStudyRow> rows;
    double observed_order_final = 0.0;
    double observed_order_l2l2 = 0.0;
    void write_csv(const std::string& path) const;
    std::string to_text() const;
};

ErrorStudy manufactured_error(const ProblemConfig& base, const ManufacturedDescriptor& exact,
                              const std::vector<int>& step_counts);

/// Dual norm in the eigenbasis: (sum f_k^2 / lambda_k)^(1/2).
double spectral_h_minus_1_norm(const Eigen::VectorXd& coeffs, const EigenBasis& basis);

/// Spatial CSV lattice loader (header "x,value" or "x,y,value").
SpatialFn spatial_field_csv(const std::string& path);

} // namespace tfd
