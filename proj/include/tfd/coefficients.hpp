#pragma once

#include "tfd/basis.hpp"
#include "tfd/expr.hpp"

#include <optional>
#include <string>
#include <vector>

namespace tfd {

/// Tabulated field on a regular (x[,y],t) lattice, multilinear interpolation
/// inside the hull, clamped outside.  CSV schema: header "x,t,value" or
/// "x,y,t,value", rows in any order as long as they fill the lattice.
class LatticeField {
public:
    static LatticeField read_csv(const std::string& path);

    double eval(double x, double y, double t) const;
    const std::vector<double>& time_knots() const { return ts_; }
    int dim() const { return ys_.empty() ? 1 : 2; }

private:
    std::vector<double> xs_, ys_, ts_;
    std::vector<double> values_; // x-major, then y, then t
    double at(size_t ix, size_t iy, size_t it) const;
};

/// Scalar coefficient field: an expression in (x,y,t) or a CSV lattice.
class ScalarField {
public:
    ScalarField() : expr_(Expr::constant(0.0)) {}
    explicit ScalarField(Expr e) : expr_(std::move(e)) {}
    explicit ScalarField(LatticeField lat) : expr_(Expr::constant(0.0)), lattice_(std::move(lat)) {}

    static ScalarField parse(const std::string& spec); // "csv:path" or expression text

    double eval(double x, double y, double t) const {
        return lattice_ ? lattice_->eval(x, y, t) : expr_(x, y, t);
    }
    bool is_lattice() const { return lattice_.has_value(); }
    const LatticeField& lattice() const { return *lattice_; }
    const Expr& expr() const { return expr_; }

    /// g(t)*h(x,y) factorization when the backing expression allows it.
    bool separate(Expr& time_part, Expr& space_part) const {
        return !lattice_ && expr_.separate(time_part, space_part);
    }

private:
    Expr expr_;
    std::optional<LatticeField> lattice_;
};

/// Principal coefficient matrix field a_{ij}(x,t): isotropic scalar * I,
/// diagonal, or full symmetric 2x2.
class MatrixField {
public:
    enum class Form { isotropic, diagonal, symmetric };

    static MatrixField isotropic(ScalarField s);
    static MatrixField diagonal(ScalarField a11, ScalarField a22);
    static MatrixField symmetric(ScalarField a11, ScalarField a12, ScalarField a22);
    /// grammar: expr | "diag(e1, e2)" | "mat(a11, a12, a22)" | "csv:path"
    static MatrixField parse(const std::string& spec);

    Form form() const { return form_; }
    /// entries as (a11, a12, a22); a12=0 and a22=a11 for isotropic fields.
    void eval(double x, double y, double t, double& a11, double& a12, double& a22) const;
    const ScalarField& entry(int i) const { return entries_.at(i); }
    int entry_count() const { return static_cast<int>(entries_.size()); }

private:
    Form form_ = Form::isotropic;
    std::vector<ScalarField> entries_;
};

/// Drift vector field b(x,t); one component per spatial dimension.
class VectorField {
public:
    VectorField() = default;
    /// grammar: "0" | expr (1D) | "(e1, e2)" | "csv:path"
    static VectorField parse(const std::string& spec, int dim);
    double eval(int component, double x, double y, double t) const;
    int components() const { return static_cast<int>(entries_.size()); }
    const ScalarField& entry(int i) const { return entries_.at(i); }

private:
    std::vector<ScalarField> entries_;
};

/// The full coefficient data of the elliptic operator, with its two-sided
/// ellipticity bounds.
struct CoefficientSet {
    MatrixField a;
    VectorField b;
    ScalarField c;
    double lambda = 1.0;
    double mu = 1.0;

    void validate_bounds() const {
        if (!(lambda > 0.0) || !(mu > 0.0) || lambda > mu)
            throw std::invalid_argument("CoefficientSet: need 0 < lambda <= mu");
    }
};

struct EllipticityWitness {
    double x = 0, y = 0, t = 0;
    double xi1 = 0, xi2 = 0;
    double quadratic_form = 0;
};

struct EllipticityReport {
    bool pass = true;
    double worst_lower_margin = 0; // min over lattice of xi'a xi - lambda|xi|^2
    double worst_upper_margin = 0; // min over lattice of mu|xi|^2 - xi'a xi
    double max_abs_entry = 0;
    std::optional<EllipticityWitness> violation;
    std::string to_text() const;
};

struct SampleLattice {
    std::vector<double> xs, ys, ts;
};

SampleLattice default_validation_lattice(const Domain& d, double horizon);

/// Checks lambda|xi|^2 <= xi' a xi <= mu|xi|^2 over the lattice against axis
/// vectors, diagonals, and 32 seeded random unit directions, plus the
/// |a_ij| <= mu bound.
EllipticityReport validate_ellipticity(const CoefficientSet& coeffs, const Domain& d,
                                       const SampleLattice& lattice);

} // namespace tfd
