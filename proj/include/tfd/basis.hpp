#pragma once

#include "tfd/grid.hpp"

#include <functional>
#include <memory>
#include <utility>
#include <vector>

namespace tfd {

/// Spatial domain with analytic Dirichlet-Laplacian eigenpairs: an interval
/// [0,L] or an axis-aligned rectangle [0,Lx]x[0,Ly].  `quad_panels` is the
/// per-axis resolution of the composite Gauss-Legendre rule shared by all
/// inner products.
struct Domain {
    enum class Kind { interval, rectangle };
    Kind kind = Kind::interval;
    double L = 1.0;
    double Lx = 1.0, Ly = 1.0;
    int quad_panels = 128;

    static Domain interval(double length, int panels = 128);
    static Domain rectangle(double lx, double ly, int panels = 32);
    int dim() const { return kind == Kind::interval ? 1 : 2; }
    void validate() const;
};

/// Shared quadrature lattice: flattened points with weights (10-point
/// Gauss-Legendre per panel, tensorized on rectangles).
struct QuadLattice {
    std::vector<double> x, y, w;
    size_t size() const { return x.size(); }
};

QuadLattice domain_quadrature(const Domain& d);

/// First n Dirichlet eigenpairs, eigenvalues ascending.  On the rectangle
/// ties are broken lexicographically in (p,q).
class EigenBasis {
public:
    EigenBasis(Domain domain, int count);

    const Domain& domain() const { return domain_; }
    int count() const { return count_; }
    double eigenvalue(int k) const { return eigenvalues_.at(k); }
    const std::vector<double>& eigenvalues() const { return eigenvalues_; }
    std::pair<int, int> mode_indices(int k) const { return modes_.at(k); }

    double phi(int k, double x, double y = 0.0) const;
    /// gradient of phi_k; gy unused on the interval.
    void grad_phi(int k, double x, double y, double& gx, double& gy) const;

private:
    Domain domain_;
    int count_;
    std::vector<double> eigenvalues_;
    std::vector<std::pair<int, int>> modes_; // (k,0) interval, (p,q) rectangle
};

using SpatialFn = std::function<double(double, double)>;

/// L2 coefficients (<f, phi_k>)_k over the shared quadrature lattice.
Eigen::VectorXd project(const SpatialFn& f, const EigenBasis& basis);

/// Pointwise sum_k c_k phi_k at the given lattice points.
Eigen::VectorXd reconstruct(const Eigen::VectorXd& coeffs, const EigenBasis& basis,
                            const std::vector<std::array<double, 2>>& points);

/// Named spatial presets: "parabola", "sine:k", "bump".
SpatialFn spatial_preset(const std::string& name, const Domain& d);

/// Trajectory of Galerkin coefficients over a time grid.
struct SpectralField {
    std::shared_ptr<const EigenBasis> basis;
    TimeGrid grid;
    Eigen::MatrixXd coefficients; // (N+1) x n

    SpectralField(std::shared_ptr<const EigenBasis> b, TimeGrid g, Eigen::MatrixXd c)
        : basis(std::move(b)), grid(g), coefficients(std::move(c)) {
        if (coefficients.rows() != grid.nodes())
            throw std::invalid_argument("SpectralField: row count must match grid");
        if (basis && coefficients.cols() != basis->count())
            throw std::invalid_argument("SpectralField: column count must match basis");
    }

    int modes() const { return static_cast<int>(coefficients.cols()); }
    TimeSeries as_series() const { return TimeSeries(grid, coefficients); }
};

} // namespace tfd
