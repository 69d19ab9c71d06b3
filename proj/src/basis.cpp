#include "tfd/basis.hpp"

#include <algorithm>
#include <cmath>

namespace tfd {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

// 10-point Gauss-Legendre on [-1,1].
const double kGLNodes[10] = {
    -0.973906528517171720077964012084452, -0.865063366688984510732096688423493,
    -0.679409568299024406234327365114874, -0.433395394129247190799265943165784,
    -0.148874338981631210884826001129720,  0.148874338981631210884826001129720,
     0.433395394129247190799265943165784,  0.679409568299024406234327365114874,
     0.865063366688984510732096688423493,  0.973906528517171720077964012084452};
const double kGLWeights[10] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338, 0.295524224714752870173892994651338,
    0.269266719309996355091226921569469, 0.219086362515982043995534934228163,
    0.149451349150580593145776339657697, 0.066671344308688137593568809893332};

void axis_quadrature(double length, int panels, std::vector<double>& pts,
                     std::vector<double>& wts) {
    const double hp = length / panels;
    pts.reserve(static_cast<size_t>(panels) * 10);
    wts.reserve(static_cast<size_t>(panels) * 10);
    for (int p = 0; p < panels; ++p) {
        const double a = p * hp;
        for (int q = 0; q < 10; ++q) {
            pts.push_back(a + 0.5 * hp * (1.0 + kGLNodes[q]));
            wts.push_back(0.5 * hp * kGLWeights[q]);
        }
    }
}

} // namespace

Domain Domain::interval(double length, int panels) {
    Domain d;
    d.kind = Kind::interval;
    d.L = length;
    d.quad_panels = panels;
    d.validate();
    return d;
}

Domain Domain::rectangle(double lx, double ly, int panels) {
    Domain d;
    d.kind = Kind::rectangle;
    d.Lx = lx;
    d.Ly = ly;
    d.quad_panels = panels;
    d.validate();
    return d;
}

void Domain::validate() const {
    if (kind == Kind::interval) {
        if (!(L > 0.0)) throw std::invalid_argument("Domain: interval length must be positive");
    } else {
        if (!(Lx > 0.0) || !(Ly > 0.0))
            throw std::invalid_argument("Domain: rectangle sides must be positive");
    }
    if (quad_panels < 16) throw std::invalid_argument("Domain: quadrature resolution must be >= 16");
}

QuadLattice domain_quadrature(const Domain& d) {
    QuadLattice lat;
    if (d.kind == Domain::Kind::interval) {
        axis_quadrature(d.L, d.quad_panels, lat.x, lat.w);
        lat.y.assign(lat.x.size(), 0.0);
        return lat;
    }
    std::vector<double> px, wx, py, wy;
    axis_quadrature(d.Lx, d.quad_panels, px, wx);
    axis_quadrature(d.Ly, d.quad_panels, py, wy);
    lat.x.reserve(px.size() * py.size());
    lat.y.reserve(px.size() * py.size());
    lat.w.reserve(px.size() * py.size());
    for (size_t i = 0; i < px.size(); ++i)
        for (size_t j = 0; j < py.size(); ++j) {
            lat.x.push_back(px[i]);
            lat.y.push_back(py[j]);
            lat.w.push_back(wx[i] * wy[j]);
        }
    return lat;
}

EigenBasis::EigenBasis(Domain domain, int count) : domain_(domain), count_(count) {
    domain_.validate();
    if (count < 1) throw std::invalid_argument("EigenBasis: need at least one mode");
    if (domain_.kind == Domain::Kind::interval) {
        for (int k = 1; k <= count; ++k) {
            eigenvalues_.push_back(std::pow(k * kPi / domain_.L, 2));
            modes_.emplace_back(k, 0);
        }
    } else {
        struct Cand {
            double lambda;
            int p, q;
        };
        std::vector<Cand> cands;
        cands.reserve(static_cast<size_t>(count) * count);
        for (int p = 1; p <= count; ++p)
            for (int q = 1; q <= count; ++q)
                cands.push_back({std::pow(p * kPi / domain_.Lx, 2) + std::pow(q * kPi / domain_.Ly, 2), p, q});
        std::sort(cands.begin(), cands.end(), [](const Cand& a, const Cand& b) {
            if (a.lambda != b.lambda) return a.lambda < b.lambda;
            if (a.p != b.p) return a.p < b.p;
            return a.q < b.q;
        });
        for (int k = 0; k < count; ++k) {
            eigenvalues_.push_back(cands[k].lambda);
            modes_.emplace_back(cands[k].p, cands[k].q);
        }
    }
}

double EigenBasis::phi(int k, double x, double y) const {
    const auto [p, q] = modes_.at(k);
    if (domain_.kind == Domain::Kind::interval)
        return std::sqrt(2.0 / domain_.L) * std::sin(p * kPi * x / domain_.L);
    return 2.0 / std::sqrt(domain_.Lx * domain_.Ly) * std::sin(p * kPi * x / domain_.Lx) *
           std::sin(q * kPi * y / domain_.Ly);
}

void EigenBasis::grad_phi(int k, double x, double y, double& gx, double& gy) const {
    const auto [p, q] = modes_.at(k);
    if (domain_.kind == Domain::Kind::interval) {
        const double kp = p * kPi / domain_.L;
        gx = std::sqrt(2.0 / domain_.L) * kp * std::cos(kp * x);
        gy = 0.0;
        return;
    }
    const double kx = p * kPi / domain_.Lx;
    const double ky = q * kPi / domain_.Ly;
    const double norm = 2.0 / std::sqrt(domain_.Lx * domain_.Ly);
    gx = norm * kx * std::cos(kx * x) * std::sin(ky * y);
    gy = norm * ky * std::sin(kx * x) * std::cos(ky * y);
}

Eigen::VectorXd project(const SpatialFn& f, const EigenBasis& basis) {
    const QuadLattice lat = domain_quadrature(basis.domain());
    Eigen::VectorXd fv(lat.size());
    for (size_t i = 0; i < lat.size(); ++i) {
        fv(static_cast<Eigen::Index>(i)) = f(lat.x[i], lat.y[i]);
        if (!std::isfinite(fv(static_cast<Eigen::Index>(i))))
            throw std::invalid_argument("project: non-finite field value on the quadrature lattice");
    }
    Eigen::VectorXd out(basis.count());
    for (int k = 0; k < basis.count(); ++k) {
        double acc = 0.0;
        for (size_t i = 0; i < lat.size(); ++i)
            acc += lat.w[i] * fv(static_cast<Eigen::Index>(i)) * basis.phi(k, lat.x[i], lat.y[i]);
        out(k) = acc;
    }
    return out;
}

Eigen::VectorXd reconstruct(const Eigen::VectorXd& coeffs, const EigenBasis& basis,
                            const std::vector<std::array<double, 2>>& points) {
    if (coeffs.size() != basis.count())
        throw std::invalid_argument("reconstruct: coefficient length must equal basis count");
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(points.size()));
    for (size_t i = 0; i < points.size(); ++i) {
        double acc = 0.0;
        for (int k = 0; k < basis.count(); ++k)
            acc += coeffs(k) * basis.phi(k, points[i][0], points[i][1]);
        out(static_cast<Eigen::Index>(i)) = acc;
    }
    return out;
}

SpatialFn spatial_preset(const std::string& name, const Domain& d) {
    if (name == "parabola") {
        if (d.kind == Domain::Kind::interval) {
            const double L = d.L;
            return [L](double x, double) { return x * (L - x); };
        }
        const double lx = d.Lx, ly = d.Ly;
        return [lx, ly](double x, double y) { return x * (lx - x) * y * (ly - y); };
    }
    if (name.rfind("sine:", 0) == 0) {
        const int k = std::stoi(name.substr(5));
        if (k < 1) throw std::invalid_argument("spatial preset sine:k needs k >= 1");
        // the k-th basis function itself (unit L2 norm)
        auto basis = std::make_shared<EigenBasis>(d, k);
        return [basis, k](double x, double y) { return basis->phi(k - 1, x, y); };
    }
    if (name == "bump") {
        const double cx = d.kind == Domain::Kind::interval ? d.L / 2 : d.Lx / 2;
        const double cy = d.kind == Domain::Kind::interval ? 0.0 : d.Ly / 2;
        const double r = d.kind == Domain::Kind::interval
                             ? d.L / 4
                             : std::min(d.Lx, d.Ly) / 4;
        const bool twod = d.kind == Domain::Kind::rectangle;
        return [cx, cy, r, twod](double x, double y) {
            const double dx = (x - cx) / r;
            const double dy = twod ? (y - cy) / r : 0.0;
            const double rho2 = dx * dx + dy * dy;
            return rho2 < 1.0 ? std::exp(-1.0 / (1.0 - rho2)) : 0.0;
        };
    }
    throw std::invalid_argument("unknown spatial preset '" + name + "'");
}

} // namespace tfd
