#include "tfd/assembly.hpp"

#include <cmath>

namespace tfd {

namespace {

double extended_value(const Eigen::MatrixXd& v, int idx, int n, int col, ExtensionMode mode) {
    if (idx >= 0 && idx <= n) {
        if (mode == ExtensionMode::odd && idx == 0) return 0.0;
        return v(idx, col);
    }
    switch (mode) {
        case ExtensionMode::even:
            if (idx < 0) return v(-idx, col);
            return v(2 * n - idx, col);
        case ExtensionMode::odd:
            if (idx < 0) return -extended_value(v, -idx, n, col, mode);
            return 0.0; // beyond the horizon
        case ExtensionMode::zero: return 0.0;
    }
    return 0.0;
}

} // namespace

TimeSeries mollify(const TimeSeries& signal, double epsilon, ExtensionMode mode) {
    const TimeGrid& g = signal.grid();
    if (epsilon == 0.0) return signal;
    if (!(epsilon > 0.0) || epsilon >= g.horizon())
        throw std::invalid_argument("mollify: epsilon must lie in [0, horizon)");
    const double h = g.dt();
    if (epsilon <= h)
        throw std::invalid_argument("mollify: kernel unresolvable, epsilon must exceed the grid spacing");
    const int n = g.steps();
    const int half = static_cast<int>(std::floor(epsilon / h));
    const int mw = (half * h < epsilon) ? half : half - 1; // strict interior of the support

    // symmetric bump exp(-1/(1-(s/eps)^2)), normalized to unit mass on the grid
    std::vector<double> w(2 * mw + 1);
    double total = 0.0;
    for (int m = -mw; m <= mw; ++m) {
        const double s = m * h / epsilon;
        w[m + mw] = std::exp(-1.0 / (1.0 - s * s));
        total += w[m + mw];
    }
    for (double& wi : w) wi /= total;

    Eigen::MatrixXd out(g.nodes(), signal.components());
    for (int c = 0; c < signal.components(); ++c)
        for (int j = 0; j <= n; ++j) {
            double acc = 0.0;
            for (int m = -mw; m <= mw; ++m)
                acc += w[m + mw] * extended_value(signal.values(), j - m, n, c, mode);
            out(j, c) = acc;
        }
    return TimeSeries(g, std::move(out));
}

namespace {

// Basis tables on the quadrature lattice: values and gradients, P x n.
struct BasisTables {
    Eigen::MatrixXd phi, dphix, dphiy;
    Eigen::VectorXd w;
    std::vector<double> x, y;
};

BasisTables tabulate(const EigenBasis& basis) {
    const QuadLattice lat = domain_quadrature(basis.domain());
    const int P = static_cast<int>(lat.size());
    const int n = basis.count();
    BasisTables t;
    t.phi.resize(P, n);
    t.dphix.resize(P, n);
    t.dphiy.resize(P, n);
    t.w.resize(P);
    t.x = lat.x;
    t.y = lat.y;
    for (int i = 0; i < P; ++i) t.w(i) = lat.w[i];
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < P; ++i) {
            t.phi(i, k) = basis.phi(k, lat.x[i], lat.y[i]);
            double gx, gy;
            basis.grad_phi(k, lat.x[i], lat.y[i], gx, gy);
            t.dphix(i, k) = gx;
            t.dphiy(i, k) = gy;
        }
    return t;
}

Eigen::MatrixXd weighted_gram(const Eigen::MatrixXd& U, const Eigen::VectorXd& w,
                              const Eigen::VectorXd& field, const Eigen::MatrixXd& V) {
    Eigen::MatrixXd M = U.transpose() * (w.array() * field.array()).matrix().asDiagonal() * V;
    return M;
}

// Evaluate a scalar field on the lattice at fixed time.
Eigen::VectorXd field_on_lattice(const ScalarField& f, const BasisTables& tab, double t) {
    Eigen::VectorXd v(tab.w.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = f.eval(tab.x[i], tab.y[i], t);
    return v;
}

// Stiffness-like matrix for the principal part at fixed time.
Eigen::MatrixXd principal_matrix(const MatrixField& a, const BasisTables& tab, int dim, double t) {
    Eigen::VectorXd a11(tab.w.size()), a12(tab.w.size()), a22(tab.w.size());
    for (Eigen::Index i = 0; i < a11.size(); ++i) {
        double v11, v12, v22;
        a.eval(tab.x[i], tab.y[i], t, v11, v12, v22);
        a11(i) = v11;
        a12(i) = v12;
        a22(i) = v22;
    }
    Eigen::MatrixXd M = weighted_gram(tab.dphix, tab.w, a11, tab.dphix);
    if (dim == 2) {
        M += weighted_gram(tab.dphiy, tab.w, a22, tab.dphiy);
        if (a.form() == MatrixField::Form::symmetric) {
            Eigen::MatrixXd cross = weighted_gram(tab.dphix, tab.w, a12, tab.dphiy);
            M += cross + cross.transpose();
        }
    }
    return 0.5 * (M + M.transpose());
}

bool field_is_zero(const ScalarField& f) {
    return !f.is_lattice() && f.expr().text() == "0";
}

} // namespace

GalerkinSystem assemble(const CoefficientSet& coeffs, const ForcingSpec& forcing,
                        const SpatialFn& initial, std::shared_ptr<const EigenBasis> basis,
                        const TimeGrid& grid, double epsilon) {
    const Domain& dom = basis->domain();
    const int dim = dom.dim();
    const int n = basis->count();
    const int nodes = grid.nodes();

    const SampleLattice vlat = default_validation_lattice(dom, grid.horizon());
    EllipticityReport erep = validate_ellipticity(coeffs, dom, vlat);
    if (!erep.pass)
        throw std::invalid_argument("assemble: coefficients violate the declared ellipticity bounds\n" +
                                    erep.to_text());

    GalerkinSystem sys(basis, grid);
    sys.lambda = coeffs.lambda;
    sys.mu = coeffs.mu;
    sys.epsilon = epsilon;

    const BasisTables tab = tabulate(*basis);

    // sup norms of the lower-order coefficients over the validation lattice
    bool drift_zero = true;
    for (int c = 0; c < coeffs.b.components(); ++c) drift_zero = drift_zero && field_is_zero(coeffs.b.entry(c));
    const bool reaction_zero = field_is_zero(coeffs.c);
    for (double t : vlat.ts)
        for (double x : vlat.xs)
            for (double y : vlat.ys) {
                if (!drift_zero) {
                    double b2 = 0.0;
                    for (int c = 0; c < coeffs.b.components(); ++c) {
                        const double bv = coeffs.b.eval(c, x, y, t);
                        b2 += bv * bv;
                    }
                    sys.sup_drift = std::max(sys.sup_drift, std::sqrt(b2));
                }
                if (!reaction_zero)
                    sys.sup_reaction = std::max(sys.sup_reaction, std::abs(coeffs.c.eval(x, y, t)));
            }

    // ---- principal part -------------------------------------------------
    // Fast path: every entry of a factors as g(t)*h(x,y); then the spatial
    // quadrature runs once per entry and only the scalar time factor is
    // mollified.  Otherwise assemble node by node and mollify entrywise.
    bool separable = true;
    std::vector<Expr> tparts, sparts;
    for (int e = 0; e < coeffs.a.entry_count(); ++e) {
        Expr tp, sp;
        if (!coeffs.a.entry(e).separate(tp, sp)) {
            separable = false;
            break;
        }
        tparts.push_back(tp);
        sparts.push_back(sp);
    }

    sys.A.assign(nodes, Eigen::MatrixXd::Zero(n, n));
    if (separable) {
        for (int e = 0; e < coeffs.a.entry_count(); ++e) {
            // spatial factor matrix for this entry
            MatrixField spatial_only = [&] {
                ScalarField sf(sparts[e]);
                switch (coeffs.a.form()) {
                    case MatrixField::Form::isotropic: return MatrixField::isotropic(sf);
                    case MatrixField::Form::diagonal:
                        return e == 0 ? MatrixField::diagonal(sf, ScalarField(Expr::constant(0.0)))
                                      : MatrixField::diagonal(ScalarField(Expr::constant(0.0)), sf);
                    case MatrixField::Form::symmetric: {
                        ScalarField z(Expr::constant(0.0));
                        if (e == 0) return MatrixField::symmetric(sf, z, z);
                        if (e == 1) return MatrixField::symmetric(z, sf, z);
                        return MatrixField::symmetric(z, z, sf);
                    }
                }
                return MatrixField::isotropic(sf);
            }();
            const Eigen::MatrixXd Me = principal_matrix(spatial_only, tab, dim, 0.0);
            TimeSeries gseries = TimeSeries::sample(grid, [&](double t) { return tparts[e](0, 0, t); });
            TimeSeries gmoll = mollify(gseries, epsilon, ExtensionMode::even);
            for (int j = 0; j < nodes; ++j) sys.A[j] += gmoll(j) * Me;
        }
    } else {
        // raw matrices per node, then entrywise even-extension mollification
        std::vector<Eigen::MatrixXd> raw(nodes);
        for (int j = 0; j < nodes; ++j) raw[j] = principal_matrix(coeffs.a, tab, dim, grid.node(j));
        if (epsilon == 0.0) {
            sys.A = std::move(raw);
        } else {
            Eigen::MatrixXd entries(nodes, n * n);
            for (int j = 0; j < nodes; ++j)
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c) entries(j, r * n + c) = raw[j](r, c);
            TimeSeries moll = mollify(TimeSeries(grid, entries), epsilon, ExtensionMode::even);
            for (int j = 0; j < nodes; ++j)
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c) sys.A[j](r, c) = moll.values()(j, r * n + c);
        }
    }

    // ---- lower-order terms ----------------------------------------------
    if (!drift_zero) {
        sys.B.assign(nodes, Eigen::MatrixXd::Zero(n, n));
        for (int j = 0; j < nodes; ++j) {
            const double t = grid.node(j);
            Eigen::MatrixXd Bj = Eigen::MatrixXd::Zero(n, n);
            for (int c = 0; c < coeffs.b.components(); ++c) {
                Eigen::VectorXd bv(tab.w.size());
                for (Eigen::Index i = 0; i < bv.size(); ++i)
                    bv(i) = coeffs.b.eval(c, tab.x[i], tab.y[i], t);
                const Eigen::MatrixXd& dphi = (c == 0) ? tab.dphix : tab.dphiy;
                Bj += weighted_gram(tab.phi, tab.w, bv, dphi); // B_{m,k} = int b_c dphi_k phi_m
            }
            sys.B[j] = Bj;
        }
        if (epsilon > 0.0) {
            Eigen::MatrixXd entries(nodes, n * n);
            for (int j = 0; j < nodes; ++j)
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c) entries(j, r * n + c) = sys.B[j](r, c);
            TimeSeries moll = mollify(TimeSeries(grid, entries), epsilon, ExtensionMode::zero);
            for (int j = 0; j < nodes; ++j)
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c) sys.B[j](r, c) = moll.values()(j, r * n + c);
        }
    }
    if (!reaction_zero) {
        sys.C.assign(nodes, Eigen::MatrixXd::Zero(n, n));
        for (int j = 0; j < nodes; ++j) {
            Eigen::VectorXd cv = field_on_lattice(coeffs.c, tab, grid.node(j));
            Eigen::MatrixXd Cj = weighted_gram(tab.phi, tab.w, cv, tab.phi);
            sys.C[j] = 0.5 * (Cj + Cj.transpose());
        }
        if (epsilon > 0.0) {
            Eigen::MatrixXd entries(nodes, n * n);
            for (int j = 0; j < nodes; ++j)
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c) entries(j, r * n + c) = sys.C[j](r, c);
            TimeSeries moll = mollify(TimeSeries(grid, entries), epsilon, ExtensionMode::zero);
            for (int j = 0; j < nodes; ++j)
                for (int r = 0; r < n; ++r)
                    for (int c = 0; c < n; ++c) sys.C[j](r, c) = moll.values()(j, r * n + c);
        }
    }

    // ---- forcing ----------------------------------------------------------
    sys.F_raw = Eigen::MatrixXd::Zero(nodes, n);
    switch (forcing.kind) {
        case ForcingSpec::Kind::none: break;
        case ForcingSpec::Kind::modal: {
            if (forcing.mode < 1 || forcing.mode > n)
                throw std::invalid_argument("assemble: modal forcing index outside the basis");
            for (int j = 0; j < nodes; ++j)
                sys.F_raw(j, forcing.mode - 1) = forcing.g(0, 0, grid.node(j));
            break;
        }
        case ForcingSpec::Kind::expression: {
            Expr tp, sp;
            if (forcing.field.separate(tp, sp)) {
                Eigen::VectorXd hv(tab.w.size());
                for (Eigen::Index i = 0; i < hv.size(); ++i) hv(i) = sp(tab.x[i], tab.y[i], 0.0);
                Eigen::VectorXd proj = tab.phi.transpose() * (tab.w.array() * hv.array()).matrix();
                for (int j = 0; j < nodes; ++j) sys.F_raw.row(j) = tp(0, 0, grid.node(j)) * proj.transpose();
            } else {
                for (int j = 0; j < nodes; ++j) {
                    Eigen::VectorXd fv = field_on_lattice(forcing.field, tab, grid.node(j));
                    sys.F_raw.row(j) =
                        (tab.phi.transpose() * (tab.w.array() * fv.array()).matrix()).transpose();
                }
            }
            break;
        }
    }
    if (epsilon > 0.0 && forcing.kind != ForcingSpec::Kind::none) {
        TimeSeries moll = mollify(TimeSeries(grid, sys.F_raw), epsilon, ExtensionMode::odd);
        sys.F = moll.values();
    } else {
        sys.F = sys.F_raw;
    }

    // ---- initial data -----------------------------------------------------
    sys.c0 = project(initial, *basis);

    // constant-in-time detection (used to cache factorizations downstream)
    sys.time_constant = true;
    for (int j = 1; j < nodes && sys.time_constant; ++j) {
        double d = (sys.A[j] - sys.A[0]).cwiseAbs().maxCoeff();
        if (!sys.B.empty()) d = std::max(d, (sys.B[j] - sys.B[0]).cwiseAbs().maxCoeff());
        if (!sys.C.empty()) d = std::max(d, (sys.C[j] - sys.C[0]).cwiseAbs().maxCoeff());
        if (d > 0.0) sys.time_constant = false;
    }
    return sys;
}

} // namespace tfd
