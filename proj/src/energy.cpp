#include "tfd/energy.hpp"

#include "tfd/mittag.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace tfd {

namespace {

// int over cell [s1,s2] of s^{-a-1} * PL(G), with G given at the cell ends;
// G is pinned to 0 at s = 0, so the last cell keeps only its outer value.
// Returns sum over all cells for one target node j (distance m = j - i).
double inner_singular_integral(const Eigen::VectorXd& G, int j, double h, double a) {
    double acc = 0.0;
    for (int i = 0; i + 1 < j; ++i) {
        const double s1 = (j - i - 1) * h;
        const double s2 = (j - i) * h;
        const double m0 = (std::pow(s1, -a) - std::pow(s2, -a)) / a;
        const double m1 = (std::pow(s2, 1.0 - a) - std::pow(s1, 1.0 - a)) / (1.0 - a);
        // PL in s: value G(i+1) at s1, G(i) at s2
        acc += (G(i + 1) * (s2 * m0 - m1) + G(i) * (m1 - s1 * m0)) / h;
    }
    // cell touching s = 0: the difference vanishes quadratically there
    acc += G(j - 1) * std::pow(h, -a) / (1.0 - a);
    return acc;
}

// int_a^b t^{-alpha} * PL(v) dt with v linear between va at t=a and vb at t=b.
double weighted_cell(double ta, double tb, double va, double vb, double alpha) {
    const double h = tb - ta;
    const double i0 = (std::pow(tb, 1.0 - alpha) - std::pow(ta, 1.0 - alpha)) / (1.0 - alpha);
    const double i1 = (std::pow(tb, 2.0 - alpha) - std::pow(ta, 2.0 - alpha)) / (2.0 - alpha);
    return va * (tb * i0 - i1) / h + vb * (i1 - ta * i0) / h;
}

double trapezoid(const Eigen::VectorXd& v, double h) {
    double acc = 0.0;
    for (int j = 0; j + 1 < v.size(); ++j) acc += 0.5 * h * (v(j) + v(j + 1));
    return acc;
}

Eigen::VectorXd row_sq_norms(const Eigen::MatrixXd& w) {
    return w.rowwise().squaredNorm();
}

} // namespace

double EnergyReport::term(const std::string& name) const {
    for (const auto& [k, v] : terms)
        if (k == name) return v;
    throw std::invalid_argument("EnergyReport: no term named '" + name + "'");
}

std::string EnergyReport::to_text() const {
    std::ostringstream os;
    os << "energy report: " << identity << "\n";
    os << "  grid: N=" << grid_steps << " T=" << horizon << " alpha=" << alpha << "\n";
    for (const auto& [k, v] : terms) {
        char buf[48];
        std::snprintf(buf, sizeof(buf), "%.15g", v);
        os << "  " << k << " = " << buf << "\n";
    }
    os << "  defect sup = " << defect_sup << ", defect L1 = " << residual_l1 << "\n";
    if (!inequality_holds || min_margin != 0.0)
        os << "  inequality: " << (inequality_holds ? "holds" : "VIOLATED")
           << " (min margin " << min_margin << ")\n";
    return os.str();
}

void EnergyReport::write_csv(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    out << "term,value\n";
    char buf[48];
    for (const auto& [k, v] : terms) {
        std::snprintf(buf, sizeof(buf), "%.15g", v);
        out << k << "," << buf << "\n";
    }
    std::snprintf(buf, sizeof(buf), "%.15g", residual_l1);
    out << "defect_l1," << buf << "\n";
    std::snprintf(buf, sizeof(buf), "%.15g", defect_sup);
    out << "defect_sup," << buf << "\n";
}

EnergyReport caputo_energy_identity_residual(const TimeSeries& w, const FracOrder& order) {
    const TimeGrid& g = w.grid();
    const int N = g.steps();
    if (N < 16) throw std::invalid_argument("caputo_energy_identity_residual: need N >= 16");
    const double a = order.value();
    const double h = g.dt();
    const double ginv = 1.0 / std::tgamma(1.0 - a);

    const Eigen::MatrixXd& W = w.values();
    Eigen::MatrixXd Vm = row_sq_norms(W);
    TimeSeries V(g, Vm);
    const Eigen::MatrixXd DV = caputo_derivative(V, order).values();
    const Eigen::MatrixXd DW = caputo_derivative(w, order).values();

    EnergyReport rep;
    rep.identity = "caputo energy identity";
    rep.grid_steps = N;
    rep.horizon = g.horizon();
    rep.alpha = a;
    rep.nodewise_defect.resize(N);

    double sup_defect = 0.0, l1 = 0.0;
    for (int j = 1; j <= N; ++j) {
        Eigen::VectorXd G(j + 1);
        for (int i = 0; i <= j; ++i) G(i) = (W.row(j) - W.row(i)).squaredNorm();
        const double memory = a * ginv * inner_singular_integral(G, j, h, a);
        const double weight = std::pow(g.node(j), -a) * ginv * G(0);
        const double rhs = 2.0 * DW.row(j).dot(W.row(j));
        const double defect = DV(j, 0) + memory + weight - rhs;
        rep.nodewise_defect(j - 1) = defect;
        sup_defect = std::max(sup_defect, std::abs(defect));
        l1 += h * std::abs(defect);
    }
    rep.defect_sup = sup_defect;
    rep.residual_l1 = l1;
    rep.terms = {{"defect_sup", sup_defect}, {"defect_l1", l1}};
    return rep;
}

EnergyReport rl_quadratic_identity_residual(const TimeSeries& w, const FracOrder& order) {
    if (w.components() != 1)
        throw std::invalid_argument("rl_quadratic_identity_residual: scalar series expected");
    const TimeGrid& g = w.grid();
    const int N = g.steps();
    if (N < 16) throw std::invalid_argument("rl_quadratic_identity_residual: need N >= 16");
    const double a = order.value();
    const double h = g.dt();
    const double T = g.horizon();
    const double ginv = 1.0 / std::tgamma(1.0 - a);

    const Eigen::MatrixXd& W = w.values();
    const Eigen::MatrixXd DW = caputo_derivative(w, order).values();

    // LHS: int ra(w) w = int D^a(w) w  +  w(0)/G(1-a) int t^{-a} w(t) dt
    Eigen::VectorXd reg(N + 1);
    reg(0) = 0.0; // D^a w -> 0 at t=0 for the admissible inputs
    for (int j = 1; j <= N; ++j) reg(j) = DW(j, 0) * W(j, 0);
    double lhs = trapezoid(reg, h);
    double singular = 0.0;
    for (int j = 0; j < N; ++j)
        singular += weighted_cell(g.node(j), g.node(j + 1), W(j, 0), W(j + 1, 0), a);
    lhs += W(0, 0) * ginv * singular;

    // Gagliardo double integral over the square = 2x the lower triangle
    Eigen::VectorXd inner(N + 1);
    inner(0) = 0.0;
    for (int j = 1; j <= N; ++j) {
        Eigen::VectorXd G(j + 1);
        for (int i = 0; i <= j; ++i) {
            const double d = W(j, 0) - W(i, 0);
            G(i) = d * d;
        }
        inner(j) = inner_singular_integral(G, j, h, a);
    }
    const double gagliardo = 2.0 * trapezoid(inner, h);
    const double term_double = 0.25 * a * gagliardo;

    // endpoint-weight term
    Eigen::VectorXd V = row_sq_norms(W);
    double wt = 0.0;
    for (int j = 0; j < N; ++j) {
        wt += weighted_cell(g.node(j), g.node(j + 1), V(j), V(j + 1), a);
        // (T-t)^{-a} branch via reflection
        wt += weighted_cell(T - g.node(j + 1), T - g.node(j), V(j + 1), V(j), a);
    }
    const double term_weight = 0.5 * ginv * wt;

    EnergyReport rep;
    rep.identity = "riemann-liouville quadratic identity";
    rep.grid_steps = N;
    rep.horizon = T;
    rep.alpha = a;
    const double defect = lhs - term_double - term_weight;
    rep.defect_sup = std::abs(defect);
    rep.residual_l1 = std::abs(defect);
    rep.nodewise_defect = Eigen::VectorXd::Constant(1, defect);
    rep.terms = {{"lhs", lhs},
                 {"double_integral", term_double},
                 {"weight_integral", term_weight},
                 {"defect", defect}};
    return rep;
}

double rl_lower_bound_gap(const TimeSeries& w, const FracOrder& order, double t_star) {
    if (w.components() != 1)
        throw std::invalid_argument("rl_lower_bound_gap: scalar series expected");
    const TimeGrid& g = w.grid();
    const double h = g.dt();
    const int jt = static_cast<int>(std::llround(t_star / h));
    if (jt < 1 || jt > g.steps())
        throw std::invalid_argument("rl_lower_bound_gap: t_star outside the grid");
    const double a = order.value();
    const double ginv = 1.0 / std::tgamma(1.0 - a);

    const Eigen::MatrixXd& W = w.values();
    const Eigen::MatrixXd DW = caputo_derivative(w, order).values();
    Eigen::VectorXd reg(jt + 1);
    reg(0) = 0.0;
    for (int j = 1; j <= jt; ++j) reg(j) = DW(j, 0) * W(j, 0);
    double lhs = trapezoid(reg, h);
    double singular = 0.0;
    for (int j = 0; j < jt; ++j)
        singular += weighted_cell(g.node(j), g.node(j + 1), W(j, 0), W(j + 1, 0), a);
    lhs += W(0, 0) * ginv * singular;

    Eigen::VectorXd V = row_sq_norms(W);
    double vint = 0.0;
    for (int j = 0; j < jt; ++j) vint += 0.5 * h * (V(j) + V(j + 1));
    const double rhs = std::pow(g.node(jt), -a) * 0.5 * ginv * vint;
    return lhs - rhs;
}

EnergyReport first_energy_check(const SpectralField& u, const GalerkinSystem& system,
                                const FracOrder& order) {
    if (!(u.grid == system.grid))
        throw std::invalid_argument("first_energy_check: field grid does not match the system");
    const TimeGrid& g = system.grid;
    const int N = g.steps();
    const int n = system.modes();
    const double a = order.value();
    const double h = g.dt();
    const double T = g.horizon();
    const double ginv = 1.0 / std::tgamma(1.0 - a);

    const Eigen::MatrixXd& Cm = u.coefficients;
    Eigen::VectorXd V = row_sq_norms(Cm);

    // term 1: I^{1-a} ||u||^2
    const Eigen::MatrixXd L1 = frac_integral(TimeSeries(g, V), 1.0 - a).values();

    // term 2: cumulative double-difference integral
    Eigen::VectorXd J1(N + 1);
    J1(0) = 0.0;
    for (int j = 1; j <= N; ++j) {
        Eigen::VectorXd G(j + 1);
        for (int i = 0; i <= j; ++i) G(i) = (Cm.row(j) - Cm.row(i)).squaredNorm();
        J1(j) = a * ginv * inner_singular_integral(G, j, h, a);
    }
    Eigen::VectorXd L2(N + 1);
    L2(0) = 0.0;
    for (int j = 1; j <= N; ++j) L2(j) = L2(j - 1) + 0.5 * h * (J1(j - 1) + J1(j));

    // term 3: cumulative weighted distance to the initial data
    Eigen::VectorXd D0(N + 1);
    for (int j = 0; j <= N; ++j) D0(j) = (Cm.row(j) - system.c0.transpose()).squaredNorm();
    Eigen::VectorXd L3(N + 1);
    L3(0) = 0.0;
    for (int j = 0; j < N; ++j)
        L3(j + 1) = L3(j) + ginv * weighted_cell(g.node(j), g.node(j + 1), D0(j), D0(j + 1), a);

    // term 4: lambda * cumulative gradient norm (spectral)
    Eigen::VectorXd grad(N + 1);
    for (int j = 0; j <= N; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k) acc += system.basis->eigenvalue(k) * Cm(j, k) * Cm(j, k);
        grad(j) = acc;
    }
    Eigen::VectorXd L4(N + 1);
    L4(0) = 0.0;
    for (int j = 0; j < N; ++j) L4(j + 1) = L4(j) + system.lambda * 0.5 * h * (grad(j) + grad(j + 1));

    // right-hand side: data norms with the proof constants
    Eigen::VectorXd fdual(N + 1);
    for (int j = 0; j <= N; ++j) {
        double acc = 0.0;
        for (int k = 0; k < n; ++k)
            acc += system.F_raw(j, k) * system.F_raw(j, k) / system.basis->eigenvalue(k);
        fdual(j) = acc;
    }
    Eigen::VectorXd Fint(N + 1);
    Fint(0) = 0.0;
    for (int j = 0; j < N; ++j) Fint(j + 1) = Fint(j) + 0.5 * h * (fdual(j) + fdual(j + 1));

    double delta_n = 0.0;
    if (system.epsilon > 0.0) {
        const int wsteps = std::max(1, static_cast<int>(std::llround(system.epsilon / h)));
        for (int j = 0; j <= N; ++j) {
            const int e = std::min(N, j + wsteps);
            delta_n = std::max(delta_n, Fint(e) - Fint(j));
        }
        delta_n *= 2.0; // covers both the shifted window and the start-up window
    }

    const double gfac = (2.0 / system.lambda) * system.sup_drift * system.sup_drift +
                        2.0 * system.sup_reaction;
    const double d0 = gfac * T * mittag_leffler(a, 2.0, gfac * std::pow(T, a));
    const double d1 = mittag_leffler(a, 1.0, gfac * std::pow(T, a));
    const double u0sq = system.c0.squaredNorm();
    const double C0 = std::max(std::pow(T, 1.0 - a) / std::tgamma(2.0 - a) + d0,
                               2.0 * (1.0 + d1) / system.lambda);

    EnergyReport rep;
    rep.identity = "first energy estimate";
    rep.grid_steps = N;
    rep.horizon = T;
    rep.alpha = a;
    rep.nodewise_defect.resize(N);
    double min_margin = std::numeric_limits<double>::infinity();
    for (int j = 1; j <= N; ++j) {
        const double lhs = L1(j, 0) + L2(j) + L3(j) + L4(j);
        const double rhs = C0 * (u0sq + Fint(j) + delta_n);
        const double margin = rhs - lhs;
        rep.nodewise_defect(j - 1) = margin;
        min_margin = std::min(min_margin, margin);
    }
    const double scale = std::max(1.0, C0 * (u0sq + Fint(N) + delta_n));
    rep.min_margin = min_margin;
    rep.inequality_holds = min_margin >= -1e-9 * scale;
    rep.terms = {{"I_over_one_minus_alpha_of_norm", L1(N, 0)},
                 {"double_difference_integral", L2(N)},
                 {"weighted_initial_distance", L3(N)},
                 {"lambda_gradient_integral", L4(N)},
                 {"lhs_total", L1(N, 0) + L2(N) + L3(N) + L4(N)},
                 {"u0_norm_sq", u0sq},
                 {"forcing_dual_integral", Fint(N)},
                 {"delta_mollification", delta_n},
                 {"g_lower_order", gfac},
                 {"d0", d0},
                 {"d1", d1},
                 {"C0", C0},
                 {"rhs_total", C0 * (u0sq + Fint(N) + delta_n)},
                 {"min_margin", min_margin}};
    rep.defect_sup = std::abs(min_margin);
    rep.residual_l1 = rep.defect_sup;
    return rep;
}

double h_alpha_half_seminorm(const TimeSeries& u, const FracOrder& order) {
    const TimeGrid& g = u.grid();
    const int N = g.steps();
    if (N < 16) throw std::invalid_argument("h_alpha_half_seminorm: need N >= 16");
    const double a = order.value();
    const double h = g.dt();
    const Eigen::MatrixXd& W = u.values();

    Eigen::VectorXd inner(N + 1);
    inner(0) = 0.0;
    for (int j = 1; j <= N; ++j) {
        Eigen::VectorXd G(j + 1);
        for (int i = 0; i <= j; ++i) G(i) = (W.row(j) - W.row(i)).squaredNorm();
        inner(j) = inner_singular_integral(G, j, h, a);
    }
    const double triangle = trapezoid(inner, h);
    return std::sqrt(2.0 * triangle);
}

std::string TraceCheckReport::to_text() const {
    std::ostringstream os;
    os << "initial-trace check: ";
    if (exact) os << "exact (u identically u0)\n";
    else if (diverged) os << "DIVERGED toward t=0\n";
    else os << (converged ? "trace converges to u0" : "inconclusive") << "\n";
    os << "  fitted exponent:  " << fitted_exponent << "\n";
    os << "  Hoelder exponent alpha - 1/p:  " << holder_exponent << "\n";
    os << "  consistent: " << (consistent ? "yes" : "no") << "\n";
    return os.str();
}

TraceCheckReport initial_trace_check(const TimeSeries& u, const Eigen::VectorXd& u0,
                                     const FracOrder& order, double p) {
    if (u0.size() != u.components())
        throw std::invalid_argument("initial_trace_check: u0 length mismatch");
    if (!(p > 1.0)) throw std::invalid_argument("initial_trace_check: p must exceed 1");
    const TimeGrid& g = u.grid();
    const int N = g.steps();

    TraceCheckReport rep;
    rep.holder_exponent = order.value() - 1.0 / p;

    const int j0 = u.origin_defined() ? 0 : 1;
    Eigen::VectorXd e(N + 1);
    double scale = std::max(1.0, u0.cwiseAbs().maxCoeff());
    for (int j = j0; j <= N; ++j) {
        e(j) = (u.values().row(j).transpose() - u0).norm();
        scale = std::max(scale, e(j));
    }
    if (j0 == 1) e(0) = e(1);

    bool all_zero = true;
    for (int j = j0; j <= N; ++j) all_zero = all_zero && e(j) <= 1e-14 * scale;
    if (all_zero) {
        rep.exact = true;
        rep.converged = true;
        rep.consistent = true;
        rep.fitted_exponent = std::numeric_limits<double>::infinity();
        return rep;
    }

    // dyadic nodes up to T/4
    std::vector<int> fit;
    for (int j = std::max(1, j0); j <= N / 4; j = j * 2)
        if (e(j) > 0.0) fit.push_back(j);
    if (fit.size() < 3) {
        for (int j = std::max(1, j0); j <= std::max(4, N / 4) && static_cast<int>(fit.size()) < 4; ++j)
            if (e(j) > 0.0) fit.push_back(j);
    }
    if (fit.size() < 2) return rep; // inconclusive

    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int j : fit) {
        const double lx = std::log(g.node(j));
        const double ly = std::log(e(j));
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    const double nfit = static_cast<double>(fit.size());
    rep.fitted_exponent = (nfit * sxy - sx * sy) / (nfit * sxx - sx * sx);

    rep.converged = rep.fitted_exponent > 0.05 && e(fit.front()) <= e(fit.back()) * 1.001;
    rep.diverged = rep.fitted_exponent < -0.02;
    rep.consistent = rep.converged && rep.fitted_exponent >= rep.holder_exponent - 0.1;
    return rep;
}

std::string CounterexampleReport::to_text() const {
    std::ostringstream os;
    os << "counterexample report (forcing t^beta)\n";
    os << "  alpha = " << alpha << ", beta = " << beta << "\n";
    os << "  w - w0 = C t^(alpha+beta), C = " << constant << ", exponent = " << exponent << "\n";
    os << "  continuous solution: " << (continuous ? "yes" : "no") << "\n";
    for (const auto& [d, s] : sup_by_delta)
        os << "  delta = " << d << "  sup_{t<=delta} |w - w0| = " << s << "\n";
    if (!continuous)
        os << "  unbounded growth demonstrated: " << (unbounded_demonstrated ? "yes" : "no") << "\n";
    return os.str();
}

CounterexampleReport counterexample_demo(const FracOrder& order, double beta) {
    if (!(beta > -0.5))
        throw std::invalid_argument(
            "counterexample_demo: beta must exceed -1/2 (t^beta must stay square integrable); "
            "admissible band is beta in (-1/2, inf)");
    if (!std::isfinite(beta)) throw std::invalid_argument("counterexample_demo: beta must be finite");

    CounterexampleReport rep;
    rep.alpha = order.value();
    rep.beta = beta;
    rep.exponent = rep.alpha + beta;
    rep.constant = std::tgamma(beta + 1.0) / std::tgamma(rep.alpha + beta + 1.0);
    rep.continuous = rep.exponent > 0.0;

    for (int d = 1; d <= 4; ++d) {
        const double delta = std::pow(10.0, -d);
        // log-spaced samples over [delta^4, delta]
        double sup = 0.0;
        const int samples = 64;
        for (int i = 0; i <= samples; ++i) {
            const double lt = std::log(delta) * (1.0 + 3.0 * i / samples);
            const double t = std::exp(lt);
            sup = std::max(sup, std::abs(rep.constant) * std::pow(t, rep.exponent));
        }
        rep.sup_by_delta.emplace_back(delta, sup);
    }
    rep.unbounded_demonstrated = !rep.continuous;
    for (size_t i = 1; i < rep.sup_by_delta.size(); ++i)
        rep.unbounded_demonstrated =
            rep.unbounded_demonstrated && rep.sup_by_delta[i].second > rep.sup_by_delta[i - 1].second;
    return rep;
}

} // namespace tfd
