#include "tfd/volterra.hpp"

#include <Eigen/LU>
#include <cmath>
#include <sstream>

namespace tfd {

std::string SolveTrace::to_text() const {
    std::ostringstream os;
    os << "solve trace\n";
    os << "  windows: " << windows.size() << "\n";
    for (size_t i = 0; i < windows.size(); ++i) {
        const WindowRecord& w = windows[i];
        os << "  [" << i << "] t in (" << w.t_begin << ", " << w.t_end << "]"
           << "  iterations=" << w.iterations << "  contraction=" << w.contraction
           << (w.accepted ? "" : "  (retried)") << "\n";
    }
    os << "  fixed-point residual (sup): " << final_residual << "\n";
    if (cross_discrepancy >= 0.0)
        os << "  cross-solver discrepancy (sup): " << cross_discrepancy << "\n";
    return os.str();
}

std::pair<SpectralField, SolveTrace> picard_solve(const GalerkinSystem& system,
                                                  const FracOrder& order,
                                                  const PicardConfig& config) {
    config.validate();
    const TimeGrid& grid = system.grid;
    const int N = grid.steps();
    const int n = system.modes();
    if (N < 8) throw std::invalid_argument("picard_solve: grid too coarse to resolve a window");
    const double alpha = order.value();
    const double scale = std::pow(grid.dt(), alpha) / std::tgamma(alpha);
    const detail::PLKernelWeights w = detail::pl_kernel_weights(N, alpha);

    // A~ per node, and I^alpha F on the whole grid
    std::vector<Eigen::MatrixXd> At(N + 1);
    for (int j = 0; j <= N; ++j) {
        At[j] = system.a_tilde(j);
        if (!At[j].allFinite()) throw std::invalid_argument("picard_solve: non-finite system matrix");
    }
    const Eigen::MatrixXd IF = frac_integral(TimeSeries(grid, system.F), alpha).values();

    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(N + 1, n);
    c.row(0) = system.c0.transpose();
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(N + 1, n); // y_j = A~_j c_j
    y.row(0) = (At[0] * system.c0).transpose();

    SolveTrace trace;
    int jb = 0;
    int len = N; // window length in steps
    while (jb < N) {
        len = std::min(len, N - jb);
        const int je = jb + len;

        // initial iterate on the window
        for (int j = jb + 1; j <= je; ++j) {
            if (config.initial == PicardConfig::Initial::constant_extension)
                c.row(j) = c.row(jb);
            else
                c.row(j).setZero();
            y.row(j) = (At[j] * c.row(j).transpose()).transpose();
        }

        // frozen-history convolution contributions: all terms that reference
        // y_i with i <= jb never change within this window
        Eigen::MatrixXd hist = Eigen::MatrixXd::Zero(je - jb, n);
        for (int j = jb + 1; j <= je; ++j) {
            Eigen::VectorXd acc = Eigen::VectorXd::Zero(n);
            for (int i = 0; i + 1 <= jb; ++i)
                acc += w.left[j - i] * y.row(i).transpose() + w.right[j - i] * y.row(i + 1).transpose();
            acc += w.left[j - jb] * y.row(jb).transpose(); // left endpoint of the first active cell
            hist.row(j - jb - 1) = acc.transpose();
        }

        double prev_delta = -1.0;
        double last_ratio = 0.0, tail_ratio = 0.0;
        bool converged = false, diverged = false;
        int m = 0;
        Eigen::MatrixXd fresh(je - jb, n);
        for (m = 1; m <= config.max_iterations; ++m) {
            for (int j = jb + 1; j <= je; ++j) {
                Eigen::VectorXd acc = hist.row(j - jb - 1).transpose();
                for (int i = jb; i + 1 <= j; ++i) {
                    if (i > jb) acc += w.left[j - i] * y.row(i).transpose();
                    acc += w.right[j - i] * y.row(i + 1).transpose();
                }
                fresh.row(j - jb - 1) =
                    system.c0.transpose() - scale * acc.transpose() + IF.row(j);
            }
            double delta = 0.0;
            for (int j = jb + 1; j <= je; ++j) {
                delta = std::max(delta, (fresh.row(j - jb - 1) - c.row(j)).cwiseAbs().maxCoeff());
                c.row(j) = fresh.row(j - jb - 1);
                y.row(j) = (At[j] * c.row(j).transpose()).transpose();
            }
            if (!std::isfinite(delta) || delta > 1e12) {
                diverged = true;
                break;
            }
            if (prev_delta > 0.0) {
                last_ratio = delta / prev_delta;
                tail_ratio = std::max(last_ratio, 0.8 * tail_ratio); // decaying max of recent ratios
            }
            if (delta <= config.tol) {
                converged = true;
                break;
            }
            if (m >= 6 && last_ratio > 1.05 && prev_delta > 0.0 && delta > 1.0) {
                diverged = true; // clearly expanding, do not burn the full budget
                break;
            }
            prev_delta = delta;
        }

        WindowRecord rec;
        rec.t_begin = grid.node(jb);
        rec.t_end = grid.node(je);
        rec.iterations = m;
        rec.contraction = (m <= 2) ? 0.0 : tail_ratio;
        rec.accepted = converged && rec.contraction <= config.rho;

        if (rec.accepted) {
            trace.windows.push_back(rec);
            jb = je;
            if (m <= 12 && len < N - jb) len *= 2; // fast window: try growing
            continue;
        }
        (void)diverged;
        trace.windows.push_back(rec);
        if (len == 1)
            throw NonConvergenceError(
                "picard_solve: window shrank below one grid step at t = " +
                    std::to_string(grid.node(jb)),
                trace);
        len = std::max(1, static_cast<int>(std::floor(len * config.shrink)));
    }

    SpectralField field(system.basis, grid, std::move(c));
    TimeSeries res = volterra_residual(field, system, order);
    trace.final_residual = res.values().cwiseAbs().maxCoeff();
    return {std::move(field), std::move(trace)};
}

SpectralField l1_step_solve(const GalerkinSystem& system, const FracOrder& order) {
    const TimeGrid& grid = system.grid;
    const int N = grid.steps();
    const int n = system.modes();
    const double alpha = order.value();
    const double h = grid.dt();
    const double w0 = std::pow(h, -alpha) / std::tgamma(2.0 - alpha);

    std::vector<double> kappa(N + 1, 0.0); // m^{1-a} - (m-1)^{1-a}
    for (int m = 1; m <= N; ++m)
        kappa[m] = std::pow(static_cast<double>(m), 1.0 - alpha) -
                   std::pow(static_cast<double>(m - 1), 1.0 - alpha);

    Eigen::MatrixXd c(N + 1, n);
    c.row(0) = system.c0.transpose();

    Eigen::PartialPivLU<Eigen::MatrixXd> cached;
    bool have_cached = false;

    for (int j = 1; j <= N; ++j) {
        Eigen::VectorXd rhs = w0 * c.row(j - 1).transpose();
        for (int i = 0; i + 2 <= j; ++i)
            rhs -= w0 * kappa[j - i] * (c.row(i + 1) - c.row(i)).transpose();
        rhs += system.F.row(j).transpose();

        const Eigen::MatrixXd M = w0 * Eigen::MatrixXd::Identity(n, n) + system.a_tilde(j);
        Eigen::VectorXd sol;
        if (system.time_constant) {
            if (!have_cached) {
                cached.compute(M);
                have_cached = true;
            }
            sol = cached.solve(rhs);
        } else {
            sol = Eigen::PartialPivLU<Eigen::MatrixXd>(M).solve(rhs);
        }
        if (!sol.allFinite() || (M * sol - rhs).cwiseAbs().maxCoeff() >
                                    1e-8 * std::max(1.0, rhs.cwiseAbs().maxCoeff()))
            throw std::runtime_error("l1_step_solve: singular step matrix at t = " +
                                     std::to_string(grid.node(j)));
        c.row(j) = sol.transpose();
    }
    return SpectralField(system.basis, grid, std::move(c));
}

TimeSeries volterra_residual(const SpectralField& field, const GalerkinSystem& system,
                             const FracOrder& order) {
    if (!(field.grid == system.grid))
        throw std::invalid_argument("volterra_residual: field grid does not match the system");
    const TimeGrid& grid = system.grid;
    const int N = grid.steps();
    const int n = system.modes();

    Eigen::MatrixXd y(N + 1, n);
    for (int j = 0; j <= N; ++j)
        y.row(j) = (system.a_tilde(j) * field.coefficients.row(j).transpose()).transpose();
    const Eigen::MatrixXd conv = frac_integral(TimeSeries(grid, y), order.value()).values();
    const Eigen::MatrixXd IF = frac_integral(TimeSeries(grid, system.F), order.value()).values();

    Eigen::MatrixXd defect(N + 1, 1);
    for (int j = 0; j <= N; ++j) {
        const Eigen::RowVectorXd r =
            field.coefficients.row(j) - system.c0.transpose() + conv.row(j) - IF.row(j);
        defect(j, 0) = r.cwiseAbs().maxCoeff();
    }
    return TimeSeries(grid, std::move(defect));
}

} // namespace tfd
