#include "tfd/fraccalc.hpp"

#include <cmath>
#include <vector>

namespace tfd {

namespace detail {

// Cell weights for int_0^1 (m - s)^{a-1} * {1-s, s} ds with m = j - i >= 1,
// i.e. the contribution of the hat functions at cell ends when the kernel
// is integrated exactly.  left[m] multiplies the left value, right[m] the right.
PLKernelWeights pl_kernel_weights(int n, double a) {
    PLKernelWeights w;
    w.left.resize(n + 1, 0.0);
    w.right.resize(n + 1, 0.0);
    std::vector<double> pow_a(n + 1), pow_a1(n + 1);
    for (int m = 0; m <= n; ++m) {
        pow_a[m] = std::pow(static_cast<double>(m), a);
        pow_a1[m] = std::pow(static_cast<double>(m), a + 1.0);
    }
    for (int m = 1; m <= n; ++m) {
        const double d0 = (pow_a[m] - pow_a[m - 1]) / a;           // zeroth moment
        const double d1 = (pow_a1[m] - pow_a1[m - 1]) / (a + 1.0); // first moment about s=0
        // right = int (m-s)^{a-1} s ds = m*d0 - d1, left = d0 - right
        w.right[m] = static_cast<double>(m) * d0 - d1;
        w.left[m] = d0 - w.right[m];
    }
    return w;
}

} // namespace detail

TimeSeries frac_integral(const TimeSeries& f, double order) {
    if (!(order > 0.0))
        throw std::invalid_argument("frac_integral: order must be positive");
    const TimeGrid& g = f.grid();
    const int n = g.steps();
    const int nc = f.components();
    const double h = g.dt();
    const double scale = std::pow(h, order) / std::tgamma(order);

    const detail::PLKernelWeights w = detail::pl_kernel_weights(n, order);

    Eigen::MatrixXd out = Eigen::MatrixXd::Zero(g.nodes(), nc);
    for (int c = 0; c < nc; ++c) {
        const double f0 = f.origin_value(c);
        for (int j = 1; j <= n; ++j) {
            double acc = 0.0;
            // cell i = j - m covers [t_{j-m}, t_{j-m+1}]
            for (int m = 1; m <= j; ++m) {
                const int i = j - m;
                const double fl = (i == 0) ? f0 : f(i, c);
                acc += w.left[m] * fl + w.right[m] * f(i + 1, c);
            }
            out(j, c) = scale * acc;
        }
    }
    return TimeSeries(g, std::move(out));
}

TimeSeries caputo_derivative(const TimeSeries& f, const FracOrder& order) {
    if (!f.origin_defined())
        throw std::invalid_argument("caputo_derivative: f(t_0) must be defined");
    const double a = order.value();
    const TimeGrid& g = f.grid();
    const int n = g.steps();
    const int nc = f.components();
    const double h = g.dt();
    const double w0 = std::pow(h, -a) / std::tgamma(2.0 - a);

    // kappa_m = m^{1-a} - (m-1)^{1-a}
    std::vector<double> kappa(n + 1, 0.0);
    for (int m = 1; m <= n; ++m)
        kappa[m] = std::pow(static_cast<double>(m), 1.0 - a) -
                   std::pow(static_cast<double>(m - 1), 1.0 - a);

    Eigen::MatrixXd out(g.nodes(), nc);
    out.row(0).setZero();
    for (int c = 0; c < nc; ++c) {
        for (int j = 1; j <= n; ++j) {
            double acc = 0.0;
            for (int i = 0; i < j; ++i)
                acc += kappa[j - i] * (f(i + 1, c) - f(i, c));
            out(j, c) = w0 * acc;
        }
    }
    return TimeSeries(g, std::move(out)).with_undefined_origin();
}

TimeSeries rl_derivative(const TimeSeries& f, const FracOrder& order) {
    TimeSeries d = caputo_derivative(f, order);
    const double a = order.value();
    const TimeGrid& g = f.grid();
    const double ginv = 1.0 / std::tgamma(1.0 - a);
    Eigen::MatrixXd v = d.values();
    for (int c = 0; c < f.components(); ++c) {
        const double f0 = f(0, c);
        for (int j = 1; j <= g.steps(); ++j)
            v(j, c) += f0 * std::pow(g.node(j), -a) * ginv;
    }
    return TimeSeries(g, std::move(v), /*origin_defined=*/false);
}

double y_alpha_norm(const TimeSeries& f, const FracOrder& order) {
    const TimeGrid& g = f.grid();
    const int n = g.steps();
    if (n < 4)
        throw std::invalid_argument("y_alpha_norm: need at least 4 steps");
    const double a = order.value();
    const double h = g.dt();

    double sup_val = 0.0, sup_w = 0.0;
    for (int c = 0; c < f.components(); ++c) {
        for (int j = 0; j <= n; ++j) sup_val = std::max(sup_val, std::abs(f(j, c)));
        for (int j = 1; j <= n; ++j) {
            double fp;
            if (j == n)
                fp = (f(n, c) - f(n - 1, c)) / h;
            else
                fp = (f(j + 1, c) - f(j - 1, c)) / (2.0 * h);
            sup_w = std::max(sup_w, std::pow(g.node(j), 1.0 - a) * std::abs(fp));
        }
    }
    return sup_val + sup_w;
}

} // namespace tfd
