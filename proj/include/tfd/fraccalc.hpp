#pragma once

#include "tfd/grid.hpp"

namespace tfd {

// Discrete fractional calculus on uniform grids.  All operators use
// product quadrature against the piecewise-linear reconstruction of the
// input (L1 family): the weakly singular kernel is integrated exactly on
// each cell, so every operator is exact on affine inputs.

/// (I^a f)(t_j) = 1/Gamma(a) * int_0^{t_j} (t_j - tau)^{a-1} f(tau) dtau.
/// Output row 0 is 0.  Accepts any positive order; the Gronwall machinery
/// needs orders above one, the public CLI surface sticks to (0,1).
TimeSeries frac_integral(const TimeSeries& f, double order);
inline TimeSeries frac_integral(const TimeSeries& f, const FracOrder& order) {
    return frac_integral(f, order.value());
}

/// Caputo derivative via the L1 scheme.  Row 0 of the result is an
/// undefined-origin sentinel: t^{-alpha} blows up there.
TimeSeries caputo_derivative(const TimeSeries& f, const FracOrder& order);

/// Riemann-Liouville derivative: Caputo plus the f(0) t^{-alpha}/Gamma(1-alpha)
/// correction, evaluated analytically at the nodes.  The correction path is
/// shared with caputo_derivative so the two agree bit-for-bit up to it.
TimeSeries rl_derivative(const TimeSeries& f, const FracOrder& order);

/// sup_j |f(t_j)| + sup_{j>=1} |t_j^{1-alpha} f'(t_j)| with f' by centered
/// differences (one-sided at the ends).  Requires at least 4 steps.
double y_alpha_norm(const TimeSeries& f, const FracOrder& order);

namespace detail {

/// Exact cell moments of the convolution kernel against the hat basis:
/// left[m], right[m] multiply the endpoint values of the cell m steps away;
/// the grid factor h^a/Gamma(a) is not included.
struct PLKernelWeights {
    std::vector<double> left, right;
};
PLKernelWeights pl_kernel_weights(int cells, double order);

} // namespace detail

} // namespace tfd
