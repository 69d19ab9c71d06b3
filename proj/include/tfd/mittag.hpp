#pragma once

#include "tfd/fraccalc.hpp"
#include "tfd/grid.hpp"

namespace tfd {

/// Parameters of the two-parameter Mittag-Leffler function
/// E_{alpha,beta}(z) = sum_k z^k / Gamma(alpha k + beta).
struct MLParams {
    double alpha;
    double beta;

    MLParams(double a, double b) : alpha(a), beta(b) {
        if (!(alpha > 0.0) || alpha > 2.0)
            throw std::invalid_argument("MLParams: alpha must lie in (0,2]");
        if (!(beta > 0.0) || beta > 50.0)
            throw std::invalid_argument("MLParams: beta must lie in (0,50]");
    }
};

/// Evaluate E_{alpha,beta}(z) for real z.
///
/// Regimes: truncated Taylor series with term-ratio stopping wherever the
/// summation keeps enough significant digits (always for z >= 0), and an
/// integral-representation fallback on the negative axis once series
/// cancellation would eat the accuracy budget.  alpha == 1 uses a
/// positive-term confluent series instead of the integral.
///
/// Supported horizon: z^(1/alpha) <= 700 on the positive axis (the value
/// itself overflows beyond), z >= -60 for alpha in (0,1], z >= -12 for
/// alpha in (1,2].  Requests outside throw std::domain_error.
/// Relative accuracy is 1e-10 or better on the supported range; see
/// tests/fixtures/ml_reference.csv for the validation table.
double mittag_leffler(const MLParams& p, double z);

inline double mittag_leffler(double alpha, double beta, double z) {
    return mittag_leffler(MLParams(alpha, beta), z);
}

/// Majorant sum_{k>=0} g^k(t) (I^{alpha k} a)(t) for the fractional
/// Gronwall inequality.  a and g must be scalar, nonnegative, and g
/// nondecreasing; the series is truncated when a term's sup-norm drops
/// below 1e-14 of the partial sum (error if 1e4 terms do not suffice).
TimeSeries gronwall_bound(const TimeSeries& a, const TimeSeries& g, const FracOrder& order);

} // namespace tfd
