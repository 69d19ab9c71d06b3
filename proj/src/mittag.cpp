#include "tfd/mittag.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <limits>
#include <vector>

namespace tfd {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr long double kEpsLong = 1.084202172485504434e-19L; // 2^-63

// ---------------------------------------------------------------------------
// Adaptive Gauss-Kronrod (G7, K15) quadrature.
// ---------------------------------------------------------------------------

const double kKronrodNodes[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

const double kKronrodWeights[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

const double kGaussWeights[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct GKResult {
    double value;
    double error;
};

GKResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    double fv[15];
    for (int i = 0; i < 7; ++i) {
        fv[i] = f(c - hw * kKronrodNodes[i]);
        fv[14 - i] = f(c + hw * kKronrodNodes[i]);
    }
    fv[7] = f(c);
    double kron = 0.0, gauss = 0.0;
    for (int i = 0; i < 8; ++i) {
        const double pair = (i == 7) ? fv[7] : fv[i] + fv[14 - i];
        kron += kKronrodWeights[i] * pair;
    }
    // Gauss nodes are the odd-index Kronrod nodes
    for (int i = 0; i < 4; ++i) {
        const int k = 2 * i + 1;
        const double pair = (k == 7) ? fv[7] : fv[k] + fv[14 - k];
        gauss += kGaussWeights[i] * pair;
    }
    return {kron * hw, std::abs(kron - gauss) * hw};
}

double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double abs_tol, double rel_tol) {
    struct Seg {
        double a, b, value, error;
    };
    GKResult first = gk15(f, a, b);
    std::vector<Seg> segs{{a, b, first.value, first.error}};
    double total = first.value, total_err = first.error;
    int evals = 1;
    while (total_err > std::max(abs_tol, rel_tol * std::abs(total)) && evals < 4000) {
        int worst = 0;
        for (int i = 1; i < static_cast<int>(segs.size()); ++i)
            if (segs[i].error > segs[worst].error) worst = i;
        Seg s = segs[worst];
        const double mid = 0.5 * (s.a + s.b);
        GKResult l = gk15(f, s.a, mid);
        GKResult r = gk15(f, mid, s.b);
        total += l.value + r.value - s.value;
        total_err += l.error + r.error - s.error;
        segs[worst] = {s.a, mid, l.value, l.error};
        segs.push_back({mid, s.b, r.value, r.error});
        evals += 2;
    }
    return total;
}

// ---------------------------------------------------------------------------
// Series summation with cancellation accounting.
// ---------------------------------------------------------------------------

struct SeriesResult {
    double value = 0.0;
    bool reliable = false;
};

// Peak log-magnitude of |z|^k/Gamma(alpha k + beta) over k; used to decide
// whether long-double summation can keep 1e-12 relative accuracy.
double series_peak_log(double alpha, double beta, double abs_z) {
    if (abs_z <= 1.0) return 0.0;
    const double lz = std::log(abs_z);
    double peak = -std::lgamma(beta);
    for (int k = 1; k < 400000; ++k) {
        const double lt = k * lz - std::lgamma(alpha * k + beta);
        if (lt > peak) peak = lt;
        else if (lt < peak - 60.0) break;
    }
    return peak;
}

SeriesResult ml_series(double alpha, double beta, double z) {
    const long double zl = z;
    long double sum = 0.0L, comp = 0.0L;
    long double term = 1.0L / std::tgamma(static_cast<long double>(beta));
    long double max_abs = std::fabs(term);
    int k = 0;
    bool past_peak = false;
    while (k < 400000) {
        // compensated accumulation
        const long double y = term - comp;
        const long double t = sum + y;
        comp = (t - sum) - y;
        sum = t;

        ++k;
        const long double arg = static_cast<long double>(alpha) * k + static_cast<long double>(beta);
        long double next = std::pow(zl, static_cast<long double>(k)) / std::tgamma(arg);
        if (arg > 1755.0L) { // tgammal overflow guard; recompute via lgamma
            const long double lt = k * std::log(std::fabs(zl)) - std::lgamma(arg);
            next = (lt < -11300.0L) ? 0.0L : std::exp(lt) * ((z < 0 && (k & 1)) ? -1.0L : 1.0L);
        }
        const long double na = std::fabs(next);
        if (na > max_abs) max_abs = na;
        else past_peak = true;
        if (past_peak && na <= 1e-22L * (std::fabs(sum) + 1e-300L)) {
            sum += next;
            break;
        }
        term = next;
    }
    SeriesResult r;
    r.value = static_cast<double>(sum);
    const long double noise = max_abs * kEpsLong * k;
    r.reliable = std::isfinite(r.value) &&
                 noise <= 1e-12L * std::max(std::fabs(sum), static_cast<long double>(1e-300));
    return r;
}

// alpha == 1, z < 0: Kummer-transformed positive series
// E_{1,beta}(z) = e^z / Gamma(beta) * sum_k (beta-1)/(beta-1+k) * (-z)^k / k!.
double ml_one_negative(double beta, double z) {
    const long double x = -static_cast<long double>(z);
    const long double bm1 = static_cast<long double>(beta) - 1.0L;
    long double pow_term = 1.0L; // x^k / k!
    long double sum = 0.0L;
    for (int k = 0; k < 200000; ++k) {
        const long double factor = (k == 0) ? 1.0L : bm1 / (bm1 + k);
        sum += factor * pow_term;
        pow_term *= x / (k + 1);
        if (k > 4 && pow_term < 1e-25L * sum) break;
    }
    return static_cast<double>(std::exp(-x) * sum / std::tgamma(static_cast<long double>(beta)));
}

// ---------------------------------------------------------------------------
// Integral representation on the negative axis, 0 < alpha < 1.
// ---------------------------------------------------------------------------

double ml_kernel_K(double alpha, double beta, double chi, double z) {
    const double num =
        chi * std::sin(kPi * (1.0 - beta)) - z * std::sin(kPi * (1.0 - beta + alpha));
    const double den = chi * chi - 2.0 * chi * z * std::cos(alpha * kPi) + z * z;
    const double expo = std::pow(chi, 1.0 / alpha);
    if (expo > 700.0) return 0.0;
    return std::pow(chi, (1.0 - beta) / alpha) * std::exp(-expo) * num / (alpha * kPi * den);
}

double ml_kernel_P(double alpha, double beta, double eps, double phi, double z) {
    const double r = std::pow(eps, 1.0 / alpha);
    const double w = r * std::sin(phi / alpha) + phi * (1.0 + (1.0 - beta) / alpha);
    const std::complex<double> num =
        std::pow(eps, 1.0 + (1.0 - beta) / alpha) * std::exp(r * std::cos(phi / alpha)) *
        std::complex<double>(std::cos(w), std::sin(w));
    const std::complex<double> den = eps * std::exp(std::complex<double>(0.0, phi)) - z;
    return (num / den).real() / (2.0 * alpha * kPi);
}

double ml_integral_negative(double alpha, double beta, double z) {
    const double az = -z;
    // Integration radius: kernel carries exp(-chi^{1/alpha}).
    const double R = std::max({std::pow(120.0, alpha), 2.0 * az, 2.0}); // exp(-120) ~ 8e-53
    std::vector<double> pts;
    const double chi0 = (beta > 1.0) ? std::min(1.0, az / 2.0) : 0.0;
    pts.push_back(chi0);
    // Lorentzian-like peak of the denominator at chi = -z cos(pi alpha) (alpha > 1/2)
    const double center = az * std::max(0.0, -std::cos(alpha * kPi));
    const double width = std::max(az * std::sin(alpha * kPi), 1e-3 * std::max(az, 1.0));
    if (center > 0.0) {
        for (double m : {-4.0, -1.0, 0.0, 1.0, 4.0}) {
            const double p = center + m * width;
            if (p > chi0 && p < R) pts.push_back(p);
        }
    }
    for (double p : {0.5 * az, az, R / 2.0}) {
        if (p > chi0 && p < R) pts.push_back(p);
    }
    pts.push_back(R);
    std::sort(pts.begin(), pts.end());

    double total = 0.0;
    auto K = [&](double chi) { return ml_kernel_K(alpha, beta, chi, z); };
    for (size_t i = 0; i + 1 < pts.size(); ++i)
        if (pts[i + 1] > pts[i])
            total += integrate_adaptive(K, pts[i], pts[i + 1], 1e-16, 1e-13);

    if (beta > 1.0) {
        auto P = [&](double phi) { return ml_kernel_P(alpha, beta, chi0, phi, z); };
        total += integrate_adaptive(P, -alpha * kPi, alpha * kPi, 1e-16, 1e-13);
    }
    return total;
}

double ml_eval(double alpha, double beta, double z);

// alpha in (1,2]: duplication E_{a,b}(z) = (E_{a/2,b}(sqrt z) + E_{a/2,b}(-sqrt z))/2
double ml_duplicate(double alpha, double beta, double z) {
    const double s = std::sqrt(z);
    return 0.5 * (ml_eval(alpha / 2.0, beta, s) + ml_eval(alpha / 2.0, beta, -s));
}

double ml_eval(double alpha, double beta, double z) {
    if (z == 0.0) return 1.0 / std::tgamma(beta);

    if (z > 0.0) {
        if (std::log(z) / alpha > std::log(700.0))
            throw std::domain_error("mittag_leffler: z beyond positive overflow horizon (z^(1/alpha) > 700)");
        if (alpha > 1.0) return ml_duplicate(alpha, beta, z);
        SeriesResult s = ml_series(alpha, beta, z); // positive terms: always reliable
        return s.value;
    }

    // z < 0
    if (alpha > 1.0) {
        if (z < -12.0)
            throw std::domain_error("mittag_leffler: z beyond supported negative horizon for alpha > 1");
        SeriesResult s = ml_series(alpha, beta, z);
        if (s.reliable) return s.value;
        throw std::domain_error("mittag_leffler: accuracy loss outside supported horizon (alpha > 1, z < 0)");
    }
    if (z < -60.0)
        throw std::domain_error("mittag_leffler: z beyond supported negative horizon (-60)");

    if (std::abs(alpha - 1.0) < 1e-12) return ml_one_negative(beta, z);

    if (series_peak_log(alpha, beta, -z) < 300.0) {
        SeriesResult s = ml_series(alpha, beta, z);
        if (s.reliable) return s.value;
    }
    return ml_integral_negative(alpha, beta, z);
}

} // namespace

double mittag_leffler(const MLParams& p, double z) {
    if (!std::isfinite(z)) throw std::invalid_argument("mittag_leffler: z must be finite");
    return ml_eval(p.alpha, p.beta, z);
}

TimeSeries gronwall_bound(const TimeSeries& a, const TimeSeries& g, const FracOrder& order) {
    if (a.components() != 1 || g.components() != 1)
        throw std::invalid_argument("gronwall_bound: a and g must be scalar series");
    if (!(a.grid() == g.grid()))
        throw std::invalid_argument("gronwall_bound: a and g must share a grid");
    const int nodes = a.grid().nodes();
    for (int j = 0; j < nodes; ++j) {
        if (a(j) < 0.0 || g(j) < 0.0)
            throw std::invalid_argument("gronwall_bound: a and g must be nonnegative");
        if (j > 0 && g(j) < g(j - 1))
            throw std::invalid_argument("gronwall_bound: g decreasing at node " + std::to_string(j));
    }

    const double alpha = order.value();
    Eigen::VectorXd gk = Eigen::VectorXd::Ones(nodes); // g^k nodewise
    Eigen::VectorXd sum = a.values().col(0);           // k = 0 term
    for (int k = 1; k <= 10000; ++k) {
        TimeSeries ik = frac_integral(a, alpha * k);
        for (int j = 0; j < nodes; ++j) gk(j) *= g(j);
        Eigen::VectorXd term = gk.cwiseProduct(ik.values().col(0));
        sum += term;
        const double tn = term.cwiseAbs().maxCoeff();
        const double sn = sum.cwiseAbs().maxCoeff();
        if (tn <= 1e-14 * sn) {
            Eigen::MatrixXd out = sum;
            return TimeSeries(a.grid(), std::move(out));
        }
    }
    throw std::runtime_error("gronwall_bound: series did not converge within 1e4 terms");
}

} // namespace tfd
