#include "cspr/numerics.hpp"

#include <limits>
#include <string>

#include "cspr/errors.hpp"

namespace cspr {

Vector5 solve_spd(const SymMatrix5& m, const Vector5& b, double pd_relative) {
    constexpr std::size_t n = 5;
    const double tol = pd_relative * m.max_diagonal();
    std::array<double, n * n> l{};
    for (std::size_t j = 0; j < n; ++j) {
        double d = m(j, j);
        for (std::size_t k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
        if (!(d > tol) || !(d > 0.0)) throw NotPositiveDefinite(j, d);
        const double ljj = std::sqrt(d);
        l[j * n + j] = ljj;
        for (std::size_t i = j + 1; i < n; ++i) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
            l[i * n + j] = s / ljj;
        }
    }
    // L y = b, then L' x = y.
    Vector5 y{};
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l[i * n + k] * y[k];
        y[i] = s / l[i * n + i];
    }
    Vector5 x{};
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l[k * n + ii] * x[k];
        x[ii] = s / l[ii * n + ii];
    }
    return x;
}

namespace {

constexpr int kMaxIterations = 10000;
constexpr double kEps = std::numeric_limits<double>::epsilon();

// log(x^a e^-x / Gamma(a))
double log_prefactor(double a, double x) { return a * std::log(x) - x - std::lgamma(a); }

// P(a,x) by the power series; converges quickly for x < a + 1.
double series_p(double a, double x) {
    double term = 1.0 / a;
    double sum = term;
    for (int k = 1; k < kMaxIterations; ++k) {
        term *= x / (a + k);
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(log_prefactor(a, x));
}

// Q(a,x) by the Legendre continued fraction (modified Lentz); for x >= a + 1.
double continued_fraction_q(double a, double x) {
    constexpr double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < kMaxIterations; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < kEps) break;
    }
    return std::exp(log_prefactor(a, x)) * h;
}

void check_gamma_args(double a, double x) {
    if (!(a > 0.0)) throw DomainError("incomplete gamma needs a > 0");
    if (!(x >= 0.0)) throw DomainError("incomplete gamma needs x >= 0");
}

}  // namespace

double gamma_p(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) return 0.0;
    if (std::isinf(x)) return 1.0;
    if (x < a + 1.0) return series_p(a, x);
    return 1.0 - continued_fraction_q(a, x);
}

double gamma_q(double a, double x) {
    check_gamma_args(a, x);
    if (x == 0.0) return 1.0;
    if (std::isinf(x)) return 0.0;
    if (x < a + 1.0) return 1.0 - series_p(a, x);
    return continued_fraction_q(a, x);
}

double chi2_cdf(double x, double df) {
    if (!(x >= 0.0)) throw DomainError("chi2_cdf needs x >= 0");
    if (!(df > 0.0)) throw DomainError("chi2_cdf needs df > 0");
    return gamma_p(0.5 * df, 0.5 * x);
}

double chi2_sf(double x, double df) {
    if (!(x >= 0.0)) throw DomainError("chi2_sf needs x >= 0");
    if (!(df > 0.0)) throw DomainError("chi2_sf needs df > 0");
    return gamma_q(0.5 * df, 0.5 * x);
}

double chi2_quantile(double p, double df) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("chi2_quantile needs 0 < p < 1");
    if (!(df > 0.0)) throw DomainError("chi2_quantile needs df > 0");

    // Bracket [lo, hi] with cdf(lo) <= p <= cdf(hi).
    double lo = 0.0;
    double hi = std::max(1.0, df);
    while (chi2_cdf(hi, df) < p) {
        lo = hi;
        hi *= 2.0;
    }

    // Newton steps from the midpoint; fall back to bisection whenever Newton leaves the bracket.
    const double a = 0.5 * df;
    double x = 0.5 * (lo + hi);
    for (int it = 0; it < 200; ++it) {
        const double f = chi2_cdf(x, df) - p;
        if (std::abs(f) <= 1e-14) return x;
        if (f < 0.0) lo = x; else hi = x;
        const double density = x > 0.0 ? std::exp((a - 1.0) * std::log(0.5 * x) - 0.5 * x - std::lgamma(a)) * 0.5 : 0.0;
        double next = density > 0.0 ? x - f / density : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::abs(next - x) <= 4.0 * kEps * std::max(1.0, x)) return next;
        x = next;
    }
    return x;
}

}  // namespace cspr
