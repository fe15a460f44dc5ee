#include "tactile/stats/distributions.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "tactile/error.hpp"
#include "tactile/stats/quadrature.hpp"

namespace tactile::stats {

namespace {

constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIterations = 500;
constexpr double kSqrt2 = 1.4142135623730950488;
constexpr double kInvSqrt2Pi = 0.39894228040143267794;

void check_df(double df, const char* name) {
    if (!(df > 0.0)) {
        throw DomainError(std::string(name) + " degrees of freedom must be positive");
    }
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_continued_fraction(double x, double a, double b) {
    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < kTiny) d = kTiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= kMaxIterations; ++m) {
        const double m2 = 2.0 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < kTiny) d = kTiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return h;
}

double gamma_series(double a, double x) {
    double sum = 1.0 / a;
    double term = sum;
    double ap = a;
    for (int n = 0; n < kMaxIterations * 4; ++n) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * kEps) break;
    }
    return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_continued_fraction(double a, double x) {
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kMaxIterations * 4; ++i) {
        const double an = -i * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::abs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < kEps) break;
    }
    return std::exp(-x + a * std::log(x) - std::lgamma(a)) * h;
}

// Phi(z) - Phi(z - w) for w >= 0, using whichever tail avoids cancellation.
double normal_band(double z, double w) {
    if (z - 0.5 * w > 0.0) {
        return normal_sf(z - w) - normal_sf(z);
    }
    return normal_cdf(z) - normal_cdf(z - w);
}

// P(range of k iid standard normals <= w).
double normal_range_cdf(double w, double k) {
    if (w <= 0.0) return 0.0;
    auto integrand = [w, k](double z) {
        const double band = normal_band(z, w);
        if (band <= 0.0) return 0.0;
        return kInvSqrt2Pi * std::exp(-0.5 * z * z) * std::pow(band, k - 1.0);
    };
    // The integrand vanishes outside [-8.5, 8.5 + w] to double precision;
    // split at the window center where it peaks.
    const double lo = -8.5;
    const double hi = 8.5 + w;
    const double mid = 0.5 * w;
    double p = integrate(integrand, lo, mid, 1e-14) + integrate(integrand, mid, hi, 1e-14);
    p *= k;
    return std::min(1.0, std::max(0.0, p));
}

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_sf(double x) { return 0.5 * std::erfc(x / kSqrt2); }

double regularized_beta(double x, double a, double b) {
    if (!(a > 0.0) || !(b > 0.0)) throw DomainError("incomplete beta needs a, b > 0");
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    const double front = std::exp(log_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_continued_fraction(x, a, b) / a;
    }
    return 1.0 - front * beta_continued_fraction(1.0 - x, b, a) / b;
}

double regularized_gamma_p(double a, double x) {
    if (!(a > 0.0)) throw DomainError("incomplete gamma needs a > 0");
    if (x <= 0.0) return 0.0;
    if (x < a + 1.0) return gamma_series(a, x);
    return 1.0 - gamma_continued_fraction(a, x);
}

double regularized_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw DomainError("incomplete gamma needs a > 0");
    if (x <= 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - gamma_series(a, x);
    return gamma_continued_fraction(a, x);
}

double student_t_cdf(double t, double df) {
    check_df(df, "Student t");
    if (std::isinf(t)) return t > 0 ? 1.0 : 0.0;
    const double tail = 0.5 * regularized_beta(df / (df + t * t), 0.5 * df, 0.5);
    return t >= 0.0 ? 1.0 - tail : tail;
}

double student_t_two_sided_p(double t, double df) {
    check_df(df, "Student t");
    if (std::isinf(t)) return 0.0;
    return std::min(1.0, regularized_beta(df / (df + t * t), 0.5 * df, 0.5));
}

double f_cdf(double x, double df1, double df2) {
    check_df(df1, "F numerator");
    check_df(df2, "F denominator");
    if (x <= 0.0) return 0.0;
    return regularized_beta(df1 * x / (df1 * x + df2), 0.5 * df1, 0.5 * df2);
}

double f_sf(double x, double df1, double df2) {
    check_df(df1, "F numerator");
    check_df(df2, "F denominator");
    if (x <= 0.0) return 1.0;
    return regularized_beta(df2 / (df2 + df1 * x), 0.5 * df2, 0.5 * df1);
}

double chisq_cdf(double x, double df) {
    check_df(df, "chi-square");
    return regularized_gamma_p(0.5 * df, 0.5 * x);
}

double chisq_sf(double x, double df) {
    check_df(df, "chi-square");
    return regularized_gamma_q(0.5 * df, 0.5 * x);
}

double studentized_range_cdf(double q, double k, double df) {
    if (!(k >= 2.0)) throw DomainError("studentized range needs k >= 2 groups");
    check_df(df, "studentized range");
    if (q <= 0.0) return 0.0;
    if (std::isinf(df) || df > 1e5) return normal_range_cdf(q, k);

    // Density of s = sqrt(chi^2_df / df).
    const double log_norm =
        0.5 * df * std::log(df) - std::lgamma(0.5 * df) - (0.5 * df - 1.0) * std::log(2.0);
    auto integrand = [&](double s) {
        if (s <= 0.0) return 0.0;
        const double log_density = log_norm + (df - 1.0) * std::log(s) - 0.5 * df * s * s;
        return std::exp(log_density) * normal_range_cdf(q * s, k);
    };
    const double spread = 1.0 / std::sqrt(df);
    const double lo = std::max(0.0, 1.0 - 7.5 * spread);
    const double hi = 1.0 + 10.0 * spread;
    const double p = integrate(integrand, lo, 1.0, 1e-11) + integrate(integrand, 1.0, hi, 1e-11);
    return std::min(1.0, std::max(0.0, p));
}

double studentized_range_sf(double q, double k, double df) {
    return std::max(0.0, 1.0 - studentized_range_cdf(q, k, df));
}

double studentized_range_quantile(double p, double k, double df) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("quantile probability must lie in (0,1)");
    double lo = 0.0;
    double hi = 8.0;
    while (studentized_range_cdf(hi, k, df) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e6) throw DomainError("studentized range quantile did not bracket");
    }
    for (int i = 0; i < 60 && hi - lo > 1e-10; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (studentized_range_cdf(mid, k, df) < p) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

}  // namespace tactile::stats
