#include "parnn/distributions.hpp"

#include <cmath>
#include <stdexcept>

namespace parnn {

double normal_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014327;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x / std::sqrt(2.0));
}

namespace {

/// Continued-fraction core of the incomplete beta (modified Lentz).
double beta_cf(double a, double b, double x) {
    constexpr int max_iter = 300;
    constexpr double eps = 1e-15;
    constexpr double tiny = 1e-300;

    const double qab = a + b;
    const double qap = a + 1.0;
    const double qam = a - 1.0;
    double c = 1.0;
    double d = 1.0 - qab * x / qap;
    if (std::abs(d) < tiny) d = tiny;
    d = 1.0 / d;
    double h = d;
    for (int m = 1; m <= max_iter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if (std::abs(d) < tiny) d = tiny;
        c = 1.0 + aa / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::abs(del - 1.0) < eps) {
            break;
        }
    }
    return h;
}

} // namespace

double regularized_incomplete_beta(double a, double b, double x) {
    if (a <= 0.0 || b <= 0.0) {
        throw std::invalid_argument("incomplete beta requires a, b > 0");
    }
    if (x <= 0.0) return 0.0;
    if (x >= 1.0) return 1.0;

    const double ln_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                            a * std::log(x) + b * std::log(1.0 - x);
    const double front = std::exp(ln_front);
    if (x < (a + 1.0) / (a + b + 2.0)) {
        return front * beta_cf(a, b, x) / a;
    }
    return 1.0 - front * beta_cf(b, a, 1.0 - x) / b;
}

double f_cdf(double x, int d1, int d2) {
    if (d1 < 1 || d2 < 1) {
        throw std::invalid_argument("F degrees of freedom must be positive");
    }
    if (x <= 0.0) return 0.0;
    const double t = static_cast<double>(d1) * x /
                     (static_cast<double>(d1) * x + static_cast<double>(d2));
    return regularized_incomplete_beta(d1 / 2.0, d2 / 2.0, t);
}

double f_critical(double alpha, int d1, int d2) {
    if (alpha <= 0.0 || alpha >= 1.0) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    const double target = 1.0 - alpha;
    double lo = 0.0;
    double hi = 1.0;
    while (f_cdf(hi, d1, d2) < target) {
        hi *= 2.0;
        if (hi > 1e12) break;
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (f_cdf(mid, d1, d2) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-12 * (1.0 + hi)) break;
    }
    return 0.5 * (lo + hi);
}

double normal_range_cdf(double w, int k) {
    if (k < 2) {
        throw std::invalid_argument("range needs at least two variates");
    }
    if (w <= 0.0) return 0.0;

    // P(R <= w) = k * Integral phi(u) * (Phi(u+w) - Phi(u))^(k-1) du,
    // composite Simpson over u in [-9, 9].
    constexpr double lo = -9.0, hi = 9.0;
    constexpr int intervals = 3600; // even
    const double step = (hi - lo) / intervals;
    auto f = [&](double u) {
        return normal_pdf(u) *
               std::pow(normal_cdf(u + w) - normal_cdf(u), k - 1);
    };
    double sum = f(lo) + f(hi);
    for (int i = 1; i < intervals; ++i) {
        sum += f(lo + i * step) * ((i % 2 == 1) ? 4.0 : 2.0);
    }
    const double integral = sum * step / 3.0;
    const double cdf = k * integral;
    return cdf < 0.0 ? 0.0 : (cdf > 1.0 ? 1.0 : cdf);
}

double normal_range_quantile(double alpha, int k) {
    if (alpha <= 0.0 || alpha >= 1.0) {
        throw std::invalid_argument("alpha must lie in (0, 1)");
    }
    const double target = 1.0 - alpha;
    double lo = 0.0;
    double hi = 2.0;
    while (normal_range_cdf(hi, k) < target && hi < 64.0) {
        hi *= 2.0;
    }
    while (hi - lo > 1e-7) {
        const double mid = 0.5 * (lo + hi);
        if (normal_range_cdf(mid, k) < target) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace parnn
