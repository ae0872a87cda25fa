#include "hetclust/special_functions.hpp"

#include <cmath>
#include <numbers>

namespace hetclust {

namespace {

// The two evaluation regimes meet where the continued fraction for the
// regularized upper incomplete gamma Q(1/2, x^2) starts converging
// quickly, at x^2 = 1.5.
constexpr double kCrossoverSquared = 1.5;

// erf(x) through the all-positive scaled series
//
//   erf(x) = (2x/sqrt(pi)) e^{-x^2} sum_{n>=0} (2x^2)^n / (1*3*...*(2n+1))
//
// No term cancellation, so the sum is accurate to a few ulp for
// x^2 < 1.5 where it is used.
double erf_series(double x) {
    const double two_x2 = 2.0 * x * x;
    double term = 1.0;
    double sum = 1.0;
    for (int n = 1; n < 200; ++n) {
        term *= two_x2 / (2.0 * n + 1.0);
        sum += term;
        if (term < sum * 1e-17) {
            break;
        }
    }
    return 2.0 * std::numbers::inv_sqrtpi * x * std::exp(-x * x) * sum;
}

// erfc(x) = Q(1/2, x^2) by the Legendre continued fraction, evaluated
// with the modified Lentz method. Used for x^2 >= 1.5, where it
// converges in a few dozen iterations.
double erfc_continued_fraction(double x) {
    constexpr double a = 0.5;
    constexpr double tiny = 1e-300;
    const double t = x * x;

    double b = t + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (i - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < tiny) {
            d = tiny;
        }
        c = b + an / c;
        if (std::fabs(c) < tiny) {
            c = tiny;
        }
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::fabs(delta - 1.0) < 1e-16) {
            break;
        }
    }
    // Q(1/2, t) = e^{-t} t^{1/2} / Gamma(1/2) * h, and Gamma(1/2) = sqrt(pi).
    return std::exp(-t) * x * std::numbers::inv_sqrtpi * h;
}

}  // namespace

namespace detail {

double erfc_nonnegative(double x) {
    if (x * x < kCrossoverSquared) {
        return 1.0 - erf_series(x);
    }
    return erfc_continued_fraction(x);
}

}  // namespace detail

PValue chi2_sf_1df(double x) {
    if (!std::isfinite(x) || x < 0.0) {
        throw DomainError("chi2_sf_1df: statistic must be finite and >= 0");
    }
    return PValue(detail::erfc_nonnegative(std::sqrt(0.5 * x)));
}

PValue normal_sf(double z) {
    if (!std::isfinite(z)) {
        throw DomainError("normal_sf: argument must be finite");
    }
    const double upper = 0.5 * detail::erfc_nonnegative(std::fabs(z) / std::numbers::sqrt2);
    return PValue(z >= 0.0 ? upper : 1.0 - upper);
}

}  // namespace hetclust
