#include "homoghj/special.hpp"

#include <cmath>

#include "homoghj/hamiltonians.hpp"

namespace homoghj::special {

namespace {

constexpr double kTwoOverSqrtPi = 1.12837916709551257390;
constexpr double kSeriesCutoff = 3.0;

// erf(x) = (2/sqrt(pi)) e^{-x^2} sum_k 2^k x^{2k+1} / (1*3*...*(2k+1)); all terms positive.
double erf_series(double x) {
    const double x2 = x * x;
    double term = x;
    double sum = x;
    for (int k = 1; k < 200; ++k) {
        term *= 2.0 * x2 / (2.0 * k + 1.0);
        sum += term;
        if (std::fabs(term) < 1e-17 * std::fabs(sum)) break;
    }
    return kTwoOverSqrtPi * std::exp(-x2) * sum;
}

// erfc(x) = e^{-x^2}/sqrt(pi) * 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))), x > 0.
double erfc_continued_fraction(double x) {
    constexpr int kDepth = 80;
    double f = x;
    for (int n = kDepth; n >= 1; --n) f = x + (0.5 * n) / f;
    return std::exp(-x * x) / (std::sqrt(kPi) * f);
}

}  // namespace

double erf(double x) {
    if (std::isnan(x)) return x;
    const double ax = std::fabs(x);
    double r;
    if (ax <= kSeriesCutoff) {
        r = erf_series(ax);
    } else {
        r = 1.0 - erfc_continued_fraction(ax);
    }
    return x < 0.0 ? -r : r;
}

double erfc(double x) {
    if (std::isnan(x)) return x;
    if (x > kSeriesCutoff) return erfc_continued_fraction(x);
    if (x < -kSeriesCutoff) return 2.0 - erfc_continued_fraction(-x);
    return 1.0 - erf(x);
}

double normal_cdf(double z) { return 0.5 * erfc(-z / std::sqrt(2.0)); }

double normal_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * kPi); }

}  // namespace homoghj::special
