#pragma once

namespace homoghj::special {

/// Error function, absolute error below 1e-12 on the whole real line.
/// Power series of e^{x^2} erf(x) for |x| <= 3, continued fraction for erfc beyond.
double erf(double x);

/// Complementary error function; accurate in relative terms in the right tail.
double erfc(double x);

/// Standard normal CDF via erfc.
double normal_cdf(double z);

/// Standard normal density.
double normal_pdf(double z);

}  // namespace homoghj::special
