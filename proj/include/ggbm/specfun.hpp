#pragma once

// Scalar special functions used by the bound formulas and the measure
// integrals: log-gamma and the incomplete gamma family.  The upper
// incomplete gamma
//
//     Gamma(s, x) = integral_x^inf t^{s-1} e^{-t} dt,   x > 0,
//
// is supported for every real s, including s <= 0 where neither the
// standard library nor most common libraries provide it.  All routines are
// deterministic and validated against high-precision reference values.

namespace ggbm::specfun {

// ln Gamma(x) for x > 0.
//
// Uses the Weierstrass-product expansion for small x, a fixed-coefficient
// Lanczos rational approximation in the midrange, and the Stirling series
// with Bernoulli-number coefficients (Abramowitz & Stegun 6.1.40) for
// x > 20.  Relative accuracy ~1e-14 away from the zeros at x = 1, 2;
// absolute accuracy ~1e-15 near them.
double log_gamma(double x);

// ln Gamma(1 + u) for |u| <= 0.5, via the zeta-series form of the
// Weierstrass product.  Full relative precision even as u -> 0 (where
// log_gamma itself would lose digits against its zero).
double log_gamma_1p(double u);

// ln Gamma(s, x) for any real s and x > 0.  Gamma(s, x) is strictly
// positive, so the logarithm always exists; this is the overflow-safe
// workhorse behind the two functions below.
//
// Route selection:
//   - modified Lentz continued fraction when x >= s + 1, or when s <= 0
//     and x >= 0.3;
//   - a stabilized small-|s| series when |s| <= 0.5 and x is small;
//   - series complement Gamma(s)(1 - P(s,x)) for s > 0.5, x < s + 1;
//   - downward recurrence in s (in log space) for s < -0.5, x < 0.3.
// The continued fraction stops when the running correction factor is
// within 1e-15 of one; exceeding 10^6 iterations raises NumericError.
double log_upper_inc_gamma(double s, double x);

// Gamma(s, x) in linear scale.  Throws std::overflow_error when the value
// exceeds the double range (e.g. very negative s with tiny x); callers in
// that regime should use log_scaled_upper_gamma instead.
double upper_inc_gamma(double s, double x);

// ln(e^x Gamma(s, x)) = ln Gamma(s, x) + x.  This is the scale-free form
// required by the closed-form lower bound, where e^x and Gamma(s, x)
// separately overflow/underflow for dimensions in the thousands.
double log_scaled_upper_gamma(double s, double x);

// Regularized lower incomplete gamma P(s, x) = gamma(s, x) / Gamma(s) for
// s > 0, x >= 0.  Monotone nondecreasing in x with limit 1.
double lower_inc_gamma_regularized(double s, double x);

} // namespace ggbm::specfun
