#pragma once

// Closed-form lower and upper bounds for the Brunn-Minkowski exponent
// alpha_p(n) of the generalized Gaussian measure
//
//     dmu_p = C(n,p) exp(-|x|^p / p) dx        (p >= 1, dimension n >= 2),
//
// i.e. the largest alpha such that mu_p(l K + (1-l) L)^alpha >=
// l mu_p(K)^alpha + (1-l) mu_p(L)^alpha over convex bodies containing the
// origin.  p = 2 is the standard Gaussian; p -> inf approaches the uniform
// measure on the unit ball, whose exponent is the classical 1/n.
//
// With a = (p-1) n / p the bounds are
//
//   lower(n,p) = (1/n) e^a a^{n/p} Gamma(1 - n/p, a)
//              = (1/n) integral_0^inf (1 + p s / ((p-1) n))^{-n/p} e^{-s} ds
//   upper(n,p) = 1 - (p/(n-1)) Gamma((n+p-2)/p) Gamma(n/p) / Gamma((n-1)/p)^2
//
// and both vanish at p = 1 (mu_1 has no positive exponent).  The two lower
// routes are independent implementations used to cross-validate each other.

#include <string>

namespace ggbm::bounds {

struct BoundParams {
    int n;    // dimension, integer >= 2
    double p; // shape parameter, real >= 1

    void validate() const; // throws std::domain_error on violation
};

enum class EvalMethod {
    closed_form,             // incomplete-gamma closed form
    integral_representation, // adaptive quadrature of the integral form
    limit_p1,                // exact 0 at p = 1
};

std::string to_string(EvalMethod m);

struct BoundPair {
    double lower = 0.0;
    double upper = 0.0;
    EvalMethod method = EvalMethod::closed_form;
};

// Lower bound, automatic route: p == 1 exact zero; integral representation
// when n / p > 150 (the incomplete-gamma argument regime where continued
// fractions slow down); closed form otherwise.
double lower_bound(const BoundParams& params);

// Route-forced variants (for cross-validation).
double lower_bound_closed_form(const BoundParams& params);
double lower_bound_integral(const BoundParams& params);

// Upper bound, evaluated in log-gamma space; exact 0 at p = 1.
double upper_bound(const BoundParams& params);

// Both bounds plus the route tag chosen for the lower bound.
BoundPair bound_pair(const BoundParams& params);

// Two-term large-n expansion of the lower bound:
//   (p-1)/(p n) + (p-1)/(p^2 n^2).
double lower_bound_asymptotic_n(const BoundParams& params);

// Leading large-n term of the upper bound: (p-1)/(p n).
double upper_bound_asymptotic_n(const BoundParams& params);

// Large-p limit of both bounds: 1/n (the classical Brunn-Minkowski
// exponent of the uniform measure on the ball).
double large_p_limit(const BoundParams& params);

// Round to `decimals` places, half away from zero (display convention
// used by the CLI tables).
double round_half_away(double x, int decimals);

} // namespace ggbm::bounds
