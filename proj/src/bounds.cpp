#include "ggbm/bounds.hpp"

#include "ggbm/quadrature.hpp"
#include "ggbm/specfun.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace ggbm::bounds {

void BoundParams::validate() const {
    if (n < 2) {
        throw std::domain_error("BoundParams: dimension n must be an integer >= 2, got " +
                                std::to_string(n));
    }
    if (!(p >= 1.0) || !std::isfinite(p)) {
        throw std::domain_error("BoundParams: shape p must be finite and >= 1, got " +
                                std::to_string(p));
    }
}

std::string to_string(EvalMethod m) {
    switch (m) {
    case EvalMethod::closed_form: return "closed_form";
    case EvalMethod::integral_representation: return "integral_representation";
    case EvalMethod::limit_p1: return "limit_p1";
    }
    return "unknown";
}

double lower_bound_closed_form(const BoundParams& params) {
    params.validate();
    if (params.p == 1.0) return 0.0;
    const double n = params.n;
    const double a = (params.p - 1.0) * n / params.p;
    const double s = 1.0 - n / params.p;
    // (1/n) e^a a^{n/p} Gamma(1 - n/p, a), assembled in log space: the
    // e^{+a} factor cancels the e^{-a} decay inside Gamma(s, a), so the
    // scaled form stays in range even when a is large.
    const double ln = (n / params.p) * std::log(a) + specfun::log_scaled_upper_gamma(s, a);
    return std::exp(ln) / n;
}

double lower_bound_integral(const BoundParams& params) {
    params.validate();
    if (params.p == 1.0) return 0.0;
    const double n = params.n;
    const double c = params.p / ((params.p - 1.0) * n);
    const double expo = -n / params.p;
    // (1/n) int_0^inf (1 + c s)^{-n/p} e^{-s} ds.  The integrand is a
    // product of two decaying factors; truncate where e^{-s} alone is
    // below 1e-22 of the integral scale (integrand <= e^{-s}).
    const double s_max = 55.0;
    auto f = [c, expo](double s) { return std::exp(expo * std::log1p(c * s) - s); };
    const auto q = quadrature::integrate_adaptive(f, 0.0, s_max, 1e-14, 1e-13);
    return q.value / n;
}

double lower_bound(const BoundParams& params) {
    params.validate();
    if (params.p == 1.0) return 0.0;
    if (params.n / params.p > 150.0) return lower_bound_integral(params);
    return lower_bound_closed_form(params);
}

double upper_bound(const BoundParams& params) {
    params.validate();
    if (params.p == 1.0) return 0.0;
    const double n = params.n;
    const double p = params.p;
    const double ln = std::log(p / (n - 1.0)) + specfun::log_gamma((n + p - 2.0) / p) +
                      specfun::log_gamma(n / p) - 2.0 * specfun::log_gamma((n - 1.0) / p);
    return 1.0 - std::exp(ln);
}

BoundPair bound_pair(const BoundParams& params) {
    params.validate();
    BoundPair out;
    out.upper = upper_bound(params);
    if (params.p == 1.0) {
        out.lower = 0.0;
        out.method = EvalMethod::limit_p1;
    } else if (params.n / params.p > 150.0) {
        out.lower = lower_bound_integral(params);
        out.method = EvalMethod::integral_representation;
    } else {
        out.lower = lower_bound_closed_form(params);
        out.method = EvalMethod::closed_form;
    }
    return out;
}

double lower_bound_asymptotic_n(const BoundParams& params) {
    params.validate();
    const double n = params.n;
    return (params.p - 1.0) / (params.p * n) +
           (params.p - 1.0) / (params.p * params.p * n * n);
}

double upper_bound_asymptotic_n(const BoundParams& params) {
    params.validate();
    return (params.p - 1.0) / (params.p * params.n);
}

double large_p_limit(const BoundParams& params) {
    params.validate();
    return 1.0 / params.n;
}

double round_half_away(double x, int decimals) {
    const double scale = std::pow(10.0, decimals);
    return std::copysign(std::floor(std::fabs(x) * scale + 0.5), x) / scale;
}

} // namespace ggbm::bounds
