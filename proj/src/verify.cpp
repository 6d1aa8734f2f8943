#include "ggbm/verify.hpp"

#include "ggbm/errors.hpp"
#include "ggbm/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>

namespace ggbm::verify {

namespace {

constexpr double pi = std::numbers::pi;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return std::string(buf);
}

struct PowTerm {
    double value;
    double error;
};

// First-order propagation of an absolute measure error through x -> x^a.
// At x == 0 the derivative bound degenerates; the worst case of x^a over
// [0, err] is err^a, which is the honest fallback there.
PowTerm pow_term(double mu, double err, double a) {
    const double v = std::pow(mu, a);
    double e = 0.0;
    if (mu > 0.0) {
        e = a * std::pow(mu, a - 1.0) * err;
    } else if (err > 0.0) {
        e = std::pow(err, a);
    }
    return {v, e};
}

struct DeficitValue {
    double deficit;
    double error;
};

DeficitValue deficit_from(const measure::MeasureValue& mu_c,
                          const measure::MeasureValue& mu_k,
                          const measure::MeasureValue& mu_l, double lambda,
                          double alpha) {
    const PowTerm c = pow_term(mu_c.value, mu_c.abs_error, alpha);
    const PowTerm k = pow_term(mu_k.value, mu_k.abs_error, alpha);
    const PowTerm l = pow_term(mu_l.value, mu_l.abs_error, alpha);
    return {c.value - lambda * k.value - (1.0 - lambda) * l.value,
            c.error + lambda * k.error + (1.0 - lambda) * l.error};
}

void check_pair(const geom::Body& K, const geom::Body& L,
                const bounds::BoundParams& params) {
    params.validate();
    if (K.dim() != params.n || L.dim() != params.n) {
        throw std::invalid_argument("body dimension does not match params.n");
    }
}

} // namespace

DeficitReport bm_deficit(const geom::Body& K, const geom::Body& L, double lambda,
                         double alpha_exponent, const bounds::BoundParams& params,
                         const measure::QuadratureSpec& spec) {
    check_pair(K, L, params);
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("bm_deficit: lambda must lie in [0, 1]");
    }
    if (!(alpha_exponent > 0.0)) {
        throw std::invalid_argument("bm_deficit: alpha_exponent must be positive");
    }
    const measure::MeasureValue mu_k = measure::mu(K, params, spec);
    const measure::MeasureValue mu_l = measure::mu(L, params, spec);
    // The endpoint combinations equal an operand exactly; reusing its measure
    // keeps the endpoint deficits identically zero.
    const measure::MeasureValue mu_c =
        lambda == 0.0 ? mu_l
        : lambda == 1.0
            ? mu_k
            : measure::mu(geom::combine(lambda, K, L), params, spec);
    const DeficitValue d = deficit_from(mu_c, mu_k, mu_l, lambda, alpha_exponent);

    DeficitReport out;
    out.lambda = lambda;
    out.alpha_exponent = alpha_exponent;
    out.mu_combined = mu_c.value;
    out.mu_left = mu_k.value;
    out.mu_right = mu_l.value;
    out.deficit = d.deficit;
    out.numeric_error = d.error;
    out.body_left = K.describe();
    out.body_right = L.describe();
    return out;
}

double empirical_max_alpha(const geom::Body& K, const geom::Body& L,
                           const std::vector<double>& lambda_grid,
                           const bounds::BoundParams& params,
                           const measure::QuadratureSpec& spec) {
    check_pair(K, L, params);
    if (lambda_grid.empty()) {
        throw std::invalid_argument("empirical_max_alpha: lambda grid is empty");
    }
    for (double l : lambda_grid) {
        if (!(l >= 0.0 && l <= 1.0)) {
            throw std::invalid_argument("empirical_max_alpha: lambda outside [0, 1]");
        }
    }
    // The measures do not depend on alpha: evaluate once per lambda.
    struct Row {
        double lambda;
        measure::MeasureValue mu_c;
    };
    const measure::MeasureValue mu_k = measure::mu(K, params, spec);
    const measure::MeasureValue mu_l = measure::mu(L, params, spec);
    std::vector<Row> rows;
    rows.reserve(lambda_grid.size());
    for (double l : lambda_grid) {
        measure::MeasureValue mu_c =
            l == 0.0   ? mu_l
            : l == 1.0 ? mu_k
                       : measure::mu(geom::combine(l, K, L), params, spec);
        rows.push_back({l, mu_c});
    }
    const auto feasible = [&](double alpha) {
        for (const Row& r : rows) {
            const DeficitValue d = deficit_from(r.mu_c, mu_k, mu_l, r.lambda, alpha);
            if (d.deficit < -d.error) return false;
        }
        return true;
    };

    constexpr double alpha_floor = 1e-6;
    if (!feasible(alpha_floor)) {
        // The measure is log-concave, so every pair admits arbitrarily small
        // positive exponents; reaching this line means the quadrature error
        // bars are unreliable for this pair.
        throw NumericError(
            "empirical_max_alpha: deficit certified negative at alpha = 1e-6");
    }
    if (feasible(1.0)) return 1.0;
    double lo = alpha_floor;
    double hi = 1.0;
    while (hi - lo > 1e-4) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

std::optional<CounterexampleWitness> counterexample_search(
    const bounds::BoundParams& params, double q, std::vector<double> angle_grid,
    std::vector<double> drop_grid, double trunc_radius,
    const measure::QuadratureSpec& spec) {
    params.validate();
    if (!(q > 0.0)) {
        throw std::invalid_argument("counterexample_search: q must be positive");
    }
    if (!(trunc_radius > 0.0) || std::isinf(trunc_radius)) {
        throw std::invalid_argument(
            "counterexample_search: truncation radius must be finite positive");
    }
    for (double a : angle_grid) {
        if (!(a > 0.0 && a < pi / 2.0)) {
            throw std::invalid_argument(
                "counterexample_search: angles must lie in (0, pi/2)");
        }
    }
    for (double e : drop_grid) {
        if (!(e > 0.0)) {
            throw std::invalid_argument("counterexample_search: drops must be positive");
        }
    }
    const double lambda = 0.5;
    for (double a : angle_grid) {
        for (double e : drop_grid) {
            const geom::Body A = geom::Body::cone(params.n, a, 0.0, trunc_radius);
            const geom::Body B = geom::Body::cone(params.n, a, e, trunc_radius);
            // combine() collapses equal-angle equal-radius cone pairs to the
            // cone with averaged drop -- a superset of the Minkowski
            // combination that differs only within `drop` of the truncation
            // sphere, whose mass at R = 30 is far below double precision.
            // A superset can only increase mu of the combination, so a
            // certified negative deficit remains valid for the exact sum.
            const geom::Body C = geom::combine(lambda, A, B);
            const auto eval = [&](const measure::QuadratureSpec& s) {
                const auto mu_a =
                    measure::cone_measure(std::get<geom::TruncatedCone>(A.repr()),
                                          params, s);
                const auto mu_b =
                    measure::cone_measure(std::get<geom::TruncatedCone>(B.repr()),
                                          params, s);
                const auto mu_c =
                    measure::cone_measure(std::get<geom::TruncatedCone>(C.repr()),
                                          params, s);
                return deficit_from(mu_c, mu_a, mu_b, lambda, q);
            };
            const DeficitValue first = eval(spec);
            if (!(first.deficit < -5.0 * first.error)) continue;
            measure::QuadratureSpec tight = spec;
            tight.radial_tol = 0.1 * spec.radial_tol;
            const DeficitValue confirmed = eval(tight);
            if (!(confirmed.deficit < -5.0 * confirmed.error)) continue;
            CounterexampleWitness w;
            w.exponent = q;
            w.cone_angle = a;
            w.drop = e;
            w.trunc_radius = trunc_radius;
            w.lambda = lambda;
            w.deficit = confirmed.deficit;
            w.numeric_error = confirmed.error;
            return w;
        }
    }
    return std::nullopt;
}

namespace {

// Shared radial-ratio evaluator:
//   g = int_0^t F(r) r^{n-1} e^{-V(r)} dr / int_0^t r^{n-1} e^{-V(r)} dr,
//   V(r) = scale * r^p,  F(r) = n / (n + (p/(p-1)) V(r)).
// The upper limit is clamped where e^{-V} underflows; beyond it both
// integrands are exact zeros in double precision.
double radial_ratio(const RadialPotential& pot, int n, double t, double tol) {
    const double p = pot.p;
    const double cap = std::pow(700.0 / pot.scale, 1.0 / p);
    const double hi = std::min(t, cap);
    const auto weight = [&](double r) {
        return std::pow(r, n - 1.0) * std::exp(-pot.scale * std::pow(r, p));
    };
    const auto f_weight = [&](double r) {
        const double v = pot.scale * std::pow(r, p);
        return n / (n + p / (p - 1.0) * v) * weight(r);
    };
    const auto num = quadrature::integrate_adaptive(f_weight, 0.0, hi, 1e-300, tol);
    const auto den = quadrature::integrate_adaptive(weight, 0.0, hi, 1e-300, tol);
    return num.value / den.value;
}

void check_potential(const RadialPotential& pot) {
    if (!(pot.p > 1.0) || !std::isfinite(pot.p)) {
        throw std::invalid_argument("RadialPotential: requires finite p > 1");
    }
    if (!(pot.scale > 0.0) || !std::isfinite(pot.scale)) {
        throw std::invalid_argument("RadialPotential: requires finite scale > 0");
    }
}

} // namespace

std::vector<double> g_theta_profile(const RadialPotential& potential,
                                    const geom::Direction& theta,
                                    const bounds::BoundParams& params,
                                    const std::vector<double>& t_grid, double tol) {
    params.validate();
    check_potential(potential);
    if (theta.dim() != params.n) {
        throw std::invalid_argument("g_theta_profile: direction dimension mismatch");
    }
    double prev = 0.0;
    for (double t : t_grid) {
        if (!(t > prev)) {
            throw std::invalid_argument(
                "g_theta_profile: t grid must be positive and increasing");
        }
        prev = t;
    }
    std::vector<double> out;
    out.reserve(t_grid.size());
    for (double t : t_grid) {
        out.push_back(radial_ratio(potential, params.n, t, tol));
    }
    return out;
}

double homogeneous_g_value(const bounds::BoundParams& params, double t, double tol) {
    params.validate();
    if (!(params.p > 1.0)) {
        throw std::invalid_argument("homogeneous_g_value: requires p > 1");
    }
    if (!(t > 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument("homogeneous_g_value: requires finite t > 0");
    }
    const double inf = std::numeric_limits<double>::infinity();
    return radial_ratio({params.p, t}, params.n, inf, tol);
}

double homogeneous_g_constancy(const bounds::BoundParams& params,
                               const std::vector<double>& t_values, double tol) {
    if (t_values.size() < 2) {
        throw std::invalid_argument("homogeneous_g_constancy: needs >= 2 t values");
    }
    std::vector<double> g;
    g.reserve(t_values.size());
    for (double t : t_values) g.push_back(homogeneous_g_value(params, t, tol));
    double worst = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        for (std::size_t j = 0; j < g.size(); ++j) {
            if (i == j) continue;
            worst = std::max(worst, std::fabs(g[i] / g[j] - 1.0));
        }
    }
    return worst;
}

double jensen_gap(const bounds::BoundParams& params) {
    params.validate();
    if (!(params.p > 1.0)) {
        throw std::invalid_argument("jensen_gap: requires p > 1");
    }
    return bounds::lower_bound(params) -
           (params.p - 1.0) / (params.p * params.n);
}

double radial_functional_average(const geom::Body& body,
                                 const bounds::BoundParams& params, double tol) {
    params.validate();
    if (params.n != 2 || body.dim() != 2) {
        throw std::invalid_argument("radial_functional_average: 2-D bodies only");
    }
    if (!(params.p > 1.0)) {
        throw std::invalid_argument("radial_functional_average: requires p > 1");
    }
    const double p = params.p;
    const auto f_weight = [&](double r) {
        const double v = std::pow(r, p) / p;
        return 2.0 / (2.0 + p / (p - 1.0) * v) * r * std::exp(-v);
    };
    const auto num_inner = [&](double angle) {
        Eigen::VectorXd u(2);
        u << std::cos(angle), std::sin(angle);
        const double rho = geom::radial(body, geom::Direction(u));
        if (!(rho > 0.0)) return 0.0;
        return quadrature::integrate_adaptive(f_weight, 0.0, rho, 0.05 * tol, 1e-12)
            .value;
    };
    const auto den_inner = [&](double angle) {
        Eigen::VectorXd u(2);
        u << std::cos(angle), std::sin(angle);
        return measure::radial_mass(2, p, geom::radial(body, geom::Direction(u)));
    };
    const std::vector<double> pts = body.angular_breakpoints();
    const auto num =
        quadrature::integrate_adaptive_pts(num_inner, -pi, pi, pts, tol, 1e-12);
    const auto den =
        quadrature::integrate_adaptive_pts(den_inner, -pi, pi, pts, tol, 1e-12);
    return num.value / den.value;
}

geom::Body random_convex_polygon(std::mt19937_64& rng) {
    // Bit-shift uniforms keep the generator identical across standard
    // libraries (std::uniform_real_distribution is implementation-defined).
    const auto uniform = [&rng]() {
        return static_cast<double>(rng() >> 11) * 0x1.0p-53; // [0, 1)
    };
    for (;;) {
        const int k = 4 + static_cast<int>(uniform() * 9.0); // {4, ..., 12}
        std::vector<Eigen::Vector2d> pts;
        pts.reserve(static_cast<std::size_t>(k));
        for (int i = 0; i < k; ++i) {
            // Stratified angles: one sample per arc of width 2 pi / k. Every
            // angular gap stays below pi, which pins the origin strictly
            // inside the hull.
            const double angle = 2.0 * pi * (i + uniform()) / k;
            const double radius = 0.2 + 2.8 * uniform();
            pts.emplace_back(radius * std::cos(angle), radius * std::sin(angle));
        }
        // Monotone-chain hull with strict turns only, so the polygon factory
        // never sees collinear triples.
        std::sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) {
            return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
        });
        const auto cross = [](const Eigen::Vector2d& o, const Eigen::Vector2d& a,
                              const Eigen::Vector2d& b) {
            return (a.x() - o.x()) * (b.y() - o.y()) -
                   (a.y() - o.y()) * (b.x() - o.x());
        };
        std::vector<Eigen::Vector2d> hull(2 * pts.size());
        std::size_t h = 0;
        for (const auto& pt : pts) { // lower chain
            while (h >= 2 && cross(hull[h - 2], hull[h - 1], pt) <= 1e-9) --h;
            hull[h++] = pt;
        }
        const std::size_t lower = h + 1;
        for (auto it = pts.rbegin() + 1; it != pts.rend(); ++it) { // upper chain
            while (h >= lower && cross(hull[h - 2], hull[h - 1], *it) <= 1e-9) --h;
            hull[h++] = *it;
        }
        hull.resize(h - 1); // last point repeats the first
        if (hull.size() < 4) continue; // hull swallowed too many; resample
        return geom::Body::polygon(hull);
    }
}

std::string deficit_csv_header() {
    return "lambda,alpha_exponent,mu_combined,mu_left,mu_right,deficit,"
           "numeric_error,certified_violation,body_left,body_right";
}

std::string to_csv_row(const DeficitReport& r) {
    std::ostringstream os;
    os << fmt(r.lambda) << ',' << fmt(r.alpha_exponent) << ',' << fmt(r.mu_combined)
       << ',' << fmt(r.mu_left) << ',' << fmt(r.mu_right) << ',' << fmt(r.deficit)
       << ',' << fmt(r.numeric_error) << ',' << (r.certified_violation() ? 1 : 0)
       << ",\"" << r.body_left << "\",\"" << r.body_right << '"';
    return os.str();
}

std::string witness_csv_header() {
    return "exponent,cone_angle,drop,trunc_radius,lambda,deficit,numeric_error";
}

std::string to_csv_row(const CounterexampleWitness& w) {
    std::ostringstream os;
    os << fmt(w.exponent) << ',' << fmt(w.cone_angle) << ',' << fmt(w.drop) << ','
       << fmt(w.trunc_radius) << ',' << fmt(w.lambda) << ',' << fmt(w.deficit) << ','
       << fmt(w.numeric_error);
    return os.str();
}

} // namespace ggbm::verify
