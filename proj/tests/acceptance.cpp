// Acceptance suite: one [PASS]/[FAIL] line per criterion, with measured
// values and elapsed time.  Exit code 0 iff every criterion passes.

#include "ggbm/bounds.hpp"
#include "ggbm/geometry.hpp"
#include "ggbm/measure.hpp"
#include "ggbm/quadrature.hpp"
#include "ggbm/specfun.hpp"
#include "ggbm/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

using namespace ggbm;

namespace {

constexpr double pi = std::numbers::pi;
const double inf = std::numeric_limits<double>::infinity();

double rel_err(double got, double want) {
    return std::fabs(got - want) / std::fabs(want);
}

std::string fmt(double v, const char* spec = "%.4g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return std::string(buf);
}

struct Criterion {
    std::string name;
    double time_limit_s; // criterion fails if exceeded
    std::function<bool(std::string&)> check;
};

// Least-squares slope of y against x.
double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double m = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

// --------------------------------------------------------------------------
// 1. Bound-table reproduction at (2,2), (3,2), (4,2).
//
// The reference table prints [0.298, 0.363], [0.189, 0.215], [0.138, 0.152];
// the exactly computed values round (half away from zero) to [0.298, 0.363],
// [0.190, 0.215], [0.139, 0.151]: three of the printed digits are truncated
// or off by one in the last place and cannot be reproduced by rounding the
// true values.  The criterion therefore asserts (a) exact 3-decimal rounding
// at (2,2), (b) agreement within one unit in the third decimal everywhere,
// and (c) the computed values against 20-digit closed-form oracles.
// --------------------------------------------------------------------------
bool crit_bound_table(std::string& detail) {
    struct Row {
        int n;
        double lo3, hi3;     // printed reference digits
        double lo_exact, hi_exact; // closed-form oracles
    };
    const Row rows[] = {
        {2, 0.298, 0.363, 0.29817368116159703717, 1.0 - 2.0 / pi},
        {3, 0.189, 0.215, 0.18993054980303831995, 1.0 - pi / 4.0},
        {4, 0.138, 0.152, 0.13867138311177741530, 1.0 - 8.0 / (3.0 * pi)},
    };
    bool ok = true;
    std::ostringstream os;
    for (const Row& r : rows) {
        const bounds::BoundPair pair = bounds::bound_pair({r.n, 2.0});
        const double lo = bounds::round_half_away(pair.lower, 3);
        const double hi = bounds::round_half_away(pair.upper, 3);
        ok = ok && rel_err(pair.lower, r.lo_exact) < 1e-12 &&
             rel_err(pair.upper, r.hi_exact) < 1e-12;
        ok = ok && std::fabs(lo - r.lo3) < 1e-3 + 1e-12 &&
             std::fabs(hi - r.hi3) < 1e-3 + 1e-12;
        if (r.n == 2) ok = ok && lo == 0.298 && hi == 0.363;
        os << " n=" << r.n << " [" << fmt(lo, "%.3f") << ", " << fmt(hi, "%.3f")
           << "]";
    }
    detail = "rounded" + os.str() + "; ref digits (3,2)/(4,2) off by one ulp3";
    return ok;
}

// 2. Closed-form anchors at (2, 2) against an independent quadrature oracle.
bool crit_anchors(std::string& detail) {
    const auto igamma01 = quadrature::integrate_adaptive(
        [](double t) { return std::exp(-t) / t; }, 1.0, 750.0, 1e-16, 1e-14);
    const double lower_oracle = 0.5 * std::exp(1.0) * igamma01.value;
    const double lower = bounds::lower_bound({2, 2.0});
    const double upper = bounds::upper_bound({2, 2.0});
    const double err_lo = std::fabs(lower - lower_oracle);
    const double err_hi = std::fabs(upper - (1.0 - 2.0 / pi));
    detail = "|lower - (e/2)Gamma(0,1)| = " + fmt(err_lo) +
             ", |upper - (1 - 2/pi)| = " + fmt(err_hi);
    return err_lo < 1e-9 && err_hi < 1e-12;
}

// 3. Closed-form vs integral-representation route agreement.
bool crit_routes(std::string& detail) {
    double worst = 0.0;
    int worst_n = 0;
    double worst_p = 0.0;
    for (int n = 2; n <= 100; ++n) {
        for (double p : {1.1, 1.5, 2.0, 3.0, 10.0}) {
            const double a = bounds::lower_bound_closed_form({n, p});
            const double b = bounds::lower_bound_integral({n, p});
            const double r = rel_err(a, b);
            if (r > worst) {
                worst = r;
                worst_n = n;
                worst_p = p;
            }
        }
    }
    detail = "max rel gap " + fmt(worst) + " at (n,p) = (" +
             std::to_string(worst_n) + ", " + fmt(worst_p) + ") over 495 pairs";
    return worst < 1e-9;
}

// 4. Large-n asymptotics: cubic decay of the two-term remainder of the lower
//    bound, and stability of n^2 (upper - leading).
bool crit_asymptotic_order(std::string& detail) {
    const double p = 2.0;
    std::vector<double> log_n, log_resid, f2_scaled;
    for (double nd : {50.0, 100.0, 200.0, 400.0}) {
        const int n = static_cast<int>(nd);
        const bounds::BoundParams params{n, p};
        const double resid = std::fabs(bounds::lower_bound(params) -
                                       bounds::lower_bound_asymptotic_n(params));
        log_n.push_back(std::log(nd));
        log_resid.push_back(std::log(resid));
        f2_scaled.push_back(nd * nd *
                            std::fabs(bounds::upper_bound(params) -
                                      bounds::upper_bound_asymptotic_n(params)));
    }
    const double slope = ls_slope(log_n, log_resid);
    const auto [mn, mx] = std::minmax_element(f2_scaled.begin(), f2_scaled.end());
    const double variation = (*mx - *mn) / *mn;
    detail = "slope " + fmt(slope, "%.4f") + " (need <= -2.7), n^2 upper-resid varies " +
             fmt(100.0 * variation, "%.3g") + "% (need < 25%)";
    return slope <= -2.7 && variation < 0.25;
}

// 5. Large-p limit at n = 3.
bool crit_large_p(std::string& detail) {
    const double lo = std::fabs(bounds::lower_bound({3, 1e4}) - 1.0 / 3.0);
    const double hi = std::fabs(bounds::upper_bound({3, 1e4}) - 1.0 / 3.0);
    detail = "|lower(3,1e4) - 1/3| = " + fmt(lo) + " (<= 2e-3), |upper - 1/3| = " +
             fmt(hi) + " (<= 1e-5)";
    return lo <= 2e-3 && hi <= 1e-5;
}

// 6. t-independence of the homogeneous ratio g and its identity with the
//    lower bound.
bool crit_g_constancy(std::string& detail) {
    double worst_var = 0.0, worst_id = 0.0;
    for (const auto& [n, p] : std::vector<std::pair<int, double>>{
             {2, 2.0}, {3, 2.0}, {5, 3.0}}) {
        const bounds::BoundParams params{n, p};
        worst_var = std::max(
            worst_var, verify::homogeneous_g_constancy(params, {0.1, 1.0, 10.0}));
        for (double t : {0.1, 1.0, 10.0}) {
            worst_id = std::max(worst_id,
                                rel_err(verify::homogeneous_g_value(params, t) / n,
                                        bounds::lower_bound(params)));
        }
    }
    detail = "max variation " + fmt(worst_var) + ", max |g/n / lower - 1| = " +
             fmt(worst_id) + " (both <= 1e-8)";
    return worst_var <= 1e-8 && worst_id <= 1e-8;
}

// 7. Monotonicity of the directional profile g_theta on a 50-point grid for
//    8 directions at (3, 2).
bool crit_g_monotone(std::string& detail) {
    std::vector<double> grid;
    for (int i = 0; i < 50; ++i) {
        grid.push_back(0.05 * std::pow(400.0, i / 49.0)); // 0.05 .. 20
    }
    const std::vector<Eigen::Vector3d> dirs = {
        {1, 0, 0},  {0, 1, 0},  {0, 0, 1},  {1, 1, 0},
        {1, 0, 1},  {0, 1, -1}, {1, 1, 1},  {-1, 2, 1},
    };
    double worst_rise = -1.0;
    for (const auto& d : dirs) {
        const auto g = verify::g_theta_profile(
            {2.0, 0.5}, geom::Direction(Eigen::VectorXd(d)), {3, 2.0}, grid);
        for (std::size_t i = 0; i + 1 < g.size(); ++i) {
            worst_rise = std::max(worst_rise, g[i + 1] - g[i]);
        }
    }
    detail = "worst increase " + fmt(worst_rise) + " over 8 x 49 steps (<= 1e-9)";
    return worst_rise <= 1e-9;
}

// --------------------------------------------------------------------------
// 8. Drop expansion of the cone mass at (n,p,angle) = (3,2,1.0).
//
// The stated shrink factor (>= 3x for residual/eps^2 when eps halves) is not
// attainable: the remainder has a genuine nonzero eps^3 coefficient, so
// residual/eps^2 scales linearly in eps and its halving ratio tends to 2.
// The criterion therefore asserts the quadrature/closed-form coefficient
// matches, the coarea identity, and the o(eps^2) property in the sharp
// measurable form: the residual itself shrinks >= 3x (cubic decay gives
// ~8x), and residual/eps^2 strictly decreases with the measured halving
// ratio inside the cubic-remainder window [1.5, 2.5].
// --------------------------------------------------------------------------
bool crit_expansion(std::string& detail) {
    const bounds::BoundParams params{3, 2.0};
    const double angle = 1.0;
    const auto co = measure::expansion_coefficients(params, angle, 1e-12);
    const double i1_closed = co.c1 * std::pow(std::cos(angle), 2.0);
    const double i2_closed = co.c2 * std::sin(angle) * std::pow(std::cos(angle), 2.0);
    const double e_i1 = rel_err(co.i1_quadrature, i1_closed);
    const double e_i2 = rel_err(co.i2_quadrature, i2_closed);
    const double coarea =
        co.c0 *
        quadrature::integrate_adaptive(
            [](double th) { return std::sin(th); }, 0.0, pi / 2.0 - angle, 1e-14,
            1e-13)
            .value;
    const double e_i0 = std::fabs(co.I0 - coarea);

    // Residual of the second-order expansion of the unnormalized cone mass.
    const double pref = 2.0 * measure::ball_volume(2); // (n-1) omega_{n-1}
    const double c_norm = measure::density_constant(3, 2.0);
    measure::QuadratureSpec tight;
    tight.radial_tol = 1e-13;
    const auto mass = [&](double eps) {
        const geom::TruncatedCone cone{3, angle, eps, inf};
        return measure::cone_measure(cone, params, tight).value / c_norm;
    };
    const auto resid = [&](double eps) {
        return std::fabs(mass(eps) -
                         pref * (co.I0 + co.I1 * eps + 0.5 * co.I2 * eps * eps));
    };
    const double r_half = resid(0.01);
    const double r_full = resid(0.02);
    const double shrink = r_full / r_half;
    const double ratio_eps2 = (r_full / (0.02 * 0.02)) / (r_half / (0.01 * 0.01));
    detail = "I1 rel " + fmt(e_i1) + ", I2 rel " + fmt(e_i2) + ", coarea " +
             fmt(e_i0) + "; resid shrink " + fmt(shrink, "%.3f") +
             "x (>= 3), resid/eps^2 ratio " + fmt(ratio_eps2, "%.3f") +
             " (in [1.5, 2.5])";
    return e_i1 < 1e-8 && e_i2 < 1e-8 && e_i0 < 1e-7 && shrink >= 3.0 &&
           ratio_eps2 > 1.5 && ratio_eps2 < 2.5;
}

// 9. Certified cone violations above the upper bound, none at the proven
//    safe exponent.
bool crit_counterexample(std::string& detail) {
    const bounds::BoundParams params{2, 2.0};
    const auto w50 = verify::counterexample_search(params, 0.5);
    const auto w40 = verify::counterexample_search(params, 0.40);
    const auto w25 = verify::counterexample_search(params, 0.25);
    std::ostringstream os;
    bool ok = true;
    for (const auto* w : {&w50, &w40}) {
        if (!w->has_value() ||
            !((*w)->deficit < -5.0 * (*w)->numeric_error)) {
            ok = false;
            os << " missing-witness";
        } else {
            os << " q=" << fmt((*w)->exponent, "%.2f") << ": deficit "
               << fmt((*w)->deficit) << " (err " << fmt((*w)->numeric_error) << ")";
        }
    }
    ok = ok && !w25.has_value();
    os << (w25.has_value() ? "; UNEXPECTED witness at q=0.25"
                           : "; none at q=0.25");
    detail = os.str().substr(1);
    return ok;
}

// 10. Property suite: random polygon corpus, ball-pair empirical exponent,
//     normalization of mu on a large ball.
bool crit_property_suite(std::string& detail) {
    std::mt19937_64 rng(20260815);
    int violations = 0;
    double worst_margin = 1e300; // min of deficit + 5 error
    for (int i = 0; i < 200; ++i) {
        const geom::Body K = verify::random_convex_polygon(rng);
        const geom::Body L = verify::random_convex_polygon(rng);
        for (double p : {1.5, 2.0, 3.0}) {
            const bounds::BoundParams params{2, p};
            const double alpha = bounds::lower_bound(params);
            for (double lam : {0.25, 0.5, 0.75}) {
                const auto r = verify::bm_deficit(K, L, lam, alpha, params);
                worst_margin =
                    std::min(worst_margin, r.deficit + 5.0 * r.numeric_error);
                if (r.deficit < -5.0 * r.numeric_error) ++violations;
            }
        }
    }
    const double a2 = verify::empirical_max_alpha(
        geom::Body::ball(2, 0.2), geom::Body::ball(2, 0.9), {0.25, 0.5, 0.75},
        {2, 2.0});
    const bool a2_ok = a2 >= bounds::lower_bound({2, 2.0}) - 1e-3;
    double worst_norm = 0.0;
    for (const auto& [n, p] :
         std::vector<std::pair<int, double>>{{2, 2.0}, {3, 2.0}, {3, 3.0}}) {
        const auto m = measure::mu(geom::Body::ball(n, 50.0), {n, p});
        worst_norm = std::max(worst_norm, std::fabs(m.value - 1.0));
    }
    detail = std::to_string(violations) +
             " violations in 1800 corpus deficits (min deficit+5err = " +
             fmt(worst_margin) + "); ball-pair alpha* = " + fmt(a2, "%.4f") +
             " vs lower - 1e-3; |mu(Ball(50)) - 1| max " + fmt(worst_norm);
    return violations == 0 && a2_ok && worst_norm <= 1e-8;
}

// 11. Strict Jensen gap over the shared leading asymptote.
bool crit_jensen(std::string& detail) {
    double worst = 1e300;
    for (const auto& [n, p] :
         std::vector<std::pair<int, double>>{{2, 2.0}, {3, 2.0}, {4, 3.0}}) {
        worst = std::min(worst, verify::jensen_gap({n, p}));
    }
    detail = "min gap " + fmt(worst) + " (> 1e-4)";
    return worst > 1e-4;
}

} // namespace

int main() {
    const std::vector<Criterion> criteria = {
        {"bound table (2,2) (3,2) (4,2) 3-decimal reproduction", 1.0,
         crit_bound_table},
        {"closed-form anchors (e/2)Gamma(0,1) and 1 - 2/pi", 10.0, crit_anchors},
        {"lower-bound route agreement on 495-point (n,p) grid", 10.0, crit_routes},
        {"large-n remainder decay order and upper-bound 1/n^2 term", 10.0,
         crit_asymptotic_order},
        {"large-p limit 1/n at n = 3", 10.0, crit_large_p},
        {"homogeneous ratio g: t-independence and bound identity", 60.0,
         crit_g_constancy},
        {"directional profile g_theta monotone on 8 x 50 grid", 60.0,
         crit_g_monotone},
        {"cone drop expansion: coefficients, coarea, o(eps^2) residual", 60.0,
         crit_expansion},
        {"certified violations at q = 0.5, 0.40; none at q = 0.25", 300.0,
         crit_counterexample},
        {"property suite: corpus deficits, empirical alpha, normalization", 600.0,
         crit_property_suite},
        {"strict Jensen gap at (2,2), (3,2), (4,3)", 10.0, crit_jensen},
    };

    bool all_ok = true;
    int idx = 0;
    for (const Criterion& c : criteria) {
        ++idx;
        std::string detail;
        bool ok = false;
        const auto start = std::chrono::steady_clock::now();
        try {
            ok = c.check(detail);
        } catch (const std::exception& e) {
            ok = false;
            detail = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
                .count();
        if (elapsed > c.time_limit_s) {
            ok = false;
            detail += " [exceeded " + fmt(c.time_limit_s, "%.0f") + " s budget]";
        }
        all_ok = all_ok && ok;
        std::printf("[%s] %2d %-58s %s (%.2f s)\n", ok ? "PASS" : "FAIL", idx,
                    c.name.c_str(), detail.c_str(), elapsed);
    }
    std::printf("%s\n", all_ok ? "ACCEPTANCE: all criteria passed"
                               : "ACCEPTANCE: FAILURES present");
    return all_ok ? 0 : 1;
}
