#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ggbm/measure.hpp"
#include "oracle_utils.hpp"

#include <cmath>
#include <numbers>

using namespace ggbm;
using bounds::BoundParams;
using geom::Body;

namespace {

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();

double rel_err(double got, double want) {
    return std::fabs(got - want) / std::max(1e-300, std::fabs(want));
}

// mu_{p=2} of an axis-aligned box [-a,a]x[-b,b]x... (Gaussian separability).
double gauss_box(std::initializer_list<double> half_sides) {
    double v = 1.0;
    for (double a : half_sides) v *= std::erf(a / std::numbers::sqrt2);
    return v;
}

Body cube(int n, double half_side) {
    Eigen::MatrixXd A(2 * n, n);
    A.setZero();
    Eigen::VectorXd b(2 * n);
    for (int i = 0; i < n; ++i) {
        A(2 * i, i) = 1.0;
        A(2 * i + 1, i) = -1.0;
        b(2 * i) = half_side;
        b(2 * i + 1) = half_side;
    }
    return Body::hpolytope(A, b);
}

} // namespace

TEST_CASE("density constant: normalizes the measure exactly") {
    CHECK(rel_err(measure::density_constant(2, 2.0), 1.0 / (2.0 * pi)) < 1e-14);
    for (int n : {2, 3, 4, 7}) {
        for (double p : {1.0, 1.5, 2.0, 3.5}) {
            const double total = measure::density_constant(n, p) *
                                 measure::sphere_surface(n) * measure::radial_mass(n, p, inf);
            CHECK(rel_err(total, 1.0) < 1e-13);
        }
    }
}

TEST_CASE("sphere surface and ball volume closed forms") {
    CHECK(rel_err(measure::sphere_surface(2), 2.0 * pi) < 1e-14);
    CHECK(rel_err(measure::sphere_surface(3), 4.0 * pi) < 1e-14);
    CHECK(rel_err(measure::sphere_surface(4), 2.0 * pi * pi) < 1e-14);
    CHECK(rel_err(measure::ball_volume(1), 2.0) < 1e-14);
    CHECK(rel_err(measure::ball_volume(2), pi) < 1e-14);
    CHECK(rel_err(measure::ball_volume(3), 4.0 * pi / 3.0) < 1e-14);
}

TEST_CASE("radial mass: closed forms and quadrature oracle") {
    CHECK(measure::radial_mass(3, 2.0, 0.0) == 0.0);
    CHECK(rel_err(measure::radial_mass(2, 2.0, 1.0), 1.0 - std::exp(-0.5)) < 1e-14);
    // R = inf equals p^{n/p-1} Gamma(n/p).
    CHECK(rel_err(measure::radial_mass(3, 2.0, inf),
                  std::sqrt(pi / 2.0)) < 1e-14); // 2^{1/2} Gamma(3/2)
    // Independent Simpson oracle at a generic (n, p, R).
    const double want = oracle::simpson(
        [](double r) { return r * r * std::exp(-std::pow(r, 1.7) / 1.7); }, 0.0, 2.0,
        1e-15);
    CHECK(rel_err(measure::radial_mass(3, 1.7, 2.0), want) < 1e-12);
    // Regularized form.
    CHECK(rel_err(measure::radial_mass_regularized(3, 1.7, 2.0),
                  want / measure::radial_mass(3, 1.7, inf)) < 1e-12);
    CHECK(measure::radial_mass_regularized(3, 2.0, inf) == 1.0);
    CHECK_THROWS_AS(measure::radial_mass(0, 2.0, 1.0), std::domain_error);
    CHECK_THROWS_AS(measure::radial_mass(2, 2.0, -1.0), std::domain_error);
}

TEST_CASE("mu: balls across dimensions and rules") {
    // n = 2 exact-angle rule.
    auto m2 = measure::mu(Body::ball(2, 1.0), {2, 2.0});
    CHECK(std::fabs(m2.value - (1.0 - std::exp(-0.5))) < 1e-10);
    CHECK(m2.kind == measure::MeasureKind::deterministic_quadrature);
    auto big = measure::mu(Body::ball(2, 40.0), {2, 2.0});
    CHECK(std::fabs(big.value - 1.0) < 1e-10);

    // n = 3 product rule hits the closed form exactly (constant integrand).
    auto m3 = measure::mu(Body::ball(3, 1.3), {3, 2.5});
    CHECK(std::fabs(m3.value - measure::radial_mass_regularized(3, 2.5, 1.3)) < 1e-12);

    // n = 5 Monte Carlo: constant integrand, zero variance.
    measure::QuadratureSpec spec;
    spec.mc_samples = 2000;
    auto m5 = measure::mu(Body::ball(5, 1.1), {5, 2.0}, spec);
    CHECK(m5.kind == measure::MeasureKind::monte_carlo_95ci);
    CHECK(std::fabs(m5.value - measure::radial_mass_regularized(5, 2.0, 1.1)) < 1e-12);
    CHECK(m5.abs_error == 0.0);
}

TEST_CASE("mu: half-plane through the origin has measure 1/2") {
    Eigen::MatrixXd A(1, 2);
    A << 1.0, 0.3;
    Eigen::VectorXd b(1);
    b << 0.0;
    const auto m = measure::mu(Body::hpolytope(A, b), {2, 2.0});
    CHECK(std::fabs(m.value - 0.5) < 1e-8);
}

TEST_CASE("mu: Gaussian boxes against the separability oracle") {
    const auto sq = measure::mu(cube(2, 1.0), {2, 2.0});
    CHECK(std::fabs(sq.value - gauss_box({1.0, 1.0})) < 1e-9);

    // Diamond = rotated square of half-side 1/sqrt(2); the Gaussian is
    // rotation invariant.
    const Body diamond = Body::polygon({Eigen::Vector2d(1, 0), Eigen::Vector2d(0, 1),
                                        Eigen::Vector2d(-1, 0), Eigen::Vector2d(0, -1)});
    const auto dm = measure::mu(diamond, {2, 2.0});
    CHECK(std::fabs(dm.value - gauss_box({0.5 * std::numbers::sqrt2,
                                          0.5 * std::numbers::sqrt2})) < 1e-9);

    // 3-D box through the product rule. The box's radial function has kinks
    // along the edges, so the fixed product rule converges algebraically:
    // expect ~1e-4 at the default order, with an honest error estimate.
    const auto c3 = measure::mu(cube(3, 0.8), {3, 2.0});
    CHECK(std::fabs(c3.value - gauss_box({0.8, 0.8, 0.8})) < 5e-4);
    CHECK(std::fabs(c3.value - gauss_box({0.8, 0.8, 0.8})) < 10.0 * c3.abs_error + 1e-9);

    // Quadrupling the order shrinks the error (algebraic convergence).
    measure::QuadratureSpec fine;
    fine.sphere_points = 256;
    const auto c3f = measure::mu(cube(3, 0.8), {3, 2.0}, fine);
    CHECK(std::fabs(c3f.value - gauss_box({0.8, 0.8, 0.8})) <
          0.5 * std::fabs(c3.value - gauss_box({0.8, 0.8, 0.8})));

    // 4-D cube by Monte Carlo, within a few confidence half-widths.
    measure::QuadratureSpec spec;
    spec.mc_samples = 100000;
    spec.seed = 1;
    const auto c4 = measure::mu(cube(4, 1.0), {4, 2.0}, spec);
    CHECK(std::fabs(c4.value - gauss_box({1, 1, 1, 1})) < 3.0 * c4.abs_error);
    CHECK(c4.abs_error < 2e-3);
}

TEST_CASE("mu: Monte Carlo is deterministic in the seed") {
    measure::QuadratureSpec spec;
    spec.mc_samples = 20000;
    spec.seed = 7;
    const Body body = cube(4, 1.0);
    const auto a = measure::mu(body, {4, 2.0}, spec);
    const auto b = measure::mu(body, {4, 2.0}, spec);
    CHECK(a.value == b.value);
    CHECK(a.abs_error == b.abs_error);
    spec.seed = 8;
    CHECK(measure::mu(body, {4, 2.0}, spec).value != a.value);
}

TEST_CASE("mu: rule overrides and validation") {
    measure::QuadratureSpec spec;
    spec.rule = measure::SphereRule::exact_angle_2d;
    CHECK_THROWS_AS(measure::mu(Body::ball(3, 1.0), {3, 2.0}, spec), std::invalid_argument);
    spec.rule = measure::SphereRule::monte_carlo;
    spec.mc_samples = 500;
    CHECK_THROWS_AS(measure::mu(Body::ball(2, 1.0), {2, 2.0}, spec), std::invalid_argument);
    spec.mc_samples = 5000;
    const auto m = measure::mu(Body::ball(2, 1.0), {2, 2.0}, spec);
    CHECK(std::fabs(m.value - (1.0 - std::exp(-0.5))) < 1e-12);
    CHECK_THROWS_AS(measure::mu(Body::ball(3, 1.0), {2, 2.0}), std::invalid_argument);
}

TEST_CASE("mu: polygon-pair combination realized exactly matches merged polygon") {
    const Body sq = cube(2, 1.0);
    const Body square = Body::polygon({Eigen::Vector2d(1, -1), Eigen::Vector2d(1, 1),
                                       Eigen::Vector2d(-1, 1), Eigen::Vector2d(-1, -1)});
    const Body diamond = Body::polygon({Eigen::Vector2d(1.2, 0), Eigen::Vector2d(0, 1.2),
                                        Eigen::Vector2d(-1.2, 0), Eigen::Vector2d(0, -1.2)});
    const Body lazy = Body::combination(0.4, square, diamond);
    const Body merged = geom::polygon_minkowski(0.4, square, diamond);
    const auto ml = measure::mu(lazy, {2, 2.0});
    const auto mm = measure::mu(merged, {2, 2.0});
    CHECK(std::fabs(ml.value - mm.value) < 1e-11);
    (void)sq;
}

TEST_CASE("kernel H: closed form at p = 2") {
    // H(r, s, 2) = e^{-r^2/2} sqrt(pi/2) erfc(s / sqrt(2)).
    CHECK(rel_err(measure::kernel_H(0.0, 0.0, 2.0), std::sqrt(pi / 2.0)) < 1e-10);
    for (double r : {0.0, 0.5, 1.7, 3.0}) {
        for (double s : {-2.0, -0.3, 0.0, 0.8, 2.5, 6.0}) {
            const double want = std::exp(-r * r / 2.0) * std::sqrt(pi / 2.0) *
                                std::erfc(s / std::numbers::sqrt2);
            CHECK(std::fabs(measure::kernel_H(r, s, 2.0) - want) < 1e-10);
        }
    }
}

TEST_CASE("kernel H: reflection identity and monotonicity") {
    for (double p : {1.0, 1.5, 3.0}) {
        for (double r : {0.2, 1.0}) {
            // Integrand is even in t: H(r,-s) = 2 H(r,0) - H(r,s).
            const double lhs = measure::kernel_H(r, -1.3, p);
            const double rhs = 2.0 * measure::kernel_H(r, 0.0, p) -
                               measure::kernel_H(r, 1.3, p);
            CHECK(std::fabs(lhs - rhs) < 5e-10);
            double prev = measure::kernel_H(r, -1.0, p);
            for (double s : {0.0, 1.0, 2.0, 4.0}) {
                const double cur = measure::kernel_H(r, s, p);
                CHECK(cur < prev + 1e-12);
                CHECK(cur >= 0.0);
                prev = cur;
            }
        }
    }
}

TEST_CASE("kernel H: ds derivative matches the boundary density") {
    // Central differences of H in s against -e^{-(r^2+s^2)^{p/2}/p}.
    for (double p : {1.5, 2.0, 3.0}) {
        for (double r : {0.4, 1.1}) {
            const double alpha = 1.0;
            const double s = r * std::tan(alpha);
            const double h = 1e-5;
            const double dH = (measure::kernel_H(r, s + h, p, 1e-12) -
                               measure::kernel_H(r, s - h, p, 1e-12)) /
                              (2.0 * h);
            const double want = -std::exp(-std::pow(r / std::cos(alpha), p) / p);
            CHECK(rel_err(dH, want) < 1e-6);
        }
    }
}

TEST_CASE("cone measure: 2-D wedges reduce to angular fractions") {
    // Zero drop, infinite radius: the cone is the wedge of opening
    // pi - 2 alpha, and every centered wedge has measure opening / (2 pi).
    for (double alpha : {pi / 4.0, 0.8, 1.3}) {
        const geom::TruncatedCone wedge{2, alpha, 0.0, inf};
        const auto m = measure::cone_measure(wedge, {2, 2.0});
        const double want = (pi - 2.0 * alpha) / (2.0 * pi);
        CHECK(std::fabs(m.value - want) < 1e-9);
        CHECK(std::fabs(m.value - want) < m.abs_error + 1e-12);
    }
    // Same fractions hold for any p by rotation invariance of mu_p.
    const geom::TruncatedCone wedge{2, 1.0, 0.0, inf};
    for (double p : {1.3, 3.0}) {
        const auto m = measure::cone_measure(wedge, {2, p});
        CHECK(std::fabs(m.value - (pi - 2.0) / (2.0 * pi)) < 1e-9);
    }
}

TEST_CASE("cone measure: agrees with the polar-coordinate mu on the same body") {
    // Finite truncated cones in 2-D: two independent routes (cylindrical
    // kernel vs exact-angle polar quadrature).
    for (double drop : {0.0, 0.2}) {
        for (double R : {1.5, 30.0}) {
            const Body body = Body::cone(2, 1.2, drop, R);
            const auto via_kernel =
                measure::cone_measure(std::get<geom::TruncatedCone>(body.repr()), {2, 2.0});
            const auto via_polar = measure::mu(body, {2, 2.0});
            CHECK(std::fabs(via_kernel.value - via_polar.value) <
                  via_kernel.abs_error + via_polar.abs_error + 1e-9);
        }
    }
    // 3-D: cylindrical kernel vs product-rule polar quadrature.
    const Body c3 = Body::cone(3, 1.0, 0.1, 2.0);
    const auto k3 = measure::cone_measure(std::get<geom::TruncatedCone>(c3.repr()), {3, 2.0});
    const auto p3 = measure::mu(c3, {3, 2.0});
    CHECK(std::fabs(k3.value - p3.value) < k3.abs_error + p3.abs_error + 1e-12);
    // Sharper cross-check against a high-order polar rule: the cylindrical
    // kernel route carries tight tolerances, so it should sit within the
    // refined rule's own error bar.
    measure::QuadratureSpec fine;
    fine.sphere_points = 512;
    const auto p3f = measure::mu(c3, {3, 2.0}, fine);
    CHECK(std::fabs(k3.value - p3f.value) < k3.abs_error + p3f.abs_error + 1e-12);
    CHECK(std::fabs(k3.value - p3f.value) < 2e-5);
    // and against Monte Carlo with generic p.
    const Body c3b = Body::cone(3, 1.3, 0.05, 2.5);
    measure::QuadratureSpec spec;
    spec.mc_samples = 150000;
    spec.rule = measure::SphereRule::monte_carlo;
    const auto k3b =
        measure::cone_measure(std::get<geom::TruncatedCone>(c3b.repr()), {3, 1.7});
    const auto m3b = measure::mu(c3b, {3, 1.7}, spec);
    CHECK(std::fabs(k3b.value - m3b.value) < k3b.abs_error + 3.0 * m3b.abs_error);
}

TEST_CASE("cone measure: degenerate limits") {
    // alpha -> pi/2: the cone collapses toward a ray.
    const auto thin = measure::cone_measure({2, 1.57, 0.0, inf}, {2, 2.0});
    CHECK(thin.value < 1e-3);
    CHECK(thin.value >= 0.0);
    // Large drop with wide angle approaches the whole plane.
    const auto wide = measure::cone_measure({2, 0.05, 50.0, inf}, {2, 2.0});
    CHECK(wide.value > 0.99);
}

TEST_CASE("expansion coefficients: frozen values at (n=3, p=2, alpha=1)") {
    const auto ec = measure::expansion_coefficients({3, 2.0}, 1.0);
    CHECK(rel_err(ec.I0, 0.198686655915) < 1e-9);
    CHECK(rel_err(ec.I1, 0.291926581726) < 1e-9);
    CHECK(rel_err(ec.I2, 0.30787379564) < 1e-9);
    CHECK(rel_err(ec.M, 2.0 * measure::ball_volume(2) * ec.I0) < 1e-14);
}

TEST_CASE("expansion coefficients: closed forms vs defining integrals") {
    for (double p : {1.4, 2.0, 3.0}) {
        for (int n : {2, 3, 5}) {
            for (double alpha : {0.6, 1.0, 1.45}) {
                const auto ec = measure::expansion_coefficients({n, p}, alpha);
                CHECK(rel_err(ec.I1, ec.i1_quadrature) < 1e-8);
                CHECK(rel_err(ec.I2, ec.i2_quadrature) < 1e-8);
                // c0 is the full radial mass.
                CHECK(rel_err(ec.c0, measure::radial_mass(n, p, inf)) < 1e-13);
                CHECK(ec.I0 > 0.0);
            }
        }
    }
}

TEST_CASE("expansion coefficients: coarea identity for I0") {
    // I0 = c0 * int_0^{pi/2 - alpha} sin^{n-2} theta dtheta.
    for (int n : {2, 3, 4}) {
        for (double alpha : {0.7, 1.2}) {
            const auto ec = measure::expansion_coefficients({n, 2.0}, alpha);
            const double want =
                ec.c0 * oracle::simpson(
                            [n](double t) {
                                return n == 2 ? 1.0 : std::pow(std::sin(t), n - 2.0);
                            },
                            0.0, pi / 2.0 - alpha, 1e-14);
            CHECK(rel_err(ec.I0, want) < 1e-9);
        }
    }
}

TEST_CASE("expansion coefficients: I2/I0 approaches (n-1) c2/c0") {
    const int n = 3;
    const double p = 2.0;
    double prev_gap = 1e18;
    for (double alpha : {1.40, 1.50, 1.55}) {
        const auto ec = measure::expansion_coefficients({n, p}, alpha);
        const double limit = (n - 1) * ec.c2 / ec.c0;
        const double gap = std::fabs(ec.I2 / ec.I0 - limit);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 0.05);
}
