#pragma once

// Evaluation of mu_p(K) for convex bodies, where mu_p is the normalized
// generalized Gaussian
//
//     dmu_p = C(n,p) exp(-|x|^p / p) dx,
//     C(n,p) = Gamma(n/2) / (2 pi^{n/2} p^{n/p-1} Gamma(n/p)),
//
// so that mu_p(R^n) = 1.  In polar form the measure of a star body reduces
// to a spherical average of the regularized radial mass,
//
//     mu_p(K) = avg_{theta in S^{n-1}} P(n/p, rho_K(theta)^p / p),
//
// with the radial integral evaluated in closed form through the lower
// incomplete gamma (substitution u = r^p / p).  Only the spherical average
// is numerical: exact-panel adaptive quadrature in the angle for n = 2, a
// Gauss-Legendre x trapezoid product rule for n = 3, and seeded Monte
// Carlo for n >= 4.  Deterministic rules carry conservative remainder
// bounds; Monte Carlo carries a 95% confidence half-width.

#include "ggbm/bounds.hpp"
#include "ggbm/geometry.hpp"

#include <cstdint>

namespace ggbm::measure {

enum class SphereRule {
    exact_angle_2d,   // n == 2
    product_gauss_3d, // n == 3
    monte_carlo,      // any n
};

struct QuadratureSpec {
    double radial_tol = 1e-9;     // absolute tolerance of deterministic rules
    int sphere_points = 64;       // product-rule order (n = 3)
    std::int64_t mc_samples = 200000;
    std::uint64_t seed = 1;
    // Rule override; by default chosen from the dimension as above.
    std::optional<SphereRule> rule;

    SphereRule rule_for_dim(int n) const;
};

enum class MeasureKind { deterministic_quadrature, monte_carlo_95ci };

struct MeasureValue {
    double value = 0.0;     // in [0, 1]
    double abs_error = 0.0; // conservative bound resp. 95% CI half-width
    MeasureKind kind = MeasureKind::deterministic_quadrature;
};

// Normalization constant C(n,p) of the density.
double density_constant(int n, double p);

// mu_p mass of the centered ball of radius R (R may be +inf):
//   p^{n/p - 1} gamma(n/p, R^p / p)  -- unnormalized radial integral
//   integral_0^R r^{n-1} e^{-r^p/p} dr.
double radial_mass(int n, double p, double R);

// Normalized form P(n/p, R^p/p) = mu_p(Ball(R)); used as the integrand of
// the spherical average.
double radial_mass_regularized(int n, double p, double R);

// mu_p(body).  Dimension of body must equal params.n.
MeasureValue mu(const geom::Body& body, const bounds::BoundParams& params,
                const QuadratureSpec& spec = {});

// Section kernel H(r, s) = integral_s^inf exp(-(r^2 + t^2)^{p/2} / p) dt,
// by adaptive quadrature on [s, T] plus an analytic tail bound beyond T
// kept below tol/10.
double kernel_H(double r, double s, double p, double tol = 1e-10);

// mu_p of a truncated cone { x_n >= |x'| tan(angle) - drop } inter B(R),
// evaluated in cylindrical coordinates:
//   mu = C(n,p) (n-1) omega_{n-1} int_0^inf r^{n-2} [H(r, s_lo(r)) - H(r, s_hi(r))] dr,
// where s_lo(r) = max(r tan(angle) - drop, -sqrt(R^2-r^2)) and the upper
// cut s_hi(r) = sqrt(R^2 - r^2) restricts the axial integral to the ball
// (absent for R = inf).  This treats the truncation after the conic
// constraint; see the TruncatedCone documentation.
MeasureValue cone_measure(const geom::TruncatedCone& cone,
                          const bounds::BoundParams& params,
                          const QuadratureSpec& spec = {});

// Coefficients of the drop expansion of cone measures at fixed angle:
//   mu_unnorm(drop e) = M + I1 e + (I2/2) e^2 + O(e^3),  M = (n-1) omega_{n-1} I0,
// with the closed forms
//   I1 = c1 cos^{n-1}(a),  I2 = c2 sin(a) cos^{n-1}(a),
//   ck-basis: c0 = p^{n/p-1} Gamma(n/p), c1 = p^{(n-1)/p-1} Gamma((n-1)/p),
//             c2 = p^{(n+p-2)/p-1} Gamma((n+p-2)/p),
// and I0 evaluated by quadrature (it also satisfies the coarea identity
// I0 = c0 int_0^{pi/2-a} sin^{n-2}).  i1_quadrature / i2_quadrature hold
// independent quadrature evaluations of the closed forms' defining
// integrals for cross-validation.
struct ExpansionCoefficients {
    double I0, I1, I2;
    double c0, c1, c2;
    double M; // unnormalized cone mass (n-1) omega_{n-1} I0
    double i1_quadrature, i2_quadrature;
};

ExpansionCoefficients expansion_coefficients(const bounds::BoundParams& params,
                                             double angle, double tol = 1e-11);

// Surface area of S^{n-1} and volume of the unit ball in R^n.
double sphere_surface(int n);
double ball_volume(int n);

} // namespace ggbm::measure
