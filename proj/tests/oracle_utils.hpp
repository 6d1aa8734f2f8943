#pragma once

// Test-side oracles, deliberately independent of the library code paths:
// an adaptive Simpson integrator (the library uses Gauss-Kronrod) and
// reference constants frozen from 50-digit computations with an
// arbitrary-precision library, each cross-checked at generation time
// against direct quadrature of the defining integrals.

#include <cmath>
#include <functional>

namespace oracle {

inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double b, double fa, double fm, double fb, double whole,
                          double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth <= 0 || std::fabs(delta) <= 15.0 * tol) {
        return left + right + delta / 15.0;
    }
    return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

// Adaptive Simpson on [a, b] with absolute tolerance.
inline double simpson(const std::function<double(double)>& f, double a, double b,
                      double tol = 1e-13, int max_depth = 48) {
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Frozen reference values (50-digit precision, truncated to double).
inline constexpr double gamma_0_1 = 0.21938393439552027367716377546012164903; // Gamma(0,1)
inline constexpr double lower_2_2 = 0.29817368116159703717053924968463968804; // (e/2) Gamma(0,1)
inline constexpr double upper_2_2 = 0.36338022763241865692446494650994255186; // 1 - 2/pi
inline constexpr double lower_3_2 = 0.18993054980303831994868786054018916079;
inline constexpr double upper_3_2 = 0.21460183660255169038433915418012427895; // 1 - pi/4
inline constexpr double lower_4_2 = 0.13867138311177741530283834232126006105;
inline constexpr double upper_4_2 = 0.15117363684322487589928659534659006915; // 1 - 8/(3 pi)
inline constexpr double ln_sqrt_pi = 0.57236494292470008707171367567652935582;
inline constexpr double erf_1 = 0.84270079294971486934122063508260925930;
inline constexpr double sqrt_pi_half = 1.25331413731550025120788264240552262650; // sqrt(pi/2)
inline constexpr double e1_2 = 0.048900510708061119567239835228049522314; // Gamma(0,2)
inline constexpr double gamma_m1_2 = 0.018767130910245226379759912258192679389; // Gamma(-1,2)
inline constexpr double lgamma_1e6 = 12815504.569147611659976971785017113154;  // ln Gamma(1e6)
inline constexpr double lgamma_20p5 = 40.831500974530798109776087460766520408; // ln Gamma(20.5)
inline constexpr double lgamma_1em3 = 6.9071788853838536825123446680769825022; // ln Gamma(1e-3)
inline constexpr double lgamma_2p5 = 0.28468287047291915963249466968270192432; // ln Gamma(2.5)

// ln Gamma(s, x) stress table spanning every implementation route,
// including arguments far outside the double range of Gamma(s, x) itself.
struct LogUpperGammaCase {
    double s, x, ln_value;
};
inline constexpr LogUpperGammaCase log_upper_gamma_cases[] = {
    {-0.5, 1.5, -2.67068217448962423579},
    {-1.0, 2.0, -3.975648295142088588714},
    {0.0, 0.3, -0.09907293324693404982813},
    {0.0, 1.0, -1.516931959002045610865},
    {0.25, 0.1, 0.3506643093254320549199},
    {3.5, 0.2, 1.200710128748544983406},
    {50.0, 700.0, -378.92460812372417574101},
    {-3.0, 0.05, 7.81438184367671185498},
    {-7.5, 0.15, 12.04077294054643864039},
    {-0.3, 0.2, 0.4187680691178420655194},
    {1e-3, 0.5, -0.580275866522610533188},
    {-1e-3, 0.5, -0.5801696439821170186498},
    {-199.0, 200.0, -1260.3553728222595738},
    {-500.0, 1e-6, 6901.540669881710874923},
    {-500.0, 0.25, 686.6820715854822271658},
    {-2.0, 1e-4, 17.72733364474159863411},
    {12.5, 30.0, 9.568548876281521866685},
    {0.5, 700.0, -703.27625318219761732417},
    {-89.9, 9.5, -216.4912536977628159973},
    {-49.0, 25.0, -187.0335549512575810299},
    {-0.5, 0.29, 0.1796890453213787554139},
    {5.0, 5.9, 1.969620381327885586521},
};

} // namespace oracle
