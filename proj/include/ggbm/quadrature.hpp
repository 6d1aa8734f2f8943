#pragma once

// Deterministic one-dimensional quadrature utilities shared by the bound
// and measure integrals: an adaptive Gauss-Kronrod (G7,K15) integrator
// with a conservative error estimate, Gauss-Legendre node generation for
// product rules on the sphere, and compensated summation.

#include "ggbm/errors.hpp"

#include <cmath>
#include <cstddef>
#include <queue>
#include <vector>

namespace ggbm::quadrature {

struct QuadResult {
    double value = 0.0;
    double error = 0.0; // conservative absolute error estimate
};

namespace detail {

// Kronrod-15 abscissae on [0,1] (symmetric) and weights; the odd-indexed
// abscissae form the embedded Gauss-7 rule with weights gauss_w.
inline constexpr double kronrod_x[8] = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144838258730, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double kronrod_w[8] = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double gauss_w[4] = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

template <class F>
QuadResult gk15(const F& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    double fk[15];
    for (int i = 0; i < 7; ++i) {
        fk[i] = f(c - h * kronrod_x[i]);
        fk[14 - i] = f(c + h * kronrod_x[i]);
    }
    fk[7] = f(c);
    double resk = 0.0, resg = 0.0;
    for (int i = 0; i < 7; ++i) resk += kronrod_w[i] * (fk[i] + fk[14 - i]);
    resk += kronrod_w[7] * fk[7];
    for (int i = 0; i < 3; ++i) resg += gauss_w[i] * (fk[2 * i + 1] + fk[13 - 2 * i]);
    resg += gauss_w[3] * fk[7];
    QuadResult r;
    r.value = resk * h;
    // Conservative estimate: the raw (K15 - G7) difference.
    r.error = std::fabs(resk - resg) * std::fabs(h);
    return r;
}

struct Interval {
    double a, b, value, error;
    bool operator<(const Interval& o) const { return error < o.error; }
};

} // namespace detail

// Adaptive integration of f over the finite interval [a, b].  Splits the
// worst interval until  sum(err) <= max(abs_tol, rel_tol * |sum(value)|)
// or the interval budget is exhausted (NumericError: the caller receives
// an explicit failure, never an unconverged guess).
template <class F>
QuadResult integrate_adaptive(const F& f, double a, double b, double abs_tol,
                              double rel_tol, std::size_t max_intervals = 20000) {
    QuadResult total;
    if (a == b) return total;
    std::priority_queue<detail::Interval> heap;
    auto first = detail::gk15(f, a, b);
    heap.push({a, b, first.value, first.error});
    double value = first.value, error = first.error;
    while (error > std::max(abs_tol, rel_tol * std::fabs(value))) {
        if (heap.size() >= max_intervals || heap.empty()) {
            throw NumericError("integrate_adaptive: interval budget exhausted before "
                               "reaching the requested tolerance");
        }
        detail::Interval worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (mid <= worst.a || mid >= worst.b) {
            // Interval no longer splittable in double precision: put it
            // back and accept the current estimate as-is.
            heap.push(worst);
            break;
        }
        auto left = detail::gk15(f, worst.a, mid);
        auto right = detail::gk15(f, mid, worst.b);
        value += left.value + right.value - worst.value;
        error += left.error + right.error - worst.error;
        heap.push({worst.a, mid, left.value, left.error});
        heap.push({mid, worst.b, right.value, right.error});
    }
    // Re-accumulate in deterministic (sorted) order for a stable result.
    std::vector<detail::Interval> ivs;
    while (!heap.empty()) { ivs.push_back(heap.top()); heap.pop(); }
    std::sort(ivs.begin(), ivs.end(),
              [](const detail::Interval& l, const detail::Interval& r) { return l.a < r.a; });
    double v = 0.0, comp = 0.0, e = 0.0;
    for (const auto& iv : ivs) {
        double y = iv.value - comp;
        double t = v + y;
        comp = (t - v) - y;
        v = t;
        e += iv.error;
    }
    return {v, e};
}

// Adaptive integration over [a, b] with interior breakpoints at which the
// integrand may lose smoothness; each smooth panel is integrated
// separately.  `points` need not be sorted or lie inside [a, b].
template <class F>
QuadResult integrate_adaptive_pts(const F& f, double a, double b,
                                  std::vector<double> points, double abs_tol,
                                  double rel_tol, std::size_t max_intervals = 20000) {
    points.push_back(a);
    points.push_back(b);
    std::sort(points.begin(), points.end());
    QuadResult total;
    std::size_t panels = 0;
    for (std::size_t i = 0; i + 1 < points.size(); ++i) {
        double lo = std::max(a, points[i]);
        double hi = std::min(b, points[i + 1]);
        if (hi <= lo) continue;
        ++panels;
        (void)panels;
        auto r = integrate_adaptive(f, lo, hi, abs_tol, rel_tol, max_intervals);
        total.value += r.value;
        total.error += r.error;
    }
    return total;
}

// Gauss-Legendre nodes and weights on [-1, 1], computed by Newton
// iteration on the Legendre recurrence and cached per order.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;
};
const GaussLegendre& gauss_legendre(int order);

// Compensated (Kahan) accumulator for order-independent reductions.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;
    void add(double x) {
        double y = x - comp;
        double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
    }
};

} // namespace ggbm::quadrature
