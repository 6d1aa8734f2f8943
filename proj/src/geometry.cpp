#include "ggbm/geometry.hpp"

#include "ggbm/errors.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace ggbm::geom {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

double sq(double x) { return x * x; }

// ---------------------------------------------------------------------------
// Polygon helpers
// ---------------------------------------------------------------------------

// Outward normals / offsets of a CCW polygon; throws if the vertex list is
// not convex-CCW or the origin is outside.
void polygon_derive(Polygon2D& poly) {
    const auto& v = poly.vertices;
    const std::size_t k = v.size();
    if (k < 3) throw std::invalid_argument("polygon: needs at least 3 vertices");
    double scale = 0.0;
    for (const auto& p : v) scale = std::max({scale, std::fabs(p.x()), std::fabs(p.y())});
    if (!(scale > 0.0) || !std::isfinite(scale)) {
        throw std::invalid_argument("polygon: vertices must be finite and not all zero");
    }
    const double tol = 1e-12 * scale * scale;
    poly.normals.clear();
    poly.offsets.clear();
    poly.normals.reserve(k);
    poly.offsets.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        const Eigen::Vector2d e = v[(i + 1) % k] - v[i];
        if (e.norm() <= 1e-14 * scale) {
            throw std::invalid_argument("polygon: repeated vertex");
        }
        // CCW convexity: every other vertex lies on the left of edge i.
        for (std::size_t j = 0; j < k; ++j) {
            const Eigen::Vector2d w = v[j] - v[i];
            if (e.x() * w.y() - e.y() * w.x() < -tol) {
                throw std::invalid_argument("polygon: vertices are not convex CCW");
            }
        }
        const Eigen::Vector2d nrm = Eigen::Vector2d(e.y(), -e.x()).normalized();
        const double off = nrm.dot(v[i]);
        if (off < -1e-12 * scale) {
            throw std::invalid_argument("polygon: origin lies outside");
        }
        poly.normals.push_back(nrm);
        poly.offsets.push_back(std::max(0.0, off));
    }
}

// Radial function of a halfspace intersection: min over active rows of
// c_i / <n_i, theta>, +inf when no row bounds the ray.
template <typename RowDot>
double radial_halfspaces(std::size_t rows, const RowDot& dot_and_offset) {
    double r = inf;
    for (std::size_t i = 0; i < rows; ++i) {
        const auto [d, c] = dot_and_offset(i);
        if (d > 0.0) r = std::min(r, c / d);
    }
    return r;
}

// Vertices of a bounded 2-D halfspace intersection (pairwise row
// intersections filtered by feasibility).  Throws if the region is
// unbounded or empty.
std::vector<Eigen::Vector2d> hpolytope_vertices_2d(const HPolytope& hp) {
    const Eigen::Index m = hp.A.rows();
    // Bounded iff the outward normals positively span the plane: sorted
    // normal angles must have every gap < pi.
    std::vector<double> angles;
    angles.reserve(static_cast<std::size_t>(m));
    for (Eigen::Index i = 0; i < m; ++i) {
        angles.push_back(std::atan2(hp.A(i, 1), hp.A(i, 0)));
    }
    std::sort(angles.begin(), angles.end());
    double max_gap = 2.0 * std::numbers::pi - (angles.back() - angles.front());
    for (std::size_t i = 1; i < angles.size(); ++i) {
        max_gap = std::max(max_gap, angles[i] - angles[i - 1]);
    }
    if (max_gap >= std::numbers::pi - 1e-12) {
        throw NumericError("hpolytope: 2-D region is unbounded; no vertex enumeration");
    }
    double bscale = 1.0;
    for (Eigen::Index i = 0; i < m; ++i) bscale = std::max(bscale, std::fabs(hp.b(i)));
    std::vector<Eigen::Vector2d> verts;
    for (Eigen::Index i = 0; i < m; ++i) {
        for (Eigen::Index j = i + 1; j < m; ++j) {
            Eigen::Matrix2d M;
            M.row(0) = hp.A.row(i);
            M.row(1) = hp.A.row(j);
            const double det = M.determinant();
            if (std::fabs(det) < 1e-14 * hp.A.row(i).norm() * hp.A.row(j).norm()) continue;
            const Eigen::Vector2d x = M.inverse() * Eigen::Vector2d(hp.b(i), hp.b(j));
            bool feasible = true;
            for (Eigen::Index r = 0; r < m && feasible; ++r) {
                feasible = hp.A.row(r).dot(x) <= hp.b(r) + 1e-9 * bscale;
            }
            if (feasible) verts.push_back(x);
        }
    }
    if (verts.empty()) throw NumericError("hpolytope: vertex enumeration found no vertices");
    return verts;
}

// ---------------------------------------------------------------------------
// Truncated cone helpers
// ---------------------------------------------------------------------------

// Split x into (|x'|, x_n).
std::pair<double, double> cone_coords(const Eigen::VectorXd& x) {
    const Eigen::Index n = x.size();
    const double xn = x(n - 1);
    const double r = x.head(n - 1).norm();
    return {r, xn};
}

// Projection of (r, t) onto the planar cone { t >= k r, r >= 0 }, k > 0.
std::pair<double, double> project_cone_2d(double r, double t, double k) {
    if (t >= k * r) return {r, t};
    if (r + k * t <= 0.0) return {0.0, 0.0};
    const double c = (r + k * t) / (1.0 + k * k);
    return {c, k * c};
}

} // namespace

// ---------------------------------------------------------------------------
// Direction
// ---------------------------------------------------------------------------

Direction::Direction(Eigen::VectorXd v) : u_(std::move(v)) {
    const double norm = u_.norm();
    if (!(norm > 0.0) || !std::isfinite(norm)) {
        throw std::invalid_argument("Direction: vector must be nonzero and finite");
    }
    u_ /= norm;
}

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

Body Body::ball(int dim, double radius) {
    if (dim < 2) throw std::invalid_argument("ball: dimension must be >= 2");
    if (!(radius > 0.0)) throw std::invalid_argument("ball: radius must be > 0");
    return Body(Ball{radius}, dim);
}

Body Body::hpolytope(Eigen::MatrixXd A, Eigen::VectorXd b) {
    if (A.rows() != b.size() || A.rows() == 0) {
        throw std::invalid_argument("hpolytope: A and b must have matching nonzero rows");
    }
    if (A.cols() < 2) throw std::invalid_argument("hpolytope: dimension must be >= 2");
    for (Eigen::Index i = 0; i < A.rows(); ++i) {
        if (A.row(i).norm() == 0.0) {
            throw std::invalid_argument("hpolytope: zero row in A");
        }
        if (!(b(i) >= 0.0)) {
            throw std::invalid_argument("hpolytope: b must be >= 0 (origin feasible)");
        }
    }
    const int dim = static_cast<int>(A.cols());
    return Body(HPolytope{std::move(A), std::move(b)}, dim);
}

Body Body::polygon(std::vector<Eigen::Vector2d> ccw_vertices) {
    Polygon2D poly;
    poly.vertices = std::move(ccw_vertices);
    polygon_derive(poly);
    return Body(std::move(poly), 2);
}

Body Body::cone(int dim, double angle, double drop, double radius) {
    if (dim < 2) throw std::invalid_argument("cone: dimension must be >= 2");
    if (!(angle > 0.0 && angle < std::numbers::pi / 2.0)) {
        throw std::invalid_argument("cone: angle must lie in (0, pi/2)");
    }
    if (!(drop >= 0.0)) throw std::invalid_argument("cone: drop must be >= 0");
    if (!(radius > 0.0)) throw std::invalid_argument("cone: radius must be > 0");
    return Body(TruncatedCone{dim, angle, drop, radius}, dim);
}

Body Body::combination(double lambda, Body left, Body right) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("combination: lambda must lie in [0, 1]");
    }
    if (left.dim() != right.dim()) {
        throw std::invalid_argument("combination: dimension mismatch");
    }
    const int dim = left.dim();
    return Body(Combination{lambda, std::make_shared<const Body>(std::move(left)),
                            std::make_shared<const Body>(std::move(right))},
                dim);
}

std::string Body::describe() const {
    std::ostringstream os;
    std::visit(
        [&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Ball>) {
                os << "ball(dim=" << dim_ << ", R=" << r.radius << ")";
            } else if constexpr (std::is_same_v<T, HPolytope>) {
                os << "hpolytope(dim=" << dim_ << ", rows=" << r.A.rows() << ")";
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                os << "polygon2d(k=" << r.vertices.size() << ")";
            } else if constexpr (std::is_same_v<T, TruncatedCone>) {
                os << "cone(dim=" << r.dim << ", angle=" << r.angle << ", drop=" << r.drop
                   << ", R=" << r.radius << ")";
            } else {
                os << "combination(lambda=" << r.lambda << ", " << r.left->describe()
                   << ", " << r.right->describe() << ")";
            }
        },
        repr_);
    return os.str();
}

std::optional<double> Body::circumradius_bound() const {
    return std::visit(
        [&](const auto& r) -> std::optional<double> {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Ball>) {
                if (std::isinf(r.radius)) return std::nullopt;
                return r.radius;
            } else if constexpr (std::is_same_v<T, HPolytope>) {
                if (dim_ != 2) return std::nullopt;
                try {
                    double m = 0.0;
                    for (const auto& v : hpolytope_vertices_2d(r)) m = std::max(m, v.norm());
                    return m;
                } catch (const NumericError&) {
                    return std::nullopt;
                }
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                double m = 0.0;
                for (const auto& v : r.vertices) m = std::max(m, v.norm());
                return m;
            } else if constexpr (std::is_same_v<T, TruncatedCone>) {
                if (std::isinf(r.radius)) return std::nullopt;
                return r.radius;
            } else {
                const auto cl = r.left->circumradius_bound();
                const auto cr = r.right->circumradius_bound();
                if (!cl || !cr) return std::nullopt;
                return r.lambda * *cl + (1.0 - r.lambda) * *cr;
            }
        },
        repr_);
}

std::vector<double> Body::angular_breakpoints() const {
    if (dim_ != 2) return {};
    std::vector<double> out;
    std::visit(
        [&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, HPolytope>) {
                try {
                    for (const auto& v : hpolytope_vertices_2d(r)) {
                        out.push_back(std::atan2(v.y(), v.x()));
                    }
                } catch (const NumericError&) {
                }
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                for (const auto& v : r.vertices) {
                    if (v.norm() > 0.0) out.push_back(std::atan2(v.y(), v.x()));
                }
            } else if constexpr (std::is_same_v<T, TruncatedCone>) {
                const double a = r.angle;
                out.insert(out.end(), {a, std::numbers::pi - a, -std::numbers::pi / 2.0});
                // Directions where the lateral face meets the spherical cap:
                // sec(a) cos(phi + pi/2 - a) = drop / R on the cos phi >= 0
                // side, mirrored across the vertical axis.
                if (std::isfinite(r.radius) && r.drop > 0.0) {
                    const double c = r.drop * std::cos(a) / r.radius;
                    if (c < 1.0) {
                        const double shift = std::numbers::pi / 2.0 - a;
                        for (double s : {std::acos(c), -std::acos(c)}) {
                            const double phi = s - shift;
                            if (std::cos(phi) >= 0.0) {
                                out.push_back(phi);
                                out.push_back(std::numbers::pi - phi);
                            }
                        }
                    }
                }
            } else if constexpr (std::is_same_v<T, Combination>) {
                auto l = r.left->angular_breakpoints();
                auto rr = r.right->angular_breakpoints();
                out.insert(out.end(), l.begin(), l.end());
                out.insert(out.end(), rr.begin(), rr.end());
            }
        },
        repr_);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(),
                          [](double a, double b) { return std::fabs(a - b) < 1e-13; }),
              out.end());
    return out;
}

// ---------------------------------------------------------------------------
// Radial function
// ---------------------------------------------------------------------------

namespace {

double radial_impl(const Body& body, const Eigen::VectorXd& u);

double radial_combination(const Combination& c, const Body& body, const Eigen::VectorXd& u) {
    const double rl = radial_impl(*c.left, u);
    const double rr = radial_impl(*c.right, u);
    if (std::isinf(rl) || std::isinf(rr)) {
        throw NumericError("radial: combination of unbounded radial directions");
    }
    // The star sum l rho_K + (1-l) rho_L is always a lower bound for the
    // combination's radial function; the circumradius sum bounds it above.
    const double lo0 = c.lambda * rl + (1.0 - c.lambda) * rr;
    double hi = lo0;
    const auto cb = body.circumradius_bound();
    if (cb) {
        hi = *cb * (1.0 + 1e-12) + 1e-12;
    } else {
        // Unbounded operands: grow until the ray exits (cap guards cones
        // whose combination is unbounded along u).
        hi = std::max(1.0, 2.0 * lo0);
        int grow = 0;
        while (membership(body, hi * u)) {
            hi *= 2.0;
            if (++grow > 60) {
                throw NumericError("radial: combination appears unbounded along direction");
            }
        }
    }
    double lo = lo0;
    if (!membership(body, hi * u)) {
        const double tol = 1e-10 * std::max(1.0, hi);
        while (hi - lo > tol) {
            const double mid = 0.5 * (lo + hi);
            (membership(body, mid * u) ? lo : hi) = mid;
        }
    } else {
        lo = hi; // boundary sits at the circumradius bound itself
    }
    return 0.5 * (lo + hi);
}

double radial_impl(const Body& body, const Eigen::VectorXd& u) {
    return std::visit(
        [&](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return r.radius;
            } else if constexpr (std::is_same_v<T, HPolytope>) {
                return radial_halfspaces(static_cast<std::size_t>(r.A.rows()),
                                         [&](std::size_t i) {
                                             const auto idx = static_cast<Eigen::Index>(i);
                                             return std::pair<double, double>(
                                                 r.A.row(idx).dot(u), r.b(idx));
                                         });
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                const Eigen::Vector2d u2(u(0), u(1));
                return radial_halfspaces(r.normals.size(), [&](std::size_t i) {
                    return std::pair<double, double>(r.normals[i].dot(u2), r.offsets[i]);
                });
            } else if constexpr (std::is_same_v<T, TruncatedCone>) {
                const auto [ur, un] = cone_coords(u);
                const double g = un - ur * std::tan(r.angle);
                double rho = r.radius;
                if (g < 0.0) rho = std::min(rho, r.drop / (-g));
                return rho;
            } else {
                return radial_combination(r, body, u);
            }
        },
        body.repr());
}

} // namespace

double radial(const Body& body, const Direction& theta) {
    if (theta.dim() != body.dim()) {
        throw std::invalid_argument("radial: direction dimension mismatch");
    }
    return radial_impl(body, theta.unit());
}

// ---------------------------------------------------------------------------
// Membership
// ---------------------------------------------------------------------------

namespace {

bool membership_base(const Body& body, const Eigen::VectorXd& x) {
    return std::visit(
        [&](const auto& r) -> bool {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return x.norm() <= r.radius * (1.0 + 1e-14);
            } else if constexpr (std::is_same_v<T, HPolytope>) {
                for (Eigen::Index i = 0; i < r.A.rows(); ++i) {
                    if (r.A.row(i).dot(x) > r.b(i) + 1e-12 * std::max(1.0, std::fabs(r.b(i)))) {
                        return false;
                    }
                }
                return true;
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                const Eigen::Vector2d x2(x(0), x(1));
                for (std::size_t i = 0; i < r.normals.size(); ++i) {
                    if (r.normals[i].dot(x2) >
                        r.offsets[i] + 1e-12 * std::max(1.0, r.offsets[i])) {
                        return false;
                    }
                }
                return true;
            } else if constexpr (std::is_same_v<T, TruncatedCone>) {
                const auto [xr, xn] = cone_coords(x);
                const double slack = 1e-12 * std::max(1.0, xr + std::fabs(xn));
                return xn >= xr * std::tan(r.angle) - r.drop - slack &&
                       x.norm() <= r.radius * (1.0 + 1e-14);
            } else {
                (void)r;
                throw std::logic_error("membership_base: combination not handled here");
            }
        },
        body.repr());
}

// Halfspace rows <a_i, y> <= c_i for lambda * (body in halfspace form).
void collect_scaled_halfspaces(const Body& body, double lam,
                               std::vector<Eigen::VectorXd>& a, std::vector<double>& c) {
    std::visit(
        [&](const auto& r) {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, HPolytope>) {
                for (Eigen::Index i = 0; i < r.A.rows(); ++i) {
                    a.push_back(r.A.row(i).transpose());
                    c.push_back(lam * r.b(i));
                }
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                for (std::size_t i = 0; i < r.normals.size(); ++i) {
                    Eigen::VectorXd row(2);
                    row << r.normals[i].x(), r.normals[i].y();
                    a.push_back(std::move(row));
                    c.push_back(lam * r.offsets[i]);
                }
            } else {
                throw std::invalid_argument(
                    "membership: combination operand lacks halfspace form: " +
                    body.describe());
            }
        },
        body.repr());
}

// Support function of lambda * body in direction w, for operands with an
// exact support (vertex enumeration in 2-D, trivial for balls).
double support_scaled(const Body& body, double lam, const Eigen::VectorXd& w) {
    return std::visit(
        [&](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return lam * r.radius * w.norm();
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                const Eigen::Vector2d w2(w(0), w(1));
                double s = -inf;
                for (const auto& v : r.vertices) s = std::max(s, v.dot(w2));
                return lam * s;
            } else if constexpr (std::is_same_v<T, HPolytope>) {
                double s = -inf;
                for (const auto& v : hpolytope_vertices_2d(r)) {
                    s = std::max(s, v.dot(Eigen::Vector2d(w(0), w(1))));
                }
                return lam * s;
            } else {
                throw std::invalid_argument("support: unsupported body variant");
            }
        },
        body.repr());
}

// Exact 2-D decision for x in l K + (1-l) L: every edge of a planar
// Minkowski sum is a translate of an operand edge, so the sum's facet
// normals are contained in the union of the operands' edge normals, and
// the support inequality over that finite set is necessary and sufficient.
bool membership_sum_2d_exact(const Combination& c, const Eigen::VectorXd& x,
                             const std::vector<Eigen::VectorXd>& left_normals,
                             double thresh) {
    for (const auto& w : left_normals) {
        const double support = support_scaled(*c.left, c.lambda, w) +
                               support_scaled(*c.right, 1.0 - c.lambda, w);
        if (w.dot(x) > support + thresh) return false;
    }
    return true;
}

// Decide whether x belongs to l K + (1-l) L when both operands are in
// halfspace form.  The witness set { y : y in l K, x - y in (1-l) L } is a
// polyhedron; run the simultaneous-projection (averaged halfspace
// projection) iteration.  Feasibility certificate: all violations below
// threshold.  Infeasibility certificate at a stall: in 2-D the exact facet
// normal test above; otherwise the Farkas combination of the stalled
// violations (sum v_i a_i / |a_i| vanishes while the violations persist).
bool membership_halfspace_pair(const Combination& c, const Eigen::VectorXd& x) {
    std::vector<Eigen::VectorXd> a;
    std::vector<double> off;
    collect_scaled_halfspaces(*c.left, c.lambda, a, off);
    const std::size_t rows_left = a.size();
    // x - y in (1-l) L  <=>  -A_L y <= (1-l) b_L - A_L x.
    collect_scaled_halfspaces(*c.right, 1.0 - c.lambda, a, off);
    const std::size_t m = a.size();
    for (std::size_t i = rows_left; i < m; ++i) {
        off[i] -= a[i].dot(x);
        a[i] = -a[i];
    }
    double scale = std::max(1.0, x.norm());
    for (double o : off) scale = std::max(scale, std::fabs(o));
    const double thresh = 1e-12 * scale;

    Eigen::VectorXd y = 0.5 * x; // start between the operands
    Eigen::VectorXd step(y.size());
    std::vector<double> viol(m);
    constexpr int cap = 100000;
    bool stalled = false;
    for (int it = 0; it < cap; ++it) {
        step.setZero();
        double worst = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            const double an = a[i].norm();
            const double v = std::max(0.0, a[i].dot(y) - off[i]) / an;
            viol[i] = v;
            worst = std::max(worst, v);
            if (v > 0.0) step -= (v / an) * a[i];
        }
        if (worst <= thresh) return true;
        step /= static_cast<double>(m);
        y += 1.9 * step; // relaxed simultaneous projection
        if (step.norm() < 1e-16 * scale) {
            stalled = true;
            break;
        }
    }
    if (x.size() == 2) {
        // Exact resolution from the operand edge normals (sound both ways).
        std::vector<Eigen::VectorXd> normals;
        std::vector<double> unused;
        collect_scaled_halfspaces(*c.left, 1.0, normals, unused);
        collect_scaled_halfspaces(*c.right, 1.0, normals, unused);
        for (auto& w : normals) w.normalize();
        return membership_sum_2d_exact(c, x, normals, thresh);
    }
    if (stalled) {
        // Stalled at a positive-violation minimizer: the Farkas combination
        // sum v_i a_i / |a_i| ~ 0 with persisting violations certifies
        // infeasibility.
        Eigen::VectorXd w = Eigen::VectorXd::Zero(y.size());
        double value = 0.0;
        for (std::size_t i = 0; i < m; ++i) {
            if (viol[i] > 0.0) {
                w += (viol[i] / a[i].norm()) * a[i];
                value += viol[i] * viol[i];
            }
        }
        if (w.norm() <= 1e-6 * std::sqrt(value) || value > sq(1e3 * thresh)) {
            return false;
        }
    }
    throw NumericError("membership: simultaneous projection hit the iteration cap");
}

bool membership_combination(const Combination& c, const Eigen::VectorXd& x) {
    const Body& K = *c.left;
    const Body& L = *c.right;
    if (c.lambda == 0.0) return membership(L, x);
    if (c.lambda == 1.0) return membership(K, x);
    // Ball operand: x in l K + (1-l) B(R)  <=>  dist(x, l K) <= (1-l) R.
    if (const auto* bl = std::get_if<Ball>(&K.repr())) {
        const double rest = c.lambda * bl->radius;
        return distance(x, scale(L, 1.0 - c.lambda)) <= rest * (1.0 + 1e-12) + 1e-14;
    }
    if (const auto* br = std::get_if<Ball>(&L.repr())) {
        const double rest = (1.0 - c.lambda) * br->radius;
        return distance(x, scale(K, c.lambda)) <= rest * (1.0 + 1e-12) + 1e-14;
    }
    // Same-shape cones collapse exactly.
    const auto* ck = std::get_if<TruncatedCone>(&K.repr());
    const auto* cl = std::get_if<TruncatedCone>(&L.repr());
    if (ck && cl && ck->angle == cl->angle && ck->radius == cl->radius) {
        const Body merged = Body::cone(ck->dim, ck->angle,
                                       c.lambda * ck->drop + (1.0 - c.lambda) * cl->drop,
                                       ck->radius);
        return membership(merged, x);
    }
    const bool left_hs = std::holds_alternative<HPolytope>(K.repr()) ||
                         std::holds_alternative<Polygon2D>(K.repr());
    const bool right_hs = std::holds_alternative<HPolytope>(L.repr()) ||
                          std::holds_alternative<Polygon2D>(L.repr());
    if (left_hs && right_hs) return membership_halfspace_pair(c, x);
    throw std::invalid_argument("membership: unsupported combination of " + K.describe() +
                                " and " + L.describe());
}

} // namespace

bool membership(const Body& body, const Eigen::VectorXd& x) {
    if (x.size() != body.dim()) {
        throw std::invalid_argument("membership: point dimension mismatch");
    }
    if (const auto* c = std::get_if<Combination>(&body.repr())) {
        return membership_combination(*c, x);
    }
    return membership_base(body, x);
}

// ---------------------------------------------------------------------------
// Distance
// ---------------------------------------------------------------------------

namespace {

double distance_polygon(const Eigen::Vector2d& x, const Polygon2D& poly) {
    bool inside = true;
    for (std::size_t i = 0; i < poly.normals.size() && inside; ++i) {
        inside = poly.normals[i].dot(x) <= poly.offsets[i];
    }
    if (inside) return 0.0;
    double best = inf;
    const std::size_t k = poly.vertices.size();
    for (std::size_t i = 0; i < k; ++i) {
        const Eigen::Vector2d& a = poly.vertices[i];
        const Eigen::Vector2d& b = poly.vertices[(i + 1) % k];
        const Eigen::Vector2d e = b - a;
        const double t = std::clamp(e.dot(x - a) / e.squaredNorm(), 0.0, 1.0);
        best = std::min(best, (x - (a + t * e)).norm());
    }
    return best;
}

// Dykstra alternating projection onto an intersection of convex sets with
// closed-form projectors; returns the projection of x.
template <typename Proj1, typename Proj2>
Eigen::VectorXd dykstra(const Eigen::VectorXd& x, const Proj1& P1, const Proj2& P2,
                        double tol) {
    Eigen::VectorXd y = x;
    Eigen::VectorXd p = Eigen::VectorXd::Zero(x.size());
    Eigen::VectorXd q = Eigen::VectorXd::Zero(x.size());
    Eigen::VectorXd prev = y;
    for (int it = 0; it < 20000; ++it) {
        const Eigen::VectorXd y1 = P1(y + p);
        p = y + p - y1;
        y = P2(y1 + q);
        q = y1 + q - y;
        if (it % 8 == 7) {
            if ((y - prev).norm() < tol && (y1 - y).norm() < 10.0 * tol) return y;
            prev = y;
        }
    }
    throw NumericError("distance: Dykstra projection did not converge");
}

double distance_hpolytope(const Eigen::VectorXd& x, const HPolytope& hp) {
    bool inside = true;
    for (Eigen::Index i = 0; i < hp.A.rows() && inside; ++i) {
        inside = hp.A.row(i).dot(x) <= hp.b(i) + 1e-14 * std::max(1.0, std::fabs(hp.b(i)));
    }
    if (inside) return 0.0;
    if (hp.A.cols() == 2) {
        // Exact in 2-D: project onto each face segment / vertex.
        const auto verts = hpolytope_vertices_2d(hp);
        Polygon2D poly;
        // Order vertices CCW around their centroid to reuse the polygon path.
        Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
        for (const auto& v : verts) centroid += v;
        centroid /= static_cast<double>(verts.size());
        std::vector<Eigen::Vector2d> sorted = verts;
        std::sort(sorted.begin(), sorted.end(),
                  [&](const Eigen::Vector2d& a, const Eigen::Vector2d& b) {
                      return std::atan2(a.y() - centroid.y(), a.x() - centroid.x()) <
                             std::atan2(b.y() - centroid.y(), b.x() - centroid.x());
                  });
        double best = inf;
        const std::size_t k = sorted.size();
        const Eigen::Vector2d x2(x(0), x(1));
        for (std::size_t i = 0; i < k; ++i) {
            const Eigen::Vector2d& a = sorted[i];
            const Eigen::Vector2d& b = sorted[(i + 1) % k];
            const Eigen::Vector2d e = b - a;
            const double denom = e.squaredNorm();
            const double t =
                denom > 0.0 ? std::clamp(e.dot(x2 - a) / denom, 0.0, 1.0) : 0.0;
            best = std::min(best, (x2 - (a + t * e)).norm());
        }
        return best;
    }
    // General dimension: cyclic Dykstra over the halfspaces.
    Eigen::VectorXd y = x;
    std::vector<Eigen::VectorXd> corr(static_cast<std::size_t>(hp.A.rows()),
                                      Eigen::VectorXd::Zero(x.size()));
    const double tol = 1e-12 * std::max(1.0, x.norm());
    Eigen::VectorXd prev = y;
    for (int sweep = 0; sweep < 20000; ++sweep) {
        for (Eigen::Index i = 0; i < hp.A.rows(); ++i) {
            const Eigen::VectorXd z = y + corr[static_cast<std::size_t>(i)];
            const Eigen::VectorXd row = hp.A.row(i).transpose();
            const double excess = row.dot(z) - hp.b(i);
            const Eigen::VectorXd proj =
                excess > 0.0 ? (z - (excess / row.squaredNorm()) * row).eval() : z;
            corr[static_cast<std::size_t>(i)] = z - proj;
            y = proj;
        }
        if ((y - prev).norm() < tol) break;
        prev = y;
        if (sweep == 19999) {
            throw NumericError("distance: halfspace Dykstra did not converge");
        }
    }
    return (x - y).norm();
}

double distance_cone(const Eigen::VectorXd& x, const TruncatedCone& cone) {
    const double k = std::tan(cone.angle);
    // Work in the (x', x_n + drop) frame where the lateral constraint is a
    // standard second-order cone; the ball constraint stays centered at the
    // origin of the original frame.
    const Eigen::Index n = x.size();
    auto proj_soc = [&](const Eigen::VectorXd& z) {
        Eigen::VectorXd out = z;
        const double zn = z(n - 1) + cone.drop;
        const double zr = z.head(n - 1).norm();
        const auto [pr, pt] = project_cone_2d(zr, zn, k);
        out(n - 1) = pt - cone.drop;
        if (zr > 0.0) {
            out.head(n - 1) = z.head(n - 1) * (pr / zr);
        } else {
            out.head(n - 1).setZero();
        }
        return out;
    };
    auto proj_ball = [&](const Eigen::VectorXd& z) {
        const double nz = z.norm();
        if (nz <= cone.radius) return z;
        return Eigen::VectorXd((cone.radius / nz) * z);
    };
    if (std::isinf(cone.radius)) {
        return (x - proj_soc(x)).norm();
    }
    const double tol = 1e-13 * std::max(1.0, x.norm());
    const Eigen::VectorXd y = dykstra(x, proj_soc, proj_ball, tol);
    return (x - y).norm();
}

} // namespace

double distance(const Eigen::VectorXd& x, const Body& body) {
    if (x.size() != body.dim()) {
        throw std::invalid_argument("distance: point dimension mismatch");
    }
    return std::visit(
        [&](const auto& r) -> double {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return std::max(0.0, x.norm() - r.radius);
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                return distance_polygon(Eigen::Vector2d(x(0), x(1)), r);
            } else if constexpr (std::is_same_v<T, HPolytope>) {
                return distance_hpolytope(x, r);
            } else if constexpr (std::is_same_v<T, TruncatedCone>) {
                return distance_cone(x, r);
            } else {
                throw std::invalid_argument("distance: unsupported for combinations");
            }
        },
        body.repr());
}

// ---------------------------------------------------------------------------
// Combination / scaling
// ---------------------------------------------------------------------------

Body scale(const Body& body, double c) {
    if (!(c > 0.0) || !std::isfinite(c)) {
        throw std::invalid_argument("scale: factor must be positive and finite");
    }
    return std::visit(
        [&](const auto& r) -> Body {
            using T = std::decay_t<decltype(r)>;
            if constexpr (std::is_same_v<T, Ball>) {
                return Body::ball(body.dim(), r.radius * c);
            } else if constexpr (std::is_same_v<T, HPolytope>) {
                return Body::hpolytope(r.A, r.b * c);
            } else if constexpr (std::is_same_v<T, Polygon2D>) {
                std::vector<Eigen::Vector2d> v = r.vertices;
                for (auto& p : v) p *= c;
                return Body::polygon(std::move(v));
            } else if constexpr (std::is_same_v<T, TruncatedCone>) {
                return Body::cone(r.dim, r.angle, r.drop * c, r.radius * c);
            } else {
                return Body::combination(r.lambda, scale(*r.left, c), scale(*r.right, c));
            }
        },
        body.repr());
}

Body combine(double lambda, const Body& K, const Body& L) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("combine: lambda must lie in [0, 1]");
    }
    if (K.dim() != L.dim()) throw std::invalid_argument("combine: dimension mismatch");
    if (lambda == 0.0) return L;
    if (lambda == 1.0) return K;
    const auto* bk = std::get_if<Ball>(&K.repr());
    const auto* bl = std::get_if<Ball>(&L.repr());
    if (bk && bl) {
        return Body::ball(K.dim(), lambda * bk->radius + (1.0 - lambda) * bl->radius);
    }
    const auto* ck = std::get_if<TruncatedCone>(&K.repr());
    const auto* cl = std::get_if<TruncatedCone>(&L.repr());
    if (ck && cl && ck->angle == cl->angle && ck->radius == cl->radius) {
        // Equal-shape cones: combining the untruncated cones gives the same
        // lateral face with the averaged drop; the shared truncation radius
        // is reapplied afterwards.
        return Body::cone(ck->dim, ck->angle,
                          lambda * ck->drop + (1.0 - lambda) * cl->drop, ck->radius);
    }
    return Body::combination(lambda, K, L);
}

Body polygon_minkowski(double lambda, const Body& P, const Body& Q) {
    if (!(lambda >= 0.0 && lambda <= 1.0)) {
        throw std::invalid_argument("polygon_minkowski: lambda must lie in [0, 1]");
    }
    const auto* p = std::get_if<Polygon2D>(&P.repr());
    const auto* q = std::get_if<Polygon2D>(&Q.repr());
    if (!p || !q) {
        throw std::invalid_argument("polygon_minkowski: both operands must be polygons");
    }
    if (lambda == 0.0) return Q;
    if (lambda == 1.0) return P;

    auto scaled = [](const Polygon2D& poly, double c) {
        std::vector<Eigen::Vector2d> v = poly.vertices;
        for (auto& pt : v) pt *= c;
        return v;
    };
    const std::vector<Eigen::Vector2d> a = scaled(*p, lambda);
    const std::vector<Eigen::Vector2d> b = scaled(*q, 1.0 - lambda);

    // Rotate each vertex list to start at the lowest (then leftmost)
    // vertex; CCW edge angles are then increasing over [0, 2 pi).
    auto start_index = [](const std::vector<Eigen::Vector2d>& v) {
        std::size_t s = 0;
        for (std::size_t i = 1; i < v.size(); ++i) {
            if (v[i].y() < v[s].y() - 1e-15 ||
                (std::fabs(v[i].y() - v[s].y()) <= 1e-15 && v[i].x() < v[s].x())) {
                s = i;
            }
        }
        return s;
    };
    auto edge_angle = [](const Eigen::Vector2d& e) {
        double ang = std::atan2(e.y(), e.x());
        if (ang < 0.0) ang += 2.0 * std::numbers::pi;
        return ang;
    };

    const std::size_t ka = a.size(), kb = b.size();
    const std::size_t sa = start_index(a), sb = start_index(b);
    std::vector<Eigen::Vector2d> sum;
    sum.reserve(ka + kb);
    Eigen::Vector2d cur = a[sa] + b[sb];
    std::size_t i = 0, j = 0;
    while (i < ka || j < kb) {
        sum.push_back(cur);
        if (i < ka && j < kb) {
            const Eigen::Vector2d ea = a[(sa + i + 1) % ka] - a[(sa + i) % ka];
            const Eigen::Vector2d eb = b[(sb + j + 1) % kb] - b[(sb + j) % kb];
            const double da = edge_angle(ea), db = edge_angle(eb);
            if (std::fabs(da - db) < 1e-13) {
                cur += ea + eb;
                ++i;
                ++j;
            } else if (da < db) {
                cur += ea;
                ++i;
            } else {
                cur += eb;
                ++j;
            }
        } else if (i < ka) {
            cur += a[(sa + i + 1) % ka] - a[(sa + i) % ka];
            ++i;
        } else {
            cur += b[(sb + j + 1) % kb] - b[(sb + j) % kb];
            ++j;
        }
    }

    // Merge collinear consecutive edges.
    double scale_len = 0.0;
    for (const auto& v : sum) scale_len = std::max({scale_len, std::fabs(v.x()), std::fabs(v.y())});
    const double tol = 1e-12 * scale_len * scale_len;
    std::vector<Eigen::Vector2d> cleaned;
    const std::size_t k = sum.size();
    for (std::size_t t = 0; t < k; ++t) {
        const Eigen::Vector2d& prev = sum[(t + k - 1) % k];
        const Eigen::Vector2d& here = sum[t];
        const Eigen::Vector2d& next = sum[(t + 1) % k];
        const Eigen::Vector2d e1 = here - prev;
        const Eigen::Vector2d e2 = next - here;
        if (e2.norm() <= 1e-14 * std::max(1.0, scale_len)) continue; // repeated point
        if (std::fabs(e1.x() * e2.y() - e1.y() * e2.x()) <= tol && e1.dot(e2) > 0.0) {
            continue; // interior point of a straight edge
        }
        cleaned.push_back(here);
    }
    return Body::polygon(std::move(cleaned));
}

Body sector_polygon(double center, double delta, double R, int arc_points) {
    if (!(delta > 0.0 && delta < std::numbers::pi)) {
        throw std::invalid_argument("sector_polygon: opening must lie in (0, pi)");
    }
    if (!(R > 0.0) || !std::isfinite(R)) {
        throw std::invalid_argument("sector_polygon: radius must be positive and finite");
    }
    if (arc_points < 2) throw std::invalid_argument("sector_polygon: need >= 2 arc points");
    std::vector<Eigen::Vector2d> v;
    v.reserve(static_cast<std::size_t>(arc_points) + 1);
    v.emplace_back(0.0, 0.0);
    const double lo = center - 0.5 * delta;
    for (int i = 0; i < arc_points; ++i) {
        const double t = lo + delta * i / (arc_points - 1);
        v.emplace_back(R * std::cos(t), R * std::sin(t));
    }
    return Body::polygon(std::move(v));
}

// ---------------------------------------------------------------------------
// JSON
// ---------------------------------------------------------------------------

namespace {

double json_radius(const nlohmann::json& j) {
    if (j.is_string()) {
        if (j.get<std::string>() == "inf") return inf;
        throw std::invalid_argument("body json: radius string must be \"inf\"");
    }
    return j.get<double>();
}

Body body_from_json(const nlohmann::json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    if (kind == "ball") {
        return Body::ball(j.at("dim").get<int>(), json_radius(j.at("radius")));
    }
    if (kind == "hpolytope") {
        const auto rows = j.at("A");
        const auto rhs = j.at("b");
        if (rows.empty()) throw std::invalid_argument("body json: empty A");
        Eigen::MatrixXd A(rows.size(), rows[0].size());
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (std::size_t c = 0; c < rows[i].size(); ++c) {
                A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(c)) =
                    rows[i][c].get<double>();
            }
        }
        Eigen::VectorXd b(rhs.size());
        for (std::size_t i = 0; i < rhs.size(); ++i) {
            b(static_cast<Eigen::Index>(i)) = rhs[i].get<double>();
        }
        return Body::hpolytope(std::move(A), std::move(b));
    }
    if (kind == "polygon2d") {
        std::vector<Eigen::Vector2d> v;
        for (const auto& pt : j.at("vertices")) {
            v.emplace_back(pt[0].get<double>(), pt[1].get<double>());
        }
        return Body::polygon(std::move(v));
    }
    if (kind == "cone") {
        return Body::cone(j.at("dim").get<int>(), j.at("angle").get<double>(),
                          j.at("drop").get<double>(), json_radius(j.at("radius")));
    }
    throw std::invalid_argument("body json: unknown kind '" + kind + "'");
}

} // namespace

Body body_from_json_string(const std::string& text) {
    return body_from_json(nlohmann::json::parse(text));
}

std::pair<Body, Body> body_pair_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("body json: cannot open " + path);
    nlohmann::json j;
    in >> j;
    return {body_from_json(j.at("K")), body_from_json(j.at("L"))};
}

} // namespace ggbm::geom
