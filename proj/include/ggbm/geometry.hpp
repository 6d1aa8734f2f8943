#pragma once

// Convex bodies containing the origin, their radial functions, membership
// tests, and Minkowski combinations l K + (1-l) L.  These are the test
// bodies on which the measure inequalities are evaluated.
//
// Variants:
//   Ball          { R }                Euclidean ball of radius R about 0
//   HPolytope     { A, b }             { x : A x <= b }, b >= 0
//   Polygon2D     { v_1..v_k }         convex CCW polygon, origin inside
//                                      or on the boundary
//   TruncatedCone { angle a, drop e,   { x_n >= |x'| tan(a) - e } inter
//                   radius R }         B^n(R); R may be infinite
//   Combination   { lambda, K, L }     lazy node for l K + (1-l) L
//
// Every body contains the origin, so the radial function
// rho_K(theta) = sup { t >= 0 : t theta in K } fully describes it.

#include <Eigen/Dense>

#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace ggbm::geom {

class Body;

struct Ball {
    double radius; // > 0, or +inf for the whole space
};

struct HPolytope {
    Eigen::MatrixXd A; // m x n, rows nonzero
    Eigen::VectorXd b; // m, all entries >= 0 (origin feasible)
};

struct Polygon2D {
    // CCW convex vertex list; origin strictly inside or on the boundary.
    std::vector<Eigen::Vector2d> vertices;
    // Outward edge normals and offsets (n_i . x <= c_i), derived at
    // construction; c_i >= 0.
    std::vector<Eigen::Vector2d> normals;
    std::vector<double> offsets;
};

struct TruncatedCone {
    int dim;       // n >= 2
    double angle;  // in (0, pi/2)
    double drop;   // >= 0 (apex sits at distance drop below the origin)
    double radius; // > 0, may be +inf
};

struct Combination {
    double lambda; // in [0, 1]
    std::shared_ptr<const Body> left;  // weight lambda
    std::shared_ptr<const Body> right; // weight 1 - lambda
};

// Unit direction on S^{n-1}; normalized at construction.
class Direction {
public:
    explicit Direction(Eigen::VectorXd v);
    const Eigen::VectorXd& unit() const { return u_; }
    int dim() const { return static_cast<int>(u_.size()); }

private:
    Eigen::VectorXd u_;
};

class Body {
public:
    using Repr = std::variant<Ball, HPolytope, Polygon2D, TruncatedCone, Combination>;

    static Body ball(int dim, double radius);
    static Body hpolytope(Eigen::MatrixXd A, Eigen::VectorXd b);
    static Body polygon(std::vector<Eigen::Vector2d> ccw_vertices);
    static Body cone(int dim, double angle, double drop, double radius);
    static Body combination(double lambda, Body left, Body right);

    int dim() const { return dim_; }
    const Repr& repr() const { return repr_; }
    std::string describe() const;

    // Finite bound on max |x| over the body, when one is available
    // (Ball/Polygon2D/finite cone; 2-D HPolytope via vertex enumeration).
    std::optional<double> circumradius_bound() const;

    // Directions (2-D bodies only) at which the radial function may lose
    // smoothness; used as quadrature breakpoints.
    std::vector<double> angular_breakpoints() const;

private:
    Body(Repr r, int dim) : repr_(std::move(r)), dim_(dim) {}
    Repr repr_;
    int dim_;
};

// Radial function rho_K(theta).  Closed form per variant; Combination uses
// certified bisection on membership with bracket
// [l rho_K + (1-l) rho_L, bracket + diameter bound], absolute tolerance
// 1e-10 * scale.
double radial(const Body& body, const Direction& theta);

// Exact membership for the base variants.  For Combination{l, K, L}:
//   - if either operand is a Ball, reduces to dist(x, scaled other) <= radius;
//   - if both operands have halfspace form (HPolytope / Polygon2D), decides
//     feasibility of the witness polyhedron { y : y in l K, x - y in (1-l) L }
//     by a simultaneous-projection scheme with a convexity-based certificate
//     (threshold 1e-12 * scale, iteration cap 1e5; cap raises NumericError);
//   - same-shape cone pairs collapse exactly;
//   - anything else raises std::invalid_argument (unsupported combination).
bool membership(const Body& body, const Eigen::VectorXd& x);

// Euclidean distance from x to the body (0 inside).  Supported for Ball,
// Polygon2D, HPolytope, TruncatedCone.
double distance(const Eigen::VectorXd& x, const Body& body);

// l K + (1-l) L as a Body.  lambda in {0,1} returns the scaled operand;
// Ball + Ball collapses to a Ball; TruncatedCone pairs with equal angle and
// equal truncation radius collapse to a cone with the combined drop
// l e_K + (1-l) e_L (combination before truncation); all other pairs
// produce a lazy Combination node.
Body combine(double lambda, const Body& K, const Body& L);

// Exact Minkowski combination of two convex polygons by the rotating
// edge-merge; at most |P| + |Q| vertices, collinear-edge merge tolerance
// 1e-12 * scale.
Body polygon_minkowski(double lambda, const Body& P, const Body& Q);

// Scale a body by c > 0 about the origin.
Body scale(const Body& body, double c);

// Circular sector of radius R about direction angle `center`, half-opening
// delta/2, as a CCW polygon with `arc_points` vertices on the arc (apex at
// the origin).  Used for thin-wedge localization checks.
Body sector_polygon(double center, double delta, double R, int arc_points = 256);

// JSON body description (see README for the schema):
//   {"kind":"ball","dim":n,"radius":R}
//   {"kind":"hpolytope","A":[[..],..],"b":[..]}
//   {"kind":"polygon2d","vertices":[[x,y],..]}
//   {"kind":"cone","dim":n,"angle":a,"drop":e,"radius":R}   (R may be "inf")
Body body_from_json_string(const std::string& text);

// File with {"K": <body>, "L": <body>}.
std::pair<Body, Body> body_pair_from_json_file(const std::string& path);

} // namespace ggbm::geom
