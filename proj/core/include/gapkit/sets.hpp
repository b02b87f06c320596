#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>

#include "gapkit/subspace.hpp"
#include "gapkit/types.hpp"

namespace gapkit {

// Default membership tolerance.
inline constexpr double kMembershipTol = 1e-10;

// {x : x in span(basis)}
struct LinearSubspaceSet {
  explicit LinearSubspaceSet(Subspace s) : subspace(std::move(s)) {}
  Subspace subspace;
};

// {offset + d : d in direction}
struct AffineSubspaceSet {
  AffineSubspaceSet(Subspace dir, Vector off);
  Subspace direction;
  Vector offset;
};

// {x : <normal, x> <= offset}, normal must be unit length.
struct HalfspaceSet {
  HalfspaceSet(Vector n, double off);
  Vector normal;
  double offset;
};

// Closed ball {x : ||x - center|| <= radius}.
struct BallSet {
  BallSet(Vector c, double r);
  Vector center;
  double radius;
};

// C = {(x, y) : y >= |x|} in R^2.
struct AbsConeR2 {};

// D = {(x, y) : y = 0} in R^2.
struct LineR2 {};

// Sphere {x : ||x - center|| = radius}, a smooth manifold.
struct SphereSet {
  SphereSet(Vector c, double r);
  Vector center;
  double radius;
};

// {x : F(x) = 0} with F : R^n -> R^d smooth and DF of full row rank d near the
// locus of interest. The projection is computed by a Newton iteration on the
// first-order optimality system of  min ||y - x||^2  s.t.  F(y) = 0.
struct ImplicitManifoldSet {
  std::function<Vector(const Vector&)> value;
  std::function<Matrix(const Vector&)> jacobian;
  Eigen::Index ambient_dim = 0;
  Eigen::Index codim = 0;
  std::optional<Vector> hint;  // fallback start point for the Newton solve
};

using ProjectableSet = std::variant<LinearSubspaceSet, AffineSubspaceSet, HalfspaceSet, BallSet,
                                    AbsConeR2, LineR2, SphereSet, ImplicitManifoldSet>;

// Tangent space T(x) translated to the origin, together with the base point.
struct TangentSpaceResult {
  Subspace subspace;
  Vector base_point;
};

Eigen::Index ambient_dim(const ProjectableSet& set);

// Nearest point of the set. Exact formulas for the catalog variants; Newton
// solve (KKT residual <= 1e-12, at most 100 iterations) for implicit
// manifolds. Sphere projection from the center throws SingularityError.
Vector project(const ProjectableSet& set, const Vector& x);

// (1 - alpha) x + alpha * project(set, x).
Vector relaxed_project(const ProjectableSet& set, const Vector& x, double alpha);

// ||x - project(set, x)||.
double distance(const ProjectableSet& set, const Vector& x);

bool contains(const ProjectableSet& set, const Vector& x, double tol = kMembershipTol);

// Tangent space at a point of the set (manifold variants, affine variants, or
// the boundary of a smooth solid variant; Ball means bd Ball here).
TangentSpaceResult tangent_space(const ProjectableSet& set, const Vector& x);

// Outward unit normal of a solid convex set at a boundary point; for exterior
// x this is the normal at the projection, (x - Px)/||x - Px||. Throws
// NonsmoothPointError at the cone apex.
Vector boundary_normal(const ProjectableSet& set, const Vector& x);

// Short tag describing which smooth piece project(set, x) lands on:
// "interior", "boundary", "left", "right", "apex", "surface", "affine",
// "manifold". Used for identification checks along iteration traces.
std::string face_label(const ProjectableSet& set, const Vector& x);

}  // namespace gapkit
