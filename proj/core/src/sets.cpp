#include "gapkit/sets.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <cmath>

namespace gapkit {

namespace {

// Kernel of a full-row-rank d x n Jacobian via SVD.
Subspace jacobian_kernel(const Matrix& jac) {
  const Eigen::Index d = jac.rows();
  const Eigen::Index n = jac.cols();
  Eigen::JacobiSVD<Matrix> svd(jac, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= kRankTol * sv(0) || sv(sv.size() - 1) == 0.0)
    throw DegenerateManifoldError("implicit manifold: Jacobian is rank deficient");
  return Subspace(svd.matrixV().rightCols(n - d));
}

void check_full_rank(const Matrix& jac) {
  Eigen::JacobiSVD<Matrix> svd(jac);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) <= kRankTol * sv(0) || sv(sv.size() - 1) == 0.0)
    throw DegenerateManifoldError("implicit manifold: Jacobian is rank deficient");
}

// Newton iteration on the optimality system of min ||y-x||^2 s.t. F(y)=0:
//   R(y, l) = [ y - x + J(y)^T l ; F(y) ] = 0.
// The curvature term d/dy [J(y)^T l] is approximated by central differences
// of the supplied Jacobian; the residual itself is exact, so the stopping
// test is unaffected by that approximation.
Vector newton_project(const ImplicitManifoldSet& m, const Vector& x, const Vector& start) {
  const Eigen::Index n = m.ambient_dim;
  const Eigen::Index d = m.codim;
  Vector y = start;
  Vector lambda = Vector::Zero(d);

  double residual = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 100; ++iter) {
    const Matrix jac = m.jacobian(y);
    require(jac.rows() == d && jac.cols() == n, "implicit manifold: Jacobian has wrong shape");
    check_full_rank(jac);
    const Vector fy = m.value(y);
    Vector r(n + d);
    r.head(n) = y - x + jac.transpose() * lambda;
    r.tail(d) = fy;
    residual = r.norm();
    if (residual <= 1e-12) return y;

    Matrix h = Matrix::Identity(n, n);
    if (lambda.norm() > 0.0) {
      const double step = 1e-6 * std::max(1.0, y.norm());
      Matrix curv(n, n);
      for (Eigen::Index j = 0; j < n; ++j) {
        Vector yp = y, ym = y;
        yp(j) += step;
        ym(j) -= step;
        curv.col(j) = (m.jacobian(yp).transpose() * lambda - m.jacobian(ym).transpose() * lambda) /
                      (2.0 * step);
      }
      h += 0.5 * (curv + curv.transpose());
    }

    Matrix kkt = Matrix::Zero(n + d, n + d);
    kkt.topLeftCorner(n, n) = h;
    kkt.topRightCorner(n, d) = jac.transpose();
    kkt.bottomLeftCorner(d, n) = jac;
    const Vector delta = kkt.fullPivLu().solve(-r);
    y += delta.head(n);
    lambda += delta.tail(d);
  }
  throw NonConvergenceError("implicit manifold projection did not converge", residual);
}

Vector project_cone(const Vector& x) {
  const double a = x(0);
  const double b = x(1);
  Vector out(2);
  if (b >= std::abs(a)) return x;  // inside
  if (a + b > 0.0) {               // fan of the face y = x, x > 0
    out << 0.5 * (a + b), 0.5 * (a + b);
  } else if (b - a > 0.0) {        // fan of the face y = -x, x < 0
    out << 0.5 * (a - b), 0.5 * (b - a);
  } else {                         // below both fans: apex
    out << 0.0, 0.0;
  }
  return out;
}

}  // namespace

AffineSubspaceSet::AffineSubspaceSet(Subspace dir, Vector off)
    : direction(std::move(dir)), offset(std::move(off)) {
  require(direction.ambient_dim() == offset.size(),
          "AffineSubspace: offset dimension mismatch");
}

HalfspaceSet::HalfspaceSet(Vector n, double off) : normal(std::move(n)), offset(off) {
  require(std::abs(normal.norm() - 1.0) <= 1e-12, "Halfspace: normal must have unit norm");
}

BallSet::BallSet(Vector c, double r) : center(std::move(c)), radius(r) {
  require(radius > 0.0, "Ball: radius must be positive");
}

SphereSet::SphereSet(Vector c, double r) : center(std::move(c)), radius(r) {
  require(radius > 0.0, "Sphere: radius must be positive");
}

Eigen::Index ambient_dim(const ProjectableSet& set) {
  return std::visit(
      [](const auto& s) -> Eigen::Index {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LinearSubspaceSet>) return s.subspace.ambient_dim();
        else if constexpr (std::is_same_v<T, AffineSubspaceSet>) return s.direction.ambient_dim();
        else if constexpr (std::is_same_v<T, HalfspaceSet>) return s.normal.size();
        else if constexpr (std::is_same_v<T, BallSet>) return s.center.size();
        else if constexpr (std::is_same_v<T, SphereSet>) return s.center.size();
        else if constexpr (std::is_same_v<T, ImplicitManifoldSet>) return s.ambient_dim;
        else return 2;  // AbsConeR2, LineR2
      },
      set);
}

Vector project(const ProjectableSet& set, const Vector& x) {
  require(x.size() == ambient_dim(set), "project: point dimension mismatch");
  return std::visit(
      [&x](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LinearSubspaceSet>) {
          return s.subspace.project(x);
        } else if constexpr (std::is_same_v<T, AffineSubspaceSet>) {
          return s.offset + s.direction.project(x - s.offset);
        } else if constexpr (std::is_same_v<T, HalfspaceSet>) {
          const double excess = s.normal.dot(x) - s.offset;
          if (excess <= 0.0) return x;
          return x - excess * s.normal;
        } else if constexpr (std::is_same_v<T, BallSet>) {
          const Vector v = x - s.center;
          const double r = v.norm();
          if (r <= s.radius) return x;
          return s.center + (s.radius / r) * v;
        } else if constexpr (std::is_same_v<T, AbsConeR2>) {
          return project_cone(x);
        } else if constexpr (std::is_same_v<T, LineR2>) {
          Vector out(2);
          out << x(0), 0.0;
          return out;
        } else if constexpr (std::is_same_v<T, SphereSet>) {
          const Vector v = x - s.center;
          const double r = v.norm();
          if (r == 0.0)
            throw SingularityError("sphere projection undefined at the center");
          return s.center + (s.radius / r) * v;
        } else {
          Vector y = newton_project(s, x, x);
          return y;
        }
      },
      set);
}

Vector relaxed_project(const ProjectableSet& set, const Vector& x, double alpha) {
  return (1.0 - alpha) * x + alpha * project(set, x);
}

double distance(const ProjectableSet& set, const Vector& x) {
  return (x - project(set, x)).norm();
}

bool contains(const ProjectableSet& set, const Vector& x, double tol) {
  require(x.size() == ambient_dim(set), "contains: point dimension mismatch");
  return std::visit(
      [&](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, HalfspaceSet>) {
          return s.normal.dot(x) <= s.offset + tol;
        } else if constexpr (std::is_same_v<T, BallSet>) {
          return (x - s.center).norm() <= s.radius + tol;
        } else if constexpr (std::is_same_v<T, AbsConeR2>) {
          return x(1) >= std::abs(x(0)) - tol;
        } else if constexpr (std::is_same_v<T, SphereSet>) {
          return std::abs((x - s.center).norm() - s.radius) <= tol;
        } else if constexpr (std::is_same_v<T, ImplicitManifoldSet>) {
          const double jn = Eigen::JacobiSVD<Matrix>(s.jacobian(x)).singularValues()(0);
          return s.value(x).norm() <= tol * std::max(1.0, jn);
        } else {
          return distance(set, x) <= tol;
        }
      },
      set);
}

TangentSpaceResult tangent_space(const ProjectableSet& set, const Vector& x) {
  require(x.size() == ambient_dim(set), "tangent_space: point dimension mismatch");
  require(contains(set, x, 1e-8), "tangent_space: point is not in the set");
  return std::visit(
      [&x, &set](const auto& s) -> TangentSpaceResult {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, LinearSubspaceSet>) {
          return {s.subspace, x};
        } else if constexpr (std::is_same_v<T, AffineSubspaceSet>) {
          return {s.direction, x};
        } else if constexpr (std::is_same_v<T, HalfspaceSet>) {
          require(std::abs(s.normal.dot(x) - s.offset) <= 1e-8,
                  "tangent_space: point is not on the halfspace boundary");
          Matrix n(s.normal.size(), 1);
          n.col(0) = s.normal;
          return {Subspace(n).complement(), x};
        } else if constexpr (std::is_same_v<T, BallSet>) {
          const Vector v = x - s.center;
          require(std::abs(v.norm() - s.radius) <= 1e-8,
                  "tangent_space: point is not on the ball boundary");
          Matrix n(v.size(), 1);
          n.col(0) = v / v.norm();
          return {Subspace(n).complement(), x};
        } else if constexpr (std::is_same_v<T, AbsConeR2>) {
          if (x.norm() <= 1e-8)
            throw NonsmoothPointError("tangent_space: cone apex is nonsmooth");
          require(std::abs(x(1) - std::abs(x(0))) <= 1e-8,
                  "tangent_space: point is not on the cone boundary");
          Matrix t(2, 1);
          const double inv = 1.0 / std::sqrt(2.0);
          if (x(0) > 0.0)
            t << inv, inv;
          else
            t << -inv, inv;
          return {Subspace(t), x};
        } else if constexpr (std::is_same_v<T, LineR2>) {
          Matrix t(2, 1);
          t << 1.0, 0.0;
          return {Subspace(t), x};
        } else if constexpr (std::is_same_v<T, SphereSet>) {
          const Vector v = x - s.center;
          Matrix n(v.size(), 1);
          n.col(0) = v / v.norm();
          return {Subspace(n).complement(), x};
        } else {
          return {jacobian_kernel(s.jacobian(x)), x};
        }
      },
      set);
}

Vector boundary_normal(const ProjectableSet& set, const Vector& x) {
  require(x.size() == ambient_dim(set), "boundary_normal: point dimension mismatch");
  return std::visit(
      [&x, &set](const auto& s) -> Vector {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BallSet>) {
          const Vector v = x - s.center;
          const double r = v.norm();
          if (r == 0.0) throw SingularityError("boundary_normal: ball center");
          require(r >= s.radius - 1e-8, "boundary_normal: point is interior to the ball");
          return v / r;
        } else if constexpr (std::is_same_v<T, HalfspaceSet>) {
          require(s.normal.dot(x) >= s.offset - 1e-8,
                  "boundary_normal: point is interior to the halfspace");
          return s.normal;
        } else if constexpr (std::is_same_v<T, AbsConeR2>) {
          const Vector p = project(set, x);
          if (p.norm() <= 1e-12)
            throw NonsmoothPointError("boundary_normal: cone apex is nonsmooth");
          require(x(1) <= std::abs(x(0)) + 1e-8,
                  "boundary_normal: point is interior to the cone");
          Vector n(2);
          const double inv = 1.0 / std::sqrt(2.0);
          if (p(0) > 0.0)
            n << inv, -inv;
          else
            n << -inv, -inv;
          return n;
        } else {
          throw PreconditionError(
              "boundary_normal: set is not a solid convex variant with smooth boundary");
        }
      },
      set);
}

std::string face_label(const ProjectableSet& set, const Vector& x) {
  return std::visit(
      [&x, &set](const auto& s) -> std::string {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AbsConeR2>) {
          if (x(1) >= std::abs(x(0))) return "interior";
          const Vector p = project_cone(x);
          if (p.norm() == 0.0) return "apex";
          return p(0) > 0.0 ? "right" : "left";
        } else if constexpr (std::is_same_v<T, BallSet>) {
          return (x - s.center).norm() < s.radius - 1e-12 ? "interior" : "boundary";
        } else if constexpr (std::is_same_v<T, HalfspaceSet>) {
          return s.normal.dot(x) < s.offset - 1e-12 ? "interior" : "boundary";
        } else if constexpr (std::is_same_v<T, SphereSet>) {
          return "surface";
        } else if constexpr (std::is_same_v<T, ImplicitManifoldSet>) {
          return "manifold";
        } else {
          return "affine";
        }
      },
      set);
}

}  // namespace gapkit
