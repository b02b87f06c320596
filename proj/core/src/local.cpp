#include "gapkit/local.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>

namespace gapkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

bool is_solid_convex(const ProjectableSet& set) {
  return std::holds_alternative<BallSet>(set) || std::holds_alternative<HalfspaceSet>(set) ||
         std::holds_alternative<AbsConeR2>(set);
}

bool strictly_interior(const ProjectableSet& set, const Vector& x) {
  return std::visit(
      [&x](const auto& s) -> bool {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, BallSet>)
          return (x - s.center).norm() < s.radius - 1e-8;
        else if constexpr (std::is_same_v<T, HalfspaceSet>)
          return s.normal.dot(x) < s.offset - 1e-8;
        else if constexpr (std::is_same_v<T, AbsConeR2>)
          return x(1) > std::abs(x(0)) + 1e-8;
        else
          return false;
      },
      set);
}

// Projection onto the intersection of two balls: the nearer ball projection
// when it is feasible for the other ball, otherwise the rim where the two
// bounding spheres meet.
double ball_pair_distance(const BallSet& a, const BallSet& b, const Vector& x) {
  const bool in_a = (x - a.center).norm() <= a.radius;
  const bool in_b = (x - b.center).norm() <= b.radius;
  if (in_a && in_b) return 0.0;

  const auto proj_ball = [](const BallSet& s, const Vector& p) {
    const Vector v = p - s.center;
    const double r = v.norm();
    return r <= s.radius ? p : Vector(s.center + (s.radius / r) * v);
  };
  const Vector pa = proj_ball(a, x);
  if ((pa - b.center).norm() <= b.radius + 1e-13) return (x - pa).norm();
  const Vector pb = proj_ball(b, x);
  if ((pb - a.center).norm() <= a.radius + 1e-13) return (x - pb).norm();

  const Vector axis = b.center - a.center;
  const double d = axis.norm();
  require(d > 0.0 && d < a.radius + b.radius,
          "intersection_distance: balls do not overlap in a rim");
  const Vector u = axis / d;
  const double t = (d * d + a.radius * a.radius - b.radius * b.radius) / (2.0 * d);
  const double rho2 = a.radius * a.radius - t * t;
  require(rho2 >= 0.0, "intersection_distance: empty rim");
  const double rho = std::sqrt(rho2);
  const Vector m = a.center + t * u;
  Vector w = (x - m) - u.dot(x - m) * u;
  if (w.norm() <= 1e-15) {
    // On the axis: any rim point is nearest; pick a deterministic one.
    Vector e = Vector::Zero(x.size());
    Eigen::Index j = 0;
    for (Eigen::Index i = 1; i < x.size(); ++i)
      if (std::abs(u(i)) < std::abs(u(j))) j = i;
    e(j) = 1.0;
    w = e - u.dot(e) * u;
  }
  const Vector rim = m + rho * w / w.norm();
  return (x - rim).norm();
}

double halfspace_pair_distance(const HalfspaceSet& a, const HalfspaceSet& b, const Vector& x) {
  const double ga = a.normal.dot(x) - a.offset;
  const double gb = b.normal.dot(x) - b.offset;
  if (ga <= 0.0 && gb <= 0.0) return 0.0;
  const Vector pa = ga > 0.0 ? Vector(x - ga * a.normal) : x;
  if (b.normal.dot(pa) - b.offset <= 1e-13) return (x - pa).norm();
  const Vector pb = gb > 0.0 ? Vector(x - gb * b.normal) : x;
  if (a.normal.dot(pb) - a.offset <= 1e-13) return (x - pb).norm();
  // Both constraints active at the solution: project onto their common edge.
  Matrix m(2, x.size());
  m.row(0) = a.normal.transpose();
  m.row(1) = b.normal.transpose();
  Vector rhs(2);
  rhs << ga, gb;
  const Matrix gram = m * m.transpose();
  const Vector mult = gram.fullPivLu().solve(rhs);
  return (m.transpose() * mult).norm();
}

std::optional<Subspace> linear_part(const ProjectableSet& set) {
  if (const auto* l = std::get_if<LinearSubspaceSet>(&set)) return l->subspace;
  if (const auto* a = std::get_if<AffineSubspaceSet>(&set)) return a->direction;
  if (std::holds_alternative<LineR2>(set)) {
    Matrix t(2, 1);
    t << 1.0, 0.0;
    return Subspace(t);
  }
  return std::nullopt;
}

Vector affine_offset(const ProjectableSet& set) {
  if (const auto* a = std::get_if<AffineSubspaceSet>(&set)) return a->offset;
  return Vector::Zero(ambient_dim(set));
}

}  // namespace

std::string to_string(RegularityVerdict v) {
  switch (v) {
    case RegularityVerdict::Verified: return "verified";
    case RegularityVerdict::Partial: return "partial";
    default: return "failed";
  }
}

std::string to_string(IntersectionKind k) {
  switch (k) {
    case IntersectionKind::Acute: return "acute";
    case IntersectionKind::Obtuse: return "obtuse";
    default: return "tangent";
  }
}

Subspace local_tangent(const ProjectableSet& set, const Vector& x) {
  if (is_solid_convex(set) && strictly_interior(set, x)) {
    const Eigen::Index n = ambient_dim(set);
    return Subspace(Matrix::Identity(n, n));
  }
  return tangent_space(set, x).subspace;
}

Matrix tangent_gap_operator(const ProjectableSet& set_a, const ProjectableSet& set_b,
                            const Vector& x, const GapParams& params) {
  return assemble_gap_matrix(local_tangent(set_a, x), local_tangent(set_b, x), params);
}

RegularityVerdict check_regularity(const ProjectableSet& set_a, const ProjectableSet& set_b,
                                   const Vector& x,
                                   const std::optional<Subspace>& intersection_tangent) {
  require(contains(set_a, x, 1e-8) && contains(set_b, x, 1e-8),
          "check_regularity: point is not in both sets");
  const Subspace ta = local_tangent(set_a, x);
  const Subspace tb = local_tangent(set_b, x);
  const Subspace meet = intersect(ta, tb);
  if (!intersection_tangent) return RegularityVerdict::Partial;
  const Matrix diff = meet.projector() - intersection_tangent->projector();
  return diff.cwiseAbs().maxCoeff() <= 1e-8 ? RegularityVerdict::Verified
                                            : RegularityVerdict::Failed;
}

bool transversality_check(const ProjectableSet& set_a, const ProjectableSet& set_b,
                          const Vector& x) {
  const Subspace ta = local_tangent(set_a, x);
  const Subspace tb = local_tangent(set_b, x);
  const Eigen::Index n = ta.ambient_dim();
  Matrix stacked(n, ta.dim() + tb.dim());
  if (ta.dim() > 0) stacked.leftCols(ta.dim()) = ta.basis();
  if (tb.dim() > 0) stacked.rightCols(tb.dim()) = tb.basis();
  if (stacked.cols() == 0) return n == 0;
  Eigen::JacobiSVD<Matrix> svd(stacked);
  const auto& sv = svd.singularValues();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > kRankTol * sv(0)) ++rank;
  return rank == n;
}

LocalRateReport predicted_local_rate(const ProjectableSet& set_a, const ProjectableSet& set_b,
                                     const Vector& x_star, const GapParams& params) {
  LocalRateReport rep;
  rep.base_point = x_star;
  rep.verdict = check_regularity(set_a, set_b, x_star, std::nullopt);
  rep.regular = rep.verdict != RegularityVerdict::Failed;
  if (!rep.regular) return rep;

  rep.tangent_a = local_tangent(set_a, x_star);
  rep.tangent_b = local_tangent(set_b, x_star);
  if (rep.tangent_a.dim() >= 1 && rep.tangent_b.dim() >= 1) {
    const auto pa = principal_angles(rep.tangent_a, rep.tangent_b);
    rep.theta_f = pa.friedrichs;
  }
  const Matrix st = assemble_gap_matrix(rep.tangent_a, rep.tangent_b, params);
  rep.gamma_local = subdominant_magnitude(st);
  rep.sigma_local = sigma_norm(st, intersect(rep.tangent_a, rep.tangent_b));
  rep.transversal = transversality_check(set_a, set_b, x_star);
  rep.rates_valid = true;
  return rep;
}

IntersectionKind classify_intersection(const ProjectableSet& set_a, const ProjectableSet& set_b,
                                       const Vector& x_star) {
  const Vector v1 = boundary_normal(set_a, x_star);
  const Vector v2 = boundary_normal(set_b, x_star);
  const double inner = v1.dot(v2);
  if (inner <= -1e-12) return IntersectionKind::Acute;
  if (inner >= 1e-12) return IntersectionKind::Obtuse;
  return IntersectionKind::Tangent;
}

RegularityConstants regularity_constants(const ProjectableSet& set_a, const ProjectableSet& set_b,
                                         const Vector& x_star) {
  const Subspace ta = tangent_space(set_a, x_star).subspace;
  const Subspace tb = tangent_space(set_b, x_star).subspace;
  const auto pa = principal_angles(ta, tb);
  require(pa.friedrichs.has_value(),
          "regularity_constants: boundary tangents coincide, constants undefined");
  // The tangents must differ as sets, not merely contain a shared part.
  require(ta.dim() != tb.dim() || pa.intersection_dim < ta.dim(),
          "regularity_constants: boundary tangents coincide, constants undefined");

  RegularityConstants out;
  out.theta_f = *pa.friedrichs;
  out.classification = classify_intersection(set_a, set_b, x_star);
  out.r = std::sin(out.theta_f / 2.0);
  switch (out.classification) {
    case IntersectionKind::Acute: out.sr = std::sin(out.theta_f / 2.0); break;
    case IntersectionKind::Obtuse: out.sr = std::cos(out.theta_f / 2.0); break;
    default: out.sr = std::sin(kPi / 4.0); break;  // both formulas agree at pi/2
  }
  out.r_a = 1.0 - 2.0 * out.r * out.r;
  return out;
}

double intersection_distance(const ProjectableSet& set_a, const ProjectableSet& set_b,
                             const Vector& x) {
  if (const auto* ba = std::get_if<BallSet>(&set_a)) {
    if (const auto* bb = std::get_if<BallSet>(&set_b)) return ball_pair_distance(*ba, *bb, x);
  }
  if (const auto* ha = std::get_if<HalfspaceSet>(&set_a)) {
    if (const auto* hb = std::get_if<HalfspaceSet>(&set_b))
      return halfspace_pair_distance(*ha, *hb, x);
  }
  const auto la = linear_part(set_a);
  const auto lb = linear_part(set_b);
  if (la && lb) {
    const Vector oa = affine_offset(set_a);
    const Vector ob = affine_offset(set_b);
    const Subspace meet = intersect(*la, *lb);
    // Common point of the two affine sets (least squares over the stacked
    // complement constraints); for linear subspaces this is the origin.
    Vector base = Vector::Zero(x.size());
    if (oa.norm() > 0.0 || ob.norm() > 0.0) {
      const Matrix ca = la->complement().basis();
      const Matrix cb = lb->complement().basis();
      Matrix m(ca.cols() + cb.cols(), x.size());
      Vector rhs(ca.cols() + cb.cols());
      m.topRows(ca.cols()) = ca.transpose();
      m.bottomRows(cb.cols()) = cb.transpose();
      rhs.head(ca.cols()) = ca.transpose() * oa;
      rhs.tail(cb.cols()) = cb.transpose() * ob;
      base = m.completeOrthogonalDecomposition().solve(rhs);
      require((m * base - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()),
              "intersection_distance: affine sets do not intersect");
    }
    return (x - base - meet.project(x - base)).norm();
  }
  throw PreconditionError("intersection_distance: unsupported set pair");
}

double empirical_sr(const ProjectableSet& set_a, const ProjectableSet& set_b,
                    const Vector& x_star, double radius, int samples, unsigned seed) {
  require(radius > 0.0 && samples >= 1, "empirical_sr: need positive radius and samples");
  const Eigen::Index n = x_star.size();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);

  double best = std::numeric_limits<double>::infinity();
  int valid = 0;
  for (int i = 0; i < samples; ++i) {
    Vector dir(n);
    for (Eigen::Index j = 0; j < n; ++j) dir(j) = gauss(rng);
    const double nrm = dir.norm();
    const double scale = radius * std::pow(unif(rng), 1.0 / static_cast<double>(n));
    if (nrm == 0.0) continue;
    const Vector x = x_star + (scale / nrm) * dir;
    const double di = intersection_distance(set_a, set_b, x);
    if (di < 1e-12) continue;
    const double ratio = std::max(distance(set_a, x), distance(set_b, x)) / di;
    best = std::min(best, ratio);
    ++valid;
  }
  if (valid == 0) throw InsufficientDataError("empirical_sr: no valid samples");
  return best;
}

Matrix numerical_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x,
                          double step) {
  const Eigen::Index n = x.size();
  const Vector fx = f(x);
  Matrix jac(fx.size(), n);
  for (Eigen::Index j = 0; j < n; ++j) {
    Vector xp = x, xm = x;
    xp(j) += step;
    xm(j) -= step;
    jac.col(j) = (f(xp) - f(xm)) / (2.0 * step);
  }
  return jac;
}

}  // namespace gapkit
