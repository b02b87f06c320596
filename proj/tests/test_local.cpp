#include "doctest.h"

#include <cmath>

#include "gapkit/engine.hpp"
#include "gapkit/local.hpp"
#include "test_util.hpp"

using namespace gapkit;
using testutil::cols;
using testutil::vec;

namespace {

constexpr double kPi = 3.14159265358979323846;

ProjectableSet unit_circle() { return SphereSet(vec({0, 0}), 1.0); }

// Line through (1, 0) whose direction makes the given angle with the circle
// tangent (0, 1) at that point.
ProjectableSet line_through_east(double angle) {
  const Vector dir = vec({std::sin(angle), std::cos(angle)});
  return AffineSubspaceSet(orthonormalize(cols({dir})), vec({1, 0}));
}

ProjectableSet parabola_curve3() {
  ImplicitManifoldSet m;
  m.ambient_dim = 3;
  m.codim = 2;
  m.value = [](const Vector& x) {
    Vector f(2);
    f << x(1), x(2) - x(0) * x(0);
    return f;
  };
  m.jacobian = [](const Vector& x) {
    Matrix j(2, 3);
    j << 0, 1, 0, -2 * x(0), 0, 1;
    return j;
  };
  return m;
}

ProjectableSet axis_line3(int axis) {
  Vector d = Vector::Zero(3);
  d(axis) = 1.0;
  Matrix m(3, 1);
  m.col(0) = d;
  return LinearSubspaceSet(Subspace(m));
}

std::pair<ProjectableSet, ProjectableSet> disc_pair(double centers_distance) {
  return {BallSet(vec({0, 0}), 1.0), BallSet(vec({centers_distance, 0}), 1.0)};
}

Vector disc_intersection_point(double d) {
  return vec({d / 2.0, std::sqrt(1.0 - d * d / 4.0)});
}

}  // namespace

TEST_CASE("tangent GAP operator") {
  SUBCASE("linear sets reproduce the assembled matrix") {
    auto [u, v] = construct_pair_with_angles(5, 2, 2, {0.0, 0.7}, 41);
    const ProjectableSet a{LinearSubspaceSet(u)};
    const ProjectableSet b{LinearSubspaceSet(v)};
    const GapParams params = classify_params(0.8, 1.4, 1.1);
    const Vector x = Vector::Zero(5);
    CHECK((tangent_gap_operator(a, b, x, params) - assemble_gap_matrix(u, v, params))
              .cwiseAbs()
              .maxCoeff() < 1e-14);
  }
  SUBCASE("coinciding tangents leave a one-dimensional fixed space") {
    const ProjectableSet circle = unit_circle();
    const ProjectableSet line = line_through_east(0.0);  // direction (0, 1)
    const Vector x = vec({1, 0});
    const Subspace ta = local_tangent(circle, x);
    const Subspace tb = local_tangent(line, x);
    CHECK_FALSE(friedrichs_cosine(ta, tb).has_value());
    const Matrix st = tangent_gap_operator(circle, line, x, classify_params(1.0, 1.0, 1.0));
    const auto rep = spectral_report(st, intersect(ta, tb), classify_params(1.0, 1.0, 1.0));
    CHECK(rep.fixed_multiplicity == 1);
  }
  SUBCASE("parabola curve against the y axis at the origin") {
    const ProjectableSet curve = parabola_curve3();
    const ProjectableSet line = axis_line3(1);
    const Vector origin = Vector::Zero(3);
    const Subspace ta = local_tangent(curve, origin);
    const Subspace tb = local_tangent(line, origin);
    CHECK((ta.projector() * vec({1, 0, 0}) - vec({1, 0, 0})).norm() < 1e-12);
    CHECK((tb.projector() * vec({0, 1, 0}) - vec({0, 1, 0})).norm() < 1e-12);
    CHECK(*friedrichs_cosine(ta, tb) == doctest::Approx(0.0).epsilon(1e-12));
  }
}

TEST_CASE("predicted local rates") {
  const ProjectableSet circle = unit_circle();
  const ProjectableSet line = line_through_east(kPi / 6);
  const Vector x = vec({1, 0});

  const auto ap = predicted_local_rate(circle, line, x, classify_params(1.0, 1.0, 1.0));
  CHECK(ap.rates_valid);
  REQUIRE(ap.theta_f.has_value());
  CHECK(*ap.theta_f == doctest::Approx(kPi / 6).epsilon(1e-12));
  CHECK(ap.gamma_local == doctest::Approx(std::pow(std::cos(kPi / 6), 2)).epsilon(1e-10));
  CHECK(ap.sigma_local < 1.0);
  CHECK(ap.gamma_local <= ap.sigma_local + 1e-12);

  // The optimal block is a double eigenvalue; dense eigensolvers resolve it
  // only to ~sqrt(eps).
  const auto opt = predicted_local_rate(circle, line, x, optimal_params(kPi / 6).params);
  CHECK(opt.gamma_local == doctest::Approx(1.0 / 3.0).epsilon(1e-7));

  // One tangent contained in the other: rates come from the 1-alpha family.
  const ProjectableSet sphere3 = SphereSet(Vector::Zero(3), 1.0);
  const ProjectableSet line3 =
      AffineSubspaceSet(orthonormalize(cols({vec({0, 1, 0})})), vec({1, 0, 0}));
  const auto cont =
      predicted_local_rate(sphere3, line3, vec({1, 0, 0}), classify_params(1.0, 1.5, 1.2));
  CHECK_FALSE(cont.theta_f.has_value());
  CHECK(cont.gamma_local == doctest::Approx(0.5).epsilon(1e-10));
}

TEST_CASE("regularity checks") {
  const ProjectableSet curve = parabola_curve3();
  const ProjectableSet line = axis_line3(1);
  const Vector origin = Vector::Zero(3);
  CHECK(check_regularity(curve, line, origin, Subspace::trivial(3)) ==
        RegularityVerdict::Verified);
  CHECK(check_regularity(curve, line, origin, std::nullopt) == RegularityVerdict::Partial);

  // Two transversal spheres; the intersection circle's tangent at x* is the
  // cross product of the two normals.
  const ProjectableSet s1 = SphereSet(Vector::Zero(3), 1.0);
  const ProjectableSet s2 = SphereSet(vec({1, 0, 0}), 1.0);
  const Vector xstar = vec({0.5, std::sqrt(0.75), 0});
  Eigen::Vector3d n1, n2;
  n1 << xstar(0), xstar(1), xstar(2);
  n2 << xstar(0) - 1.0, xstar(1), xstar(2);
  const Eigen::Vector3d t = n1.cross(n2).normalized();
  Matrix tm(3, 1);
  tm.col(0) = t;
  CHECK(check_regularity(s1, s2, xstar, Subspace(tm)) == RegularityVerdict::Verified);

  CHECK(check_regularity(s1, s1, xstar, local_tangent(s1, xstar)) ==
        RegularityVerdict::Verified);

  // A wrong candidate is rejected.
  Matrix wrong(3, 1);
  wrong.col(0) = n1.normalized();
  CHECK(check_regularity(s1, s2, xstar, Subspace(wrong)) == RegularityVerdict::Failed);
}

TEST_CASE("transversality") {
  CHECK_FALSE(transversality_check(parabola_curve3(), axis_line3(1), Vector::Zero(3)));

  const ProjectableSet p1{LinearSubspaceSet(
      orthonormalize(cols({vec({1, 0, 0}), vec({0, 1, 0})})))};
  const ProjectableSet p2{LinearSubspaceSet(
      orthonormalize(cols({vec({1, 0, 1}), vec({0, 1, 0})})))};
  CHECK(transversality_check(p1, p2, Vector::Zero(3)));

  CHECK_FALSE(transversality_check(axis_line3(0), axis_line3(1), Vector::Zero(3)));
}

TEST_CASE("acute and obtuse disc intersections") {
  // Inner product of the outward normals at the intersection point of two
  // unit discs with centers d apart is 1 - d^2/2: positive (obtuse) for
  // d = 1, negative (acute) for d = 1.9.
  {
    auto [a, b] = disc_pair(1.0);
    CHECK(classify_intersection(a, b, disc_intersection_point(1.0)) == IntersectionKind::Obtuse);
  }
  {
    auto [a, b] = disc_pair(1.9);
    CHECK(classify_intersection(a, b, disc_intersection_point(1.9)) == IntersectionKind::Acute);
  }
  {
    // Orthogonal normals sit exactly on the acute/obtuse boundary.
    const ProjectableSet h1 = HalfspaceSet(vec({1, 0}), 0.0);
    const ProjectableSet h2 = HalfspaceSet(vec({0, 1}), 0.0);
    CHECK(classify_intersection(h1, h2, vec({0, 0})) == IntersectionKind::Tangent);
  }
  {
    // Disc inside a halfspace touching its boundary: equal normals.
    const ProjectableSet ball = BallSet(vec({0, 0}), 1.0);
    const ProjectableSet half = HalfspaceSet(vec({0, 1}), 1.0);
    CHECK(classify_intersection(ball, half, vec({0, 1})) == IntersectionKind::Obtuse);
  }
}

TEST_CASE("regularity constants") {
  {
    auto [a, b] = disc_pair(1.9);
    const Vector x = disc_intersection_point(1.9);
    const auto rc = regularity_constants(a, b, x);
    const double tf = std::acos(std::abs(1.0 - 1.9 * 1.9 / 2.0));
    CHECK(rc.classification == IntersectionKind::Acute);
    CHECK(rc.theta_f == doctest::Approx(tf).epsilon(1e-10));
    CHECK(rc.sr == doctest::Approx(std::sin(tf / 2)).epsilon(1e-10));
    CHECK(rc.r == doctest::Approx(rc.sr).epsilon(1e-12));  // acute: r = sr
    CHECK(rc.r_a == doctest::Approx(std::cos(tf)).epsilon(1e-10));
    CHECK(rc.r <= rc.sr + 1e-15);

    // kappa fed back through the rate formula reproduces gamma*(theta_F).
    const double gstar = (1.0 - std::sin(tf)) / (1.0 + std::sin(tf));
    CHECK(std::abs(kappa_rate(1.0 / rc.sr) - gstar) < 1e-12);
  }
  {
    auto [a, b] = disc_pair(1.0);
    const Vector x = disc_intersection_point(1.0);
    const auto rc = regularity_constants(a, b, x);
    const double tf = std::acos(std::abs(1.0 - 0.5));  // = pi/3
    CHECK(rc.classification == IntersectionKind::Obtuse);
    CHECK(rc.sr == doctest::Approx(std::cos(tf / 2)).epsilon(1e-10));
    CHECK(rc.r == doctest::Approx(std::sin(tf / 2)).epsilon(1e-10));
    CHECK(rc.r <= rc.sr + 1e-15);
  }
  {
    // Orthogonal boundary tangents: both formulas agree at 1/sqrt(2).
    const ProjectableSet h1 = HalfspaceSet(vec({1, 0}), 0.0);
    const ProjectableSet h2 = HalfspaceSet(vec({0, 1}), 0.0);
    const auto rc = regularity_constants(h1, h2, vec({0, 0}));
    CHECK(rc.sr == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
    CHECK(rc.r == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
  }
  {
    // Equal tangents: constants are undefined.
    const ProjectableSet ball = BallSet(vec({0, 0}), 1.0);
    const ProjectableSet half = HalfspaceSet(vec({0, 1}), 1.0);
    CHECK_THROWS_AS(regularity_constants(ball, half, vec({0, 1})), PreconditionError);
  }
}

TEST_CASE("full-map Jacobian matches the tangent operator") {
  const GapParams params = classify_params(1.0, 1.4, 1.3);
  {
    const ProjectableSet circle = unit_circle();
    const ProjectableSet line = line_through_east(kPi / 6);
    const Vector xbar = vec({1, 0});
    const Matrix fd = numerical_jacobian(
        [&](const Vector& p) { return gap_step(circle, line, params, p); }, xbar, 1e-6);
    CHECK((fd - tangent_gap_operator(circle, line, xbar, params)).cwiseAbs().maxCoeff() < 1e-5);
  }
  {
    const ProjectableSet sphere = SphereSet(Vector::Zero(3), 1.0);
    const ProjectableSet plane = AffineSubspaceSet(
        orthonormalize(cols({vec({0, 0, 1}), vec({std::sin(0.5), std::cos(0.5), 0})})),
        vec({1, 0, 0}));
    const Vector xbar = vec({1, 0, 0});
    const Matrix fd = numerical_jacobian(
        [&](const Vector& p) { return gap_step(sphere, plane, params, p); }, xbar, 1e-6);
    CHECK((fd - tangent_gap_operator(sphere, plane, xbar, params)).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("tangent operator contracts under B1 and the B2 boundary") {
  for (int it = 1; it <= 6; ++it) {
    const double tf = 0.15 + (kPi / 2 - 0.2) * (it - 1) / 5.0;
    auto [u, v] = construct_pair_with_angles(2, 1, 1, {tf}, 7u + it);
    const Subspace fix = intersect(u, v);
    for (int i = 1; i <= 5; ++i) {
      for (int j = 1; j <= 5; ++j) {
        const double a1 = 0.4 * i;
        const double a2 = 0.4 * j;
        const GapParams params = (a1 == 2.0 || a2 == 2.0) ? classify_params(0.5, a1, a2)
                                                          : classify_params(1.0, a1, a2);
        if (params.param_case == ParamCase::B3 || !params.valid()) continue;
        const double sigma = sigma_norm(assemble_gap_matrix(u, v, params), fix);
        CHECK(sigma < 1.0 - 1e-9);
      }
    }
  }
}

TEST_CASE("empirical subtransversality") {
  SUBCASE("orthogonal lines approach 1/sqrt(2)") {
    const ProjectableSet a = axis_line3(0);
    const ProjectableSet b = axis_line3(1);
    // Work in the plane z = 0 through 3D lines; sample around the origin.
    const double est = empirical_sr(a, b, Vector::Zero(3), 1e-2, 20000, 5);
    CHECK(std::abs(est - 1.0 / std::sqrt(2.0)) < 5e-3);
  }
  SUBCASE("acute discs approach sin(theta_F/2)") {
    auto [a, b] = disc_pair(1.9);
    const Vector x = disc_intersection_point(1.9);
    const double tf = std::acos(std::abs(1.0 - 1.9 * 1.9 / 2.0));
    const double est = empirical_sr(a, b, x, 1e-3, 20000, 11);
    CHECK(std::abs(est - std::sin(tf / 2)) < 5e-3);
  }
  SUBCASE("identical sets give ratio 1") {
    const ProjectableSet a = BallSet(vec({0, 0}), 1.0);
    const double est = empirical_sr(a, a, vec({1, 0}), 1e-2, 5000, 13);
    CHECK(est == doctest::Approx(1.0).epsilon(1e-9));
  }
}

TEST_CASE("intersection distance catalog") {
  // Lens of two overlapping discs.
  auto [a, b] = disc_pair(1.0);
  CHECK(intersection_distance(a, b, vec({0.5, 0.1})) == 0.0);
  const Vector outside = vec({-1.5, 0});
  // Nearest lens point is the left lens tip (1 - 1, 0) shifted: for centers
  // (0,0) and (1,0), the lens spans x in [0, 1]; nearest point is (0, 0).
  CHECK(intersection_distance(a, b, outside) == doctest::Approx(1.5).epsilon(1e-12));
  // A point east of the lens projects onto the arc of disc A inside disc B.
  CHECK(intersection_distance(a, b, vec({2, 0})) == doctest::Approx(1.0).epsilon(1e-12));
  // A point above the lens projects onto the upper rim corner.
  const Vector above = vec({0.2, 1.4});
  const double expected = (above - vec({0.5, std::sqrt(0.75)})).norm();
  CHECK(intersection_distance(a, b, above) == doctest::Approx(expected).epsilon(1e-10));

  // Wedge of two halfspaces.
  const ProjectableSet h1 = HalfspaceSet(vec({1, 0}), 0.0);
  const ProjectableSet h2 = HalfspaceSet(vec({0, 1}), 0.0);
  CHECK(intersection_distance(h1, h2, vec({-1, -2})) == 0.0);
  CHECK(intersection_distance(h1, h2, vec({3, -2})) == doctest::Approx(3.0));
  CHECK(intersection_distance(h1, h2, vec({3, 4})) == doctest::Approx(5.0));

  CHECK_THROWS_AS(intersection_distance(a, h1, vec({0, 0})), PreconditionError);
}
