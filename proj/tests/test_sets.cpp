#include "doctest.h"

#include <cmath>
#include <random>

#include "gapkit/local.hpp"
#include "gapkit/sets.hpp"
#include "test_util.hpp"

using namespace gapkit;
using testutil::cols;
using testutil::vec;

namespace {

// gamma of the cone/line counter-example start point, gamma^2 = (gamma+3)/6.
const double kGamma = (1.0 + std::sqrt(73.0)) / 12.0;

ProjectableSet unit_ball2() { return BallSet(vec({0, 0}), 1.0); }

ProjectableSet parabola_curve() {
  // M = {(t, 0, t^2)} as the zero set of F(x,y,z) = (y, z - x^2).
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

Vector fuzz_point(Eigen::Index n, std::mt19937_64& rng, double scale = 2.0) {
  std::normal_distribution<double> gauss;
  Vector x(n);
  for (Eigen::Index i = 0; i < n; ++i) x(i) = scale * gauss(rng);
  return x;
}

}  // namespace

TEST_CASE("halfspace, ball and cone projections") {
  const ProjectableSet half = HalfspaceSet(vec({0, 1}), 0.0);
  CHECK((project(half, vec({3, 2})) - vec({3, 0})).norm() < 1e-14);
  CHECK((project(half, vec({3, -2})) - vec({3, -2})).norm() == 0.0);

  CHECK((project(unit_ball2(), vec({2, 0})) - vec({1, 0})).norm() < 1e-14);

  const ProjectableSet cone = AbsConeR2{};
  const Vector p0 = vec({1, -kGamma});
  const Vector expected = vec({(1 - kGamma) / 2, (1 - kGamma) / 2});
  CHECK((project(cone, p0) - expected).norm() < 1e-14);
  // The minimizer is orthogonal to the face direction.
  CHECK(std::abs((project(cone, p0) - p0).dot(vec({1, 1}))) < 1e-14);

  // Points below both face fans hit the apex, including the symmetry axis.
  CHECK(project(cone, vec({0, -1})).norm() == 0.0);
  CHECK(project(cone, vec({0.2, -1})).norm() == 0.0);
}

TEST_CASE("relaxed projections on the counter-example pieces") {
  const ProjectableSet cone = AbsConeR2{};
  const ProjectableSet line = LineR2{};
  const Vector p0 = vec({1, -kGamma});

  const Vector relaxed_cone = relaxed_project(cone, p0, 1.5);
  CHECK((relaxed_cone - vec({(1 - 3 * kGamma) / 4, (3 - kGamma) / 4})).norm() < 1e-14);
  // Figure coordinates: approximately (-0.3465, 0.5511).
  CHECK(relaxed_cone(0) == doctest::Approx(-0.3465).epsilon(1e-3));
  CHECK(relaxed_cone(1) == doctest::Approx(0.5511).epsilon(1e-3));

  const Vector p1 = relaxed_project(line, relaxed_cone, 1.5);
  CHECK((p1 - vec({(2 - 6 * kGamma) / 8, (-3 + kGamma) / 8})).norm() < 1e-14);
  CHECK(p1(0) == doctest::Approx(-0.3465).epsilon(1e-3));
  CHECK(p1(1) == doctest::Approx(-0.2755).epsilon(1e-3));

  CHECK((relaxed_project(cone, p0, 0.0) - p0).norm() == 0.0);
  CHECK((relaxed_project(cone, p0, 1.0) - project(cone, p0)).norm() == 0.0);
}

TEST_CASE("sphere projection and singularity") {
  const ProjectableSet sphere = SphereSet(vec({0, 0}), 1.0);
  CHECK((project(sphere, vec({0.2, 0})) - vec({1, 0})).norm() < 1e-14);
  CHECK((project(sphere, vec({-3, 0})) - vec({-1, 0})).norm() < 1e-14);
  CHECK_THROWS_AS(project(sphere, vec({0, 0})), SingularityError);
}

TEST_CASE("implicit manifold projection solves the optimality system") {
  const ProjectableSet m = parabola_curve();
  const Vector x = vec({0.4, 0.3, -0.1});
  const Vector p = project(m, x);
  CHECK(contains(m, p, 1e-10));
  const Subspace t = tangent_space(m, p).subspace;
  CHECK(std::abs((x - p).dot(t.basis().col(0))) < 1e-10);
  // Idempotent within the solver tolerance.
  CHECK((project(m, p) - p).norm() < 1e-9);
}

TEST_CASE("tangent spaces") {
  const ProjectableSet sphere = SphereSet(vec({0, 0}), 1.0);
  const auto ts = tangent_space(sphere, vec({1, 0}));
  CHECK(ts.subspace.dim() == 1);
  CHECK(std::abs(std::abs(ts.subspace.basis()(1, 0)) - 1.0) < 1e-14);

  const auto tm = tangent_space(parabola_curve(), vec({0, 0, 0}));
  CHECK(tm.subspace.dim() == 1);
  CHECK((tm.subspace.projector() * vec({1, 0, 0}) - vec({1, 0, 0})).norm() < 1e-12);

  const Subspace dir = orthonormalize(cols({vec({1, 0, 0}), vec({0, 0, 1})}));
  const ProjectableSet aff = AffineSubspaceSet(dir, vec({0, 2, 0}));
  const auto ta = tangent_space(aff, vec({5, 2, -1}));
  CHECK((ta.subspace.projector() - dir.projector()).norm() < 1e-12);

  CHECK_THROWS_AS(tangent_space(ProjectableSet(AbsConeR2{}), vec({0, 0})), NonsmoothPointError);
  CHECK_THROWS_AS(tangent_space(sphere, vec({0.5, 0})), PreconditionError);

  // Rank-deficient Jacobian at the queried point.
  ImplicitManifoldSet bad;
  bad.ambient_dim = 2;
  bad.codim = 1;
  bad.value = [](const Vector& x) {
    Vector f(1);
    f << x(0) * x(0) + x(1) * x(1);
    return f;
  };
  bad.jacobian = [](const Vector& x) {
    Matrix j(1, 2);
    j << 2 * x(0), 2 * x(1);
    return j;
  };
  CHECK_THROWS_AS(tangent_space(ProjectableSet(bad), vec({0, 0})), DegenerateManifoldError);
}

TEST_CASE("boundary normals") {
  CHECK((boundary_normal(unit_ball2(), vec({0, 1})) - vec({0, 1})).norm() < 1e-14);
  const ProjectableSet half = HalfspaceSet(vec({0, 1}), 0.0);
  CHECK((boundary_normal(half, vec({5, 0})) - vec({0, 1})).norm() < 1e-14);

  // Exterior point: the normal at the projection equals (x - Px)/||x - Px||.
  const Vector x = vec({0, 2});
  const Vector px = project(unit_ball2(), x);
  const Vector n = boundary_normal(unit_ball2(), x);
  CHECK((n - (x - px) / (x - px).norm()).norm() < 1e-14);

  CHECK_THROWS_AS(boundary_normal(ProjectableSet(AbsConeR2{}), vec({0, -1})),
                  NonsmoothPointError);
  const Vector face_n = boundary_normal(ProjectableSet(AbsConeR2{}), vec({1, 1}));
  CHECK((face_n - vec({1, -1}) / std::sqrt(2.0)).norm() < 1e-14);
}

TEST_CASE("membership tests") {
  const ProjectableSet cone = AbsConeR2{};
  CHECK(contains(cone, vec({0, 1})));
  CHECK_FALSE(contains(cone, vec({1, 0.5})));
  CHECK(contains(unit_ball2(), vec({1.0 + 1e-12, 0}), 1e-10));
  CHECK_FALSE(contains(unit_ball2(), vec({1.0 + 1e-8, 0}), 1e-10));
}

TEST_CASE("face labels") {
  const ProjectableSet cone = AbsConeR2{};
  CHECK(face_label(cone, vec({0, 1})) == "interior");
  CHECK(face_label(cone, vec({1, 0.2})) == "right");
  CHECK(face_label(cone, vec({-1, 0.2})) == "left");
  CHECK(face_label(cone, vec({0, -1})) == "apex");
  CHECK(face_label(unit_ball2(), vec({0.1, 0.2})) == "interior");
  CHECK(face_label(unit_ball2(), vec({3, 0})) == "boundary");
}

TEST_CASE("projection idempotence over fuzzed points") {
  std::mt19937_64 rng(11);
  std::vector<ProjectableSet> sets;
  sets.push_back(LinearSubspaceSet(orthonormalize(cols({vec({1, 1}) / std::sqrt(2.0)}))));
  sets.push_back(AffineSubspaceSet(orthonormalize(cols({vec({1, 0})})), vec({0, 1})));
  sets.push_back(HalfspaceSet(vec({0, 1}), 0.5));
  sets.push_back(BallSet(vec({0.5, -0.5}), 2.0));
  sets.push_back(AbsConeR2{});
  sets.push_back(LineR2{});
  sets.push_back(SphereSet(vec({0, 0}), 1.5));
  for (const auto& set : sets) {
    for (int i = 0; i < 40; ++i) {
      const Vector x = fuzz_point(2, rng);
      if (std::holds_alternative<SphereSet>(set) && x.norm() < 1e-3) continue;
      const Vector p = project(set, x);
      CHECK((project(set, p) - p).norm() < 1e-9);
    }
  }
}

TEST_CASE("convex projections are nonexpansive") {
  std::mt19937_64 rng(13);
  std::vector<ProjectableSet> sets;
  sets.push_back(LinearSubspaceSet(orthonormalize(cols({vec({2, 1}) / std::sqrt(5.0)}))));
  sets.push_back(HalfspaceSet(vec({1, 0}), -0.2));
  sets.push_back(BallSet(vec({1, 1}), 0.7));
  sets.push_back(AbsConeR2{});
  sets.push_back(LineR2{});
  for (const auto& set : sets) {
    for (int i = 0; i < 40; ++i) {
      const Vector x = fuzz_point(2, rng);
      const Vector y = fuzz_point(2, rng);
      CHECK((project(set, x) - project(set, y)).norm() <= (x - y).norm() + 1e-12);
    }
  }
}

TEST_CASE("manifold projection Jacobian equals the tangent projector") {
  const double step = 1e-6;

  const ProjectableSet sphere = SphereSet(vec({0, 0}), 1.0);
  const Vector xbar = vec({1, 0});
  const Matrix jac = numerical_jacobian([&](const Vector& p) { return project(sphere, p); },
                                        xbar, step);
  CHECK((jac - tangent_space(sphere, xbar).subspace.projector()).cwiseAbs().maxCoeff() < 1e-5);

  const ProjectableSet curve = parabola_curve();
  const Vector ybar = vec({0.3, 0, 0.09});
  const Matrix jac2 = numerical_jacobian([&](const Vector& p) { return project(curve, p); },
                                         ybar, step);
  CHECK((jac2 - tangent_space(curve, ybar).subspace.projector()).cwiseAbs().maxCoeff() < 1e-5);

  // Relaxed version against the relaxed tangent projector.
  const double alpha = 1.6;
  const Matrix jac3 = numerical_jacobian(
      [&](const Vector& p) { return relaxed_project(curve, p, alpha); }, ybar, step);
  const Matrix relaxed_tangent = (1.0 - alpha) * Matrix::Identity(3, 3) +
                                 alpha * tangent_space(curve, ybar).subspace.projector();
  CHECK((jac3 - relaxed_tangent).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("over-relaxed projection of a nearby exterior point lands inside") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const ProjectableSet ball = BallSet(vec({0, 0}), 1.0);
  const ProjectableSet half = HalfspaceSet(vec({0, 1}), 0.0);
  for (int i = 0; i < 50; ++i) {
    const double alpha = 1.0 + unif(rng) + 1e-6;  // (1, 2]
    const double angle = 0.1 * (unif(rng) - 0.5);
    const double r = 1.0 + 0.05 * unif(rng) + 1e-9;
    const Vector x_ball = vec({r * std::sin(angle), r * std::cos(angle)});  // near (0,1)
    const Vector p = relaxed_project(ball, x_ball, std::min(alpha, 2.0));
    CHECK(p.norm() < 1.0 - 1e-12);

    const Vector x_half = vec({unif(rng), 0.05 * unif(rng) + 1e-9});
    const Vector ph = relaxed_project(half, x_half, std::min(alpha, 2.0));
    CHECK(ph(1) < -1e-12);
  }
}

TEST_CASE("variational inequality for convex projections") {
  std::mt19937_64 rng(19);
  const ProjectableSet cone = AbsConeR2{};
  const ProjectableSet ball = BallSet(vec({0, 0}), 1.0);
  for (int i = 0; i < 30; ++i) {
    const Vector x = fuzz_point(2, rng);
    for (const auto* set : {&cone, &ball}) {
      const Vector px = project(*set, x);
      for (int j = 0; j < 10; ++j) {
        Vector y = fuzz_point(2, rng);
        y = project(*set, y);  // a sampled member of the set
        CHECK((x - px).dot(y - px) <= 1e-10);
      }
    }
  }
}

TEST_CASE("set construction invariants") {
  CHECK_THROWS_AS(HalfspaceSet(vec({0, 2}), 0.0), PreconditionError);
  CHECK_THROWS_AS(BallSet(vec({0, 0}), 0.0), PreconditionError);
  CHECK_THROWS_AS(SphereSet(vec({0, 0}), -1.0), PreconditionError);
}
