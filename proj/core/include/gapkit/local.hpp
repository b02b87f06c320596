#pragma once

#include <functional>
#include <optional>
#include <string>

#include "gapkit/params.hpp"
#include "gapkit/sets.hpp"
#include "gapkit/spectral.hpp"
#include "gapkit/subspace.hpp"

namespace gapkit {

enum class RegularityVerdict { Verified, Partial, Failed };

enum class IntersectionKind { Acute, Obtuse, Tangent };

std::string to_string(RegularityVerdict v);
std::string to_string(IntersectionKind k);

// Predicted local behavior of the GAP map at an intersection point, read off
// the tangent operator S_T = (1-a) I + a Pi_{T_A}^{a2} Pi_{T_B}^{a1}.
struct LocalRateReport {
  Vector base_point;
  Subspace tangent_a = Subspace::trivial(1);
  Subspace tangent_b = Subspace::trivial(1);
  std::optional<double> theta_f;
  double gamma_local = 0.0;
  double sigma_local = 0.0;
  bool transversal = false;
  bool regular = false;       // regularity verdict was not Failed
  bool rates_valid = false;   // gamma/sigma fields populated
  RegularityVerdict verdict = RegularityVerdict::Partial;
};

// Regularity constants of a solid convex pair at a smooth intersection point:
//   r   = sin(theta_F / 2)            (boundary-pair transversality constant)
//   sr  = sin or cos of theta_F / 2   (acute / obtuse subtransversality)
//   r_a = 1 - 2 r^2 = cos(theta_F)    (angle-form constant)
struct RegularityConstants {
  double sr = 0.0;
  double r = 0.0;
  double r_a = 0.0;
  IntersectionKind classification = IntersectionKind::Tangent;
  double theta_f = 0.0;
};

// Tangent space used by the local theory: the boundary tangent at boundary
// points of solid convex sets, the full space at interior points, the
// manifold tangent otherwise.
Subspace local_tangent(const ProjectableSet& set, const Vector& x);

// assemble_gap_matrix over the two local tangents at x.
Matrix tangent_gap_operator(const ProjectableSet& set_a, const ProjectableSet& set_b,
                            const Vector& x, const GapParams& params);

// gamma(S_T), sigma(S_T) and the tangent Friedrichs angle at x_star. If the
// regularity check fails the report carries regular = false and no rates.
LocalRateReport predicted_local_rate(const ProjectableSet& set_a, const ProjectableSet& set_b,
                                     const Vector& x_star, const GapParams& params);

// With a supplied intersection tangent (catalog pairs whose intersection
// manifold is known analytically): verifies T_A cap T_B against it within
// 1e-8 mutual projector distance. Without one, only reports Partial: the
// tangent intersection is well-defined but equality is not machine-checked.
RegularityVerdict check_regularity(const ProjectableSet& set_a, const ProjectableSet& set_b,
                                   const Vector& x,
                                   const std::optional<Subspace>& intersection_tangent);

// T_A(x) + T_B(x) = R^n, decided by the rank of the stacked bases.
bool transversality_check(const ProjectableSet& set_a, const ProjectableSet& set_b,
                          const Vector& x);

// Sign of <v1, v2> for the outward unit boundary normals: acute (<= -1e-12),
// obtuse (>= 1e-12), tangent in the band between.
IntersectionKind classify_intersection(const ProjectableSet& set_a, const ProjectableSet& set_b,
                                       const Vector& x_star);

// Closed-form constants from the boundary-tangent Friedrichs angle. Throws
// PreconditionError when the boundary tangents coincide (constants undefined).
RegularityConstants regularity_constants(const ProjectableSet& set_a, const ProjectableSet& set_b,
                                         const Vector& x_star);

// Distance to A cap B for catalog pairs with a computable intersection
// (subspace/subspace, affine variants, ball/ball, halfspace/halfspace).
double intersection_distance(const ProjectableSet& set_a, const ProjectableSet& set_b,
                             const Vector& x);

// min over sampled x in the ball of max(d_A, d_B) / d_{A cap B}, excluding
// samples with d_{A cap B} < 1e-12. Deterministic per seed.
double empirical_sr(const ProjectableSet& set_a, const ProjectableSet& set_b,
                    const Vector& x_star, double radius, int samples, unsigned seed);

// Central-difference Jacobian of a map R^n -> R^n.
Matrix numerical_jacobian(const std::function<Vector(const Vector&)>& f, const Vector& x,
                          double step = 1e-6);

}  // namespace gapkit
