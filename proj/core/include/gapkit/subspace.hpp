#pragma once

#include <optional>
#include <vector>

#include "gapkit/types.hpp"

namespace gapkit {

// Default tolerance for deciding that a principal angle is zero, i.e. that a
// direction belongs to the intersection. Well above SVD noise at the problem
// sizes handled here (n <= ~1000), well below any experiment angle.
inline constexpr double kZeroAngleTol = 1e-8;

// Relative singular-value threshold used for rank decisions.
inline constexpr double kRankTol = 1e-10;

// A linear subspace of R^n stored as an orthonormal basis (n x k, columns).
// Immutable after construction; dim() == 0 is the trivial subspace.
class Subspace {
 public:
  // Wraps a matrix that is already orthonormal (checked to 1e-12).
  explicit Subspace(Matrix orthonormal_basis);

  // The trivial subspace {0} of R^n.
  static Subspace trivial(Eigen::Index ambient_dim);

  Eigen::Index ambient_dim() const { return basis_.rows(); }
  Eigen::Index dim() const { return basis_.cols(); }
  const Matrix& basis() const { return basis_; }

  // P = B B^T, symmetric and idempotent.
  Matrix projector() const;

  // Orthogonal projection of a point onto the subspace.
  Vector project(const Vector& x) const { return basis_ * (basis_.transpose() * x); }

  // Orthonormal basis of the orthogonal complement.
  Subspace complement() const;

 private:
  Matrix basis_;
};

// Principal angles between two subspaces, nondecreasing, in [0, pi/2].
// intersection_dim counts angles <= zero_tol; friedrichs is the first angle
// beyond zero_tol and is absent when every angle is zero (containment).
struct PrincipalAngleSet {
  std::vector<double> angles;
  int intersection_dim = 0;
  std::optional<double> friedrichs;
};

// Column span of an arbitrary matrix; rank decided at kRankTol * sigma_max.
// A zero (or empty) matrix yields the trivial subspace.
Subspace orthonormalize(const Matrix& vectors);

// Principal angles via the two-sided SVD scheme: cosines from the cross-Gram
// of the bases, small angles refined through sines of (I - P_U) V so that
// near-zero angles are resolved to full precision.
PrincipalAngleSet principal_angles(const Subspace& u, const Subspace& v,
                                   double zero_tol = kZeroAngleTol);

// cos(theta_F), the cosine of the smallest angle strictly beyond zero_tol;
// absent when one subspace is contained in the other.
std::optional<double> friedrichs_cosine(const Subspace& u, const Subspace& v,
                                        double zero_tol = kZeroAngleTol);

// U `intersect` V, spanned by the principal vectors whose angle is <= zero_tol.
Subspace intersect(const Subspace& u, const Subspace& v, double zero_tol = kZeroAngleTol);

Matrix projector(const Subspace& u);

// Builds a deterministic pair (U, V) with dim U = p, dim V = q and the given
// principal angles (length min(p,q), nondecreasing). The pair is assembled in
// canonical block coordinates and rotated by a seeded random orthogonal matrix.
// Requires p, q >= 1 and p + q - z <= n where z is the number of zero angles
// in the request (the realizability bound; p + q <= n always satisfies it).
std::pair<Subspace, Subspace> construct_pair_with_angles(int n, int p, int q,
                                                         const std::vector<double>& angles,
                                                         unsigned seed);

// Seeded random orthogonal matrix (orthonormalized standard-normal draw).
Matrix random_orthogonal(int n, unsigned seed);

}  // namespace gapkit
