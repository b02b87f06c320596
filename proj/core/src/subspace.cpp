#include "gapkit/subspace.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <random>

namespace gapkit {

namespace {

constexpr double kPi = 3.14159265358979323846;

// Singular values of A, descending (Eigen's convention).
Eigen::VectorXd singular_values(const Matrix& a) {
  return Eigen::JacobiSVD<Matrix>(a).singularValues();
}

}  // namespace

Subspace::Subspace(Matrix orthonormal_basis) : basis_(std::move(orthonormal_basis)) {
  require(basis_.rows() >= 1, "Subspace: ambient dimension must be >= 1");
  if (basis_.cols() > 0) {
    const Matrix gram = basis_.transpose() * basis_;
    const double err =
        (gram - Matrix::Identity(basis_.cols(), basis_.cols())).cwiseAbs().maxCoeff();
    require(err <= 1e-12, "Subspace: basis columns are not orthonormal");
  }
  require(basis_.cols() <= basis_.rows(), "Subspace: dim exceeds ambient dimension");
}

Subspace Subspace::trivial(Eigen::Index ambient_dim) {
  return Subspace(Matrix(ambient_dim, 0));
}

Matrix Subspace::projector() const {
  if (dim() == 0) return Matrix::Zero(ambient_dim(), ambient_dim());
  return basis_ * basis_.transpose();
}

Subspace Subspace::complement() const {
  const Eigen::Index n = ambient_dim();
  const Eigen::Index k = dim();
  if (k == 0) return Subspace(Matrix::Identity(n, n));
  if (k == n) return trivial(n);
  Eigen::HouseholderQR<Matrix> qr(basis_);
  const Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  return Subspace(q.rightCols(n - k));
}

Subspace orthonormalize(const Matrix& vectors) {
  require(vectors.rows() >= 1, "orthonormalize: ambient dimension must be >= 1");
  if (vectors.cols() == 0) return Subspace::trivial(vectors.rows());
  Eigen::JacobiSVD<Matrix> svd(vectors, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  const double cutoff = sv.size() > 0 ? kRankTol * sv(0) : 0.0;
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) > cutoff && sv(i) > 0.0) ++rank;
  if (rank == 0) return Subspace::trivial(vectors.rows());
  return Subspace(svd.matrixU().leftCols(rank));
}

PrincipalAngleSet principal_angles(const Subspace& u, const Subspace& v, double zero_tol) {
  require(u.ambient_dim() == v.ambient_dim(), "principal_angles: ambient dimensions differ");
  require(std::min(u.dim(), v.dim()) >= 1, "principal_angles: both subspaces must be nontrivial");

  const Eigen::Index m = std::min(u.dim(), v.dim());
  const Matrix cross = u.basis().transpose() * v.basis();

  // Cosine route: accurate for large angles.
  Eigen::VectorXd cos_sv = singular_values(cross);
  std::vector<double> theta_cos(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double c = std::clamp(cos_sv(i), 0.0, 1.0);
    theta_cos[i] = std::acos(c);  // descending sigma is ascending theta
  }

  // Sine route: accurate for small angles. The residual of the larger basis
  // against the smaller one has singular values {sin theta_i} plus padding 1s.
  const bool u_small = u.dim() <= v.dim();
  const Matrix& big = u_small ? v.basis() : u.basis();
  const Matrix& small = u_small ? u.basis() : v.basis();
  const Matrix residual = big - small * (small.transpose() * big);
  Eigen::VectorXd sin_sv = singular_values(residual);
  std::vector<double> theta_sin(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double s = std::clamp(sin_sv(sin_sv.size() - 1 - i), 0.0, 1.0);  // ascending
    theta_sin[i] = std::asin(s);
  }

  PrincipalAngleSet out;
  out.angles.resize(m);
  for (Eigen::Index i = 0; i < m; ++i)
    out.angles[i] = theta_cos[i] >= kPi / 4 ? theta_cos[i] : theta_sin[i];
  std::sort(out.angles.begin(), out.angles.end());

  out.intersection_dim = 0;
  for (double t : out.angles)
    if (t <= zero_tol) ++out.intersection_dim;
  if (out.intersection_dim < static_cast<int>(out.angles.size()))
    out.friedrichs = out.angles[out.intersection_dim];
  return out;
}

std::optional<double> friedrichs_cosine(const Subspace& u, const Subspace& v, double zero_tol) {
  const PrincipalAngleSet pa = principal_angles(u, v, zero_tol);
  if (!pa.friedrichs) return std::nullopt;
  return std::cos(*pa.friedrichs);
}

Subspace intersect(const Subspace& u, const Subspace& v, double zero_tol) {
  require(u.ambient_dim() == v.ambient_dim(), "intersect: ambient dimensions differ");
  if (u.dim() == 0 || v.dim() == 0) return Subspace::trivial(u.ambient_dim());

  const PrincipalAngleSet pa = principal_angles(u, v, zero_tol);
  const int k = pa.intersection_dim;
  if (k == 0) return Subspace::trivial(u.ambient_dim());

  // The top-k principal vector pairs span the intersection; average the two
  // sides to symmetrize before re-orthonormalizing.
  Eigen::JacobiSVD<Matrix> svd(u.basis().transpose() * v.basis(),
                               Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix pu = u.basis() * svd.matrixU().leftCols(k);
  const Matrix pv = v.basis() * svd.matrixV().leftCols(k);
  return orthonormalize(0.5 * (pu + pv));
}

Matrix projector(const Subspace& u) { return u.projector(); }

Matrix random_orthogonal(int n, unsigned seed) {
  require(n >= 1, "random_orthogonal: n must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Matrix g(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g(i, j) = gauss(rng);
  Eigen::HouseholderQR<Matrix> qr(g);
  return qr.householderQ() * Matrix::Identity(n, n);
}

std::pair<Subspace, Subspace> construct_pair_with_angles(int n, int p, int q,
                                                         const std::vector<double>& angles,
                                                         unsigned seed) {
  if (p > q) {
    auto [v, u] = construct_pair_with_angles(n, q, p, angles, seed);
    return {u, v};
  }
  require(n >= 1 && p >= 1 && q >= 1, "construct_pair_with_angles: dims must be >= 1");
  require(p <= n && q <= n, "construct_pair_with_angles: subspace dim exceeds ambient");
  require(static_cast<int>(angles.size()) == p,
          "construct_pair_with_angles: need min(p,q) angles");
  int zeros = 0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    require(angles[i] >= -1e-12 && angles[i] <= kPi / 2 + 1e-12,
            "construct_pair_with_angles: angles must lie in [0, pi/2]");
    if (i > 0)
      require(angles[i] >= angles[i - 1] - 1e-12,
              "construct_pair_with_angles: angles must be nondecreasing");
    if (angles[i] <= 1e-12) ++zeros;
  }
  require(p + q - zeros <= n,
          "construct_pair_with_angles: p + q - (#zero angles) exceeds ambient dimension");

  // Canonical block coordinates: shared directions first, then a 2x2 rotation
  // block per nonzero angle, then the unmatched directions of V.
  Matrix bu = Matrix::Zero(n, p);
  Matrix bv = Matrix::Zero(n, q);
  for (int i = 0; i < zeros; ++i) {
    bu(i, i) = 1.0;
    bv(i, i) = 1.0;
  }
  const int nz = p - zeros;  // number of angled pairs
  for (int i = 0; i < nz; ++i) {
    const double theta = angles[zeros + i];
    bu(zeros + i, zeros + i) = 1.0;
    bv(zeros + i, zeros + i) = std::cos(theta);
    bv(zeros + nz + i, zeros + i) = std::sin(theta);
  }
  for (int j = 0; j < q - p; ++j) bv(zeros + 2 * nz + j, p + j) = 1.0;

  const Matrix d = random_orthogonal(n, seed);
  return {Subspace(d * bu), Subspace(d * bv)};
}

}  // namespace gapkit
