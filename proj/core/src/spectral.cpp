#include "gapkit/spectral.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <limits>

namespace gapkit {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

std::string to_string(ParamCase c) {
  switch (c) {
    case ParamCase::B1: return "B1";
    case ParamCase::B2: return "B2";
    case ParamCase::B3: return "B3";
    default: return "Invalid";
  }
}

GapParams classify_params(double alpha, double alpha1, double alpha2) {
  GapParams p;
  p.alpha = alpha;
  p.alpha1 = alpha1;
  p.alpha2 = alpha2;
  const bool a_unit = alpha > 0.0 && alpha <= 1.0;
  const bool a_open = alpha > 0.0 && alpha < 1.0;
  const bool r1_open = alpha1 > 0.0 && alpha1 < 2.0;
  const bool r2_open = alpha2 > 0.0 && alpha2 < 2.0;
  const bool r1_closed = alpha1 > 0.0 && alpha1 <= 2.0;
  const bool r2_closed = alpha2 > 0.0 && alpha2 <= 2.0;
  if (a_unit && r1_open && r2_open)
    p.param_case = ParamCase::B1;
  else if (a_open && r1_closed && r2_closed && (alpha1 != 2.0 || alpha2 != 2.0))
    p.param_case = ParamCase::B2;
  else if (a_open && alpha1 == 2.0 && alpha2 == 2.0)
    p.param_case = ParamCase::B3;
  else
    p.param_case = ParamCase::Invalid;
  return p;
}

std::pair<Complex, Complex> block_eigenvalues(double theta, double alpha1, double alpha2) {
  require(theta >= -1e-12 && theta <= kPi / 2 + 1e-12,
          "block_eigenvalues: theta must lie in [0, pi/2]");
  const double c = std::cos(theta);
  const double f = 0.5 * (2.0 - alpha1 - alpha2 + alpha1 * alpha2 * c * c);
  const double prod = (1.0 - alpha1) * (1.0 - alpha2);
  double disc = f * f - prod;
  // At a double root the subtraction cancels to roundoff; sqrt would blow the
  // noise up to ~1e-8, so snap the discriminant to zero there.
  if (std::abs(disc) <= 16.0 * std::numeric_limits<double>::epsilon() * (f * f + std::abs(prod)))
    disc = 0.0;
  if (disc >= 0.0) {
    const double g = std::sqrt(disc);
    return {Complex(f + g, 0.0), Complex(f - g, 0.0)};
  }
  const double g = std::sqrt(-disc);
  return {Complex(f, g), Complex(f, -g)};
}

Matrix angle_block(double theta, double alpha1, double alpha2) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  Matrix t(2, 2);
  t(0, 0) = 1.0 - alpha1 * s * s;
  t(0, 1) = alpha1 * c * s;
  t(1, 0) = alpha1 * (1.0 - alpha2) * c * s;
  t(1, 1) = (1.0 - alpha2) * (1.0 - alpha1 * c * c);
  return t;
}

std::vector<Complex> full_spectrum(int n, int p, int q, int s, const PrincipalAngleSet& angles,
                                   double alpha1, double alpha2) {
  const int m = std::min(p, q);
  require(p >= 0 && q >= 0 && p <= n && q <= n, "full_spectrum: bad dimensions");
  require(s >= 0 && s <= m, "full_spectrum: s must lie in [0, min(p,q)]");
  require(s + n - p - q >= 0, "full_spectrum: multiplicity s+n-p-q is negative");
  require(static_cast<int>(angles.angles.size()) == m,
          "full_spectrum: need min(p,q) principal angles");

  std::vector<Complex> eigs;
  eigs.reserve(n);
  for (int i = 0; i < s; ++i) eigs.emplace_back(1.0, 0.0);
  const Complex l4((1.0 - alpha1) * (1.0 - alpha2), 0.0);
  for (int i = 0; i < s + n - p - q; ++i) eigs.push_back(l4);
  for (int i = 0; i < std::max(0, q - p); ++i) eigs.emplace_back(1.0 - alpha2, 0.0);
  for (int i = 0; i < std::max(0, p - q); ++i) eigs.emplace_back(1.0 - alpha1, 0.0);
  for (int i = s; i < m; ++i) {
    const auto [a, b] = block_eigenvalues(angles.angles[i], alpha1, alpha2);
    eigs.push_back(a);
    eigs.push_back(b);
  }
  return eigs;
}

std::vector<Complex> map_to_gap_eigenvalues(const std::vector<Complex>& t_eigs, double alpha) {
  std::vector<Complex> out;
  out.reserve(t_eigs.size());
  for (const Complex& l : t_eigs) out.push_back(Complex(1.0, 0.0) + alpha * (l - 1.0));
  return out;
}

Matrix assemble_gap_matrix(const Subspace& u, const Subspace& v, const GapParams& params) {
  require(u.ambient_dim() == v.ambient_dim(), "assemble_gap_matrix: ambient dimensions differ");
  const Eigen::Index n = u.ambient_dim();
  const Matrix id = Matrix::Identity(n, n);
  const Matrix pu_relaxed = (1.0 - params.alpha2) * id + params.alpha2 * u.projector();
  const Matrix pv_relaxed = (1.0 - params.alpha1) * id + params.alpha1 * v.projector();
  return (1.0 - params.alpha) * id + params.alpha * pu_relaxed * pv_relaxed;
}

std::vector<Complex> eigenvalues_of(const Matrix& a) {
  Eigen::EigenSolver<Matrix> es(a, /*computeEigenvectors=*/false);
  std::vector<Complex> out(a.rows());
  for (Eigen::Index i = 0; i < a.rows(); ++i) out[i] = es.eigenvalues()(i);
  return out;
}

double subdominant_magnitude(const std::vector<Complex>& eigenvalues, double one_tol) {
  double rho = 0.0;
  for (const Complex& l : eigenvalues) rho = std::max(rho, std::abs(l));
  if (rho > 1.0 + 1e-9)
    throw NotConvergentError("subdominant_magnitude: spectral radius " + std::to_string(rho) +
                             " exceeds 1");
  double gamma = 0.0;
  for (const Complex& l : eigenvalues) {
    if (std::abs(l - Complex(1.0, 0.0)) <= one_tol) continue;
    gamma = std::max(gamma, std::abs(l));
  }
  return gamma;
}

double subdominant_magnitude(const Matrix& a, double one_tol) {
  return subdominant_magnitude(eigenvalues_of(a), one_tol);
}

double sigma_norm(const Matrix& s, const Subspace& fix_subspace) {
  require(fix_subspace.ambient_dim() == s.rows(), "sigma_norm: dimension mismatch");
  if (fix_subspace.dim() > 0) {
    const Matrix moved = s * fix_subspace.basis() - fix_subspace.basis();
    if (moved.cwiseAbs().maxCoeff() > 1e-8)
      throw InconsistencyError("sigma_norm: supplied subspace is not fixed by the operator");
  }
  const Matrix diff = s - fix_subspace.projector();
  return Eigen::JacobiSVD<Matrix>(diff).singularValues()(0);
}

OptimalChoice optimal_params(std::optional<double> theta_f) {
  OptimalChoice out;
  if (!theta_f) {
    out.alpha_star = 1.0;
    out.gamma_star = 0.0;
    out.params = classify_params(1.0, 1.0, 1.0);
    return out;
  }
  require(*theta_f > 0.0 && *theta_f <= kPi / 2 + 1e-12,
          "optimal_params: theta_f must lie in (0, pi/2]");
  out.alpha_star = 2.0 / (1.0 + std::sin(*theta_f));
  out.gamma_star = out.alpha_star - 1.0;
  out.params = classify_params(1.0, out.alpha_star, out.alpha_star);
  return out;
}

GapParams kappa_to_params(double kappa) {
  require(kappa >= std::sqrt(2.0) - 1e-12, "kappa_to_params: kappa must be >= sqrt(2)");
  const double root = std::sqrt(std::max(kappa * kappa - 1.0, 0.0));
  const double a = 2.0 * std::pow(kappa / (root + 1.0), 2.0);
  return classify_params(1.0, a, a);
}

double kappa_rate(double kappa) {
  require(kappa >= std::sqrt(2.0) - 1e-12, "kappa_rate: kappa must be >= sqrt(2)");
  const double root = std::sqrt(std::max(kappa * kappa - 1.0, 0.0));
  return std::pow((root - 1.0) / (root + 1.0), 2.0);
}

std::pair<double, double> trdet_oracle(double theta_f, double alpha1, double alpha2) {
  require(theta_f > 0.0 && theta_f < kPi / 2, "trdet_oracle: theta_f must lie in (0, pi/2)");
  require(alpha1 > 0.0, "trdet_oracle: alpha1 must be positive");
  const double s = std::sin(theta_f);
  const double c = std::cos(theta_f);
  const double tr = 2.0 / ((1.0 + s) * alpha1) *
                    (-alpha1 - alpha2 + alpha2 * alpha1 * c * c + 2.0 * alpha1 * s);
  const double det = 4.0 * s * (1.0 - s) / (alpha1 * (1.0 + s) * (1.0 + s)) *
                     (-alpha1 - alpha2 + alpha1 * alpha2 * (1.0 + s));
  return {tr, det};
}

double spectrum_match_distance(std::vector<Complex> a, std::vector<Complex> b) {
  require(a.size() == b.size(), "spectrum_match_distance: multiset sizes differ");
  const int n = static_cast<int>(a.size());
  if (n == 0) return 0.0;

  // Hungarian algorithm (Jonker-Volgenant potentials) on the distance matrix.
  std::vector<std::vector<double>> cost(n, std::vector<double>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) cost[i][j] = std::abs(a[i] - b[j]);

  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> pot_u(n + 1, 0.0), pot_v(n + 1, 0.0);
  std::vector<int> match(n + 1, -1);  // match[col] = row
  for (int i = 0; i < n; ++i) {
    std::vector<double> min_to(n + 1, inf);
    std::vector<int> prev(n + 1, -1);
    std::vector<bool> used(n + 1, false);
    int j0 = n;
    match[n] = i;
    do {
      used[j0] = true;
      const int i0 = match[j0];
      double delta = inf;
      int j1 = -1;
      for (int j = 0; j < n; ++j) {
        if (used[j]) continue;
        const double cur = cost[i0][j] - pot_u[i0] - pot_v[j];
        if (cur < min_to[j]) {
          min_to[j] = cur;
          prev[j] = j0;
        }
        if (min_to[j] < delta) {
          delta = min_to[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          pot_u[match[j]] += delta;
          pot_v[j] -= delta;
        } else {
          min_to[j] -= delta;
        }
      }
      j0 = j1;
    } while (match[j0] != -1);
    while (j0 != n) {
      const int j1 = prev[j0];
      match[j0] = match[j1];
      j0 = j1;
    }
  }

  double max_edge = 0.0;
  for (int j = 0; j < n; ++j)
    if (match[j] >= 0) max_edge = std::max(max_edge, cost[match[j]][j]);
  return max_edge;
}

SpectralReport spectral_report(const Matrix& s, const Subspace& fix_subspace,
                               const GapParams& params, bool swapped_dims) {
  SpectralReport rep;
  rep.eigenvalues = eigenvalues_of(s);
  rep.gamma = subdominant_magnitude(rep.eigenvalues);
  rep.sigma = sigma_norm(s, fix_subspace);
  rep.lambda3 = swapped_dims ? 1.0 - params.alpha1 : 1.0 - params.alpha2;
  rep.lambda4 = (1.0 - params.alpha1) * (1.0 - params.alpha2);
  rep.fixed_multiplicity = 0;
  for (const Complex& l : rep.eigenvalues)
    if (std::abs(l - Complex(1.0, 0.0)) <= kOneTol) ++rep.fixed_multiplicity;
  return rep;
}

}  // namespace gapkit
