#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "gapkit/params.hpp"
#include "gapkit/subspace.hpp"
#include "gapkit/types.hpp"

namespace gapkit {

// Tolerance at which an eigenvalue is identified with 1 when computing the
// subdominant magnitude. Fixed-point eigenvalues are exact up to dense
// eigensolver noise, which is far below this at the sizes handled here.
inline constexpr double kOneTol = 1e-9;

// Spectral summary of a GAP operator S.
struct SpectralReport {
  std::vector<Complex> eigenvalues;  // all n eigenvalues of S
  double gamma = 0.0;                // subdominant magnitude gamma(S)
  double sigma = 0.0;                // contraction norm ||S - S^inf||
  double lambda3 = 0.0;              // 1 - alpha2 (or 1 - alpha1 when p > q)
  double lambda4 = 0.0;              // (1 - alpha1)(1 - alpha2)
  int fixed_multiplicity = 0;        // count of eigenvalue 1
};

// Optimal relaxation for a known Friedrichs angle. When theta_f is absent
// (one subspace contained in the other) the convention alpha* = 1, gamma* = 0
// applies and the parameters reduce to plain alternating projections.
struct OptimalChoice {
  double alpha_star = 1.0;
  double gamma_star = 0.0;
  GapParams params;
};

// Eigenvalue pair of the 2x2 angle block for a principal angle theta:
//   f(theta) = (2 - a1 - a2 + a1 a2 cos^2 theta) / 2,  lambda = f +- g,
//   g = sqrt(f^2 - (1-a1)(1-a2))   (principal root; complex when negative).
// Returned with the +g root first; a complex pair has the nonnegative
// imaginary part first.
std::pair<Complex, Complex> block_eigenvalues(double theta, double alpha1, double alpha2);

// Closed-form spectrum of T = Pi_U^{a2} Pi_V^{a1} for subspaces with
// dim U = p, dim V = q, dim(U cap V) = s and the given principal angles:
//   {1}^s, {(1-a1)(1-a2)}^{s+n-p-q}, {1-a2}^{max(0,q-p)}, {1-a1}^{max(0,p-q)},
//   angle-block pairs for every nonzero angle.
// Requires s + n - p - q >= 0 and an angle list of length min(p,q).
std::vector<Complex> full_spectrum(int n, int p, int q, int s, const PrincipalAngleSet& angles,
                                   double alpha1, double alpha2);

// Maps eigenvalues of T to eigenvalues of S = (1-alpha) I + alpha T.
std::vector<Complex> map_to_gap_eigenvalues(const std::vector<Complex>& t_eigs, double alpha);

// Dense GAP operator S = (1-a) I + a ((1-a2) I + a2 P_U)((1-a1) I + a1 P_V).
Matrix assemble_gap_matrix(const Subspace& u, const Subspace& v, const GapParams& params);

// gamma(A) = max{ |lambda| : lambda in {0} u spectrum(A) \ {1} }, eigenvalue 1
// identified within one_tol. Throws NotConvergentError if rho(A) > 1 + 1e-9.
double subdominant_magnitude(const Matrix& a, double one_tol = kOneTol);
double subdominant_magnitude(const std::vector<Complex>& eigenvalues, double one_tol = kOneTol);

// sigma(S) = ||S - Pi_fix||_2 where fix is the fixed-point subspace of S
// (U cap V under B1/B2). Throws InconsistencyError if S does not fix it.
double sigma_norm(const Matrix& s, const Subspace& fix_subspace);

// alpha* = 2 / (1 + sin theta_f), gamma* = alpha* - 1; containment convention
// alpha* = 1, gamma* = 0 when theta_f is absent.
OptimalChoice optimal_params(std::optional<double> theta_f);

// Parameters alpha1 = alpha2 = 2 (kappa / (sqrt(kappa^2-1) + 1))^2, alpha = 1,
// for a kappa-linearly-regular intersection. Requires kappa >= sqrt(2).
GapParams kappa_to_params(double kappa);

// Rate ((sqrt(kappa^2-1) - 1) / (sqrt(kappa^2-1) + 1))^2. Requires kappa >= sqrt(2).
double kappa_rate(double kappa);

// Closed-form trace and determinant of M = (2-a*) I + (a*/a1)(T_1^F - I),
// the angle block at theta_f recentred by the optimal step. Test oracle.
std::pair<double, double> trdet_oracle(double theta_f, double alpha1, double alpha2);

// The 2x2 angle block T_1i of the GAP composition for one principal angle.
Matrix angle_block(double theta, double alpha1, double alpha2);

// Minimum over perfect matchings of the total pairwise distance between two
// equal-size eigenvalue multisets (Hungarian algorithm); returns the largest
// matched distance. Used for spectrum equivalence checks.
double spectrum_match_distance(std::vector<Complex> a, std::vector<Complex> b);

// Full complex spectrum of a dense real matrix.
std::vector<Complex> eigenvalues_of(const Matrix& a);

// Spectral report for an assembled operator: eigenvalues, gamma, sigma
// against the supplied fixed-point subspace, and the closed-form lambda3/4.
SpectralReport spectral_report(const Matrix& s, const Subspace& fix_subspace,
                               const GapParams& params, bool swapped_dims = false);

}  // namespace gapkit
