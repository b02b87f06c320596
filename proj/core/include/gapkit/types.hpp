#pragma once

#include <Eigen/Dense>

#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace gapkit {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using Complex = std::complex<double>;

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A caller violated a documented precondition (dimension mismatch, bad range, ...).
class PreconditionError : public Error {
 public:
  explicit PreconditionError(const std::string& msg) : Error(msg) {}
};

// An iterative solver did not reach its tolerance; carries the final residual.
class NonConvergenceError : public Error {
 public:
  NonConvergenceError(const std::string& msg, double residual)
      : Error(msg + " (residual " + std::to_string(residual) + ")"), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

// The operation is undefined at the queried point (projection from a sphere center).
class SingularityError : public Error {
 public:
  explicit SingularityError(const std::string& msg) : Error(msg) {}
};

// A normal or tangent was requested at a nonsmooth boundary point (cone apex).
class NonsmoothPointError : public Error {
 public:
  explicit NonsmoothPointError(const std::string& msg) : Error(msg) {}
};

// An implicit manifold's Jacobian lost row rank at the queried point.
class DegenerateManifoldError : public Error {
 public:
  explicit DegenerateManifoldError(const std::string& msg) : Error(msg) {}
};

// Too few usable samples for a statistical fit.
class InsufficientDataError : public Error {
 public:
  explicit InsufficientDataError(const std::string& msg) : Error(msg) {}
};

// A matrix that was expected to be convergent (spectral radius <= 1) is not.
class NotConvergentError : public Error {
 public:
  explicit NotConvergentError(const std::string& msg) : Error(msg) {}
};

// Supplied data is inconsistent with the operator it describes.
class InconsistencyError : public Error {
 public:
  explicit InconsistencyError(const std::string& msg) : Error(msg) {}
};

inline void require(bool cond, const std::string& msg) {
  if (!cond) throw PreconditionError(msg);
}

}  // namespace gapkit
