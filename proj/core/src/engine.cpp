#include "gapkit/engine.hpp"

#include "gapkit/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gapkit {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// Exact feasibility (distance identically ~0) distinguishes finite
// identification from ordinary tolerance stopping: interior points of both
// sets have exactly zero distance, geometric decay does not.
bool exactly_feasible(double da, double db, const Vector& x) {
  const double floor = 4.0 * kEps * (1.0 + x.norm());
  return da <= floor && db <= floor;
}

}  // namespace

std::string to_string(StopReason r) {
  switch (r) {
    case StopReason::Tolerance: return "tolerance";
    case StopReason::MaxIter: return "max_iter";
    default: return "finite_identification";
  }
}

Vector gap_step(const ProjectableSet& set_a, const ProjectableSet& set_b, const GapParams& params,
                const Vector& x) {
  require(params.valid(), "gap_step: parameters violate the validity assumption");
  const Vector y = relaxed_project(set_b, x, params.alpha1);
  const Vector z = relaxed_project(set_a, y, params.alpha2);
  return (1.0 - params.alpha) * x + params.alpha * z;
}

IterationTrace run(const ProjectableSet& set_a, const ProjectableSet& set_b,
                   const GapParams& params, const Vector& x0, const StopRule& stop) {
  require(params.valid(), "run: parameters violate the validity assumption");
  IterationTrace trace;
  trace.iterates.push_back(x0);
  trace.face_labels.emplace_back("init");

  Vector x = x0;
  for (int k = 0;; ++k) {
    double da, db;
    try {
      da = distance(set_a, x);
      db = distance(set_b, x);
    } catch (const Error& e) {
      throw RunAborted(std::string("run: distance evaluation failed: ") + e.what(),
                       std::move(trace));
    }
    if (std::max(da, db) <= stop.tol) {
      trace.converged = true;
      trace.stop_reason = (k > 0 && exactly_feasible(da, db, x))
                              ? StopReason::FiniteIdentification
                              : StopReason::Tolerance;
      break;
    }
    if (k >= stop.max_iter) {
      trace.stop_reason = StopReason::MaxIter;
      break;
    }
    try {
      const std::string label_b = face_label(set_b, x);
      const Vector y = relaxed_project(set_b, x, params.alpha1);
      const std::string label_a = face_label(set_a, y);
      const Vector z = relaxed_project(set_a, y, params.alpha2);
      x = (1.0 - params.alpha) * x + params.alpha * z;
      trace.iterates.push_back(x);
      trace.face_labels.push_back(label_b + "|" + label_a);
    } catch (const Error& e) {
      throw RunAborted(std::string("run: projection failed: ") + e.what(), std::move(trace));
    }
  }
  return trace;
}

void fill_distances(IterationTrace& trace, const Vector& reference) {
  trace.distances_to_solution.resize(trace.iterates.size());
  for (std::size_t i = 0; i < trace.iterates.size(); ++i)
    trace.distances_to_solution[i] = (trace.iterates[i] - reference).norm();
}

RateFit estimate_rate(const IterationTrace& trace, const Vector& reference,
                      double window_fraction) {
  require(window_fraction > 0.0 && window_fraction <= 1.0,
          "estimate_rate: window_fraction must lie in (0, 1]");
  std::vector<double> dist = trace.distances_to_solution;
  if (dist.size() != trace.iterates.size()) {
    dist.resize(trace.iterates.size());
    for (std::size_t i = 0; i < trace.iterates.size(); ++i)
      dist[i] = (trace.iterates[i] - reference).norm();
  }

  const double floor = 10.0 * kEps * reference.norm();
  std::vector<int> usable;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (dist[i] > floor && dist[i] > 0.0) usable.push_back(static_cast<int>(i));
  if (usable.size() < 10)
    throw InsufficientDataError("estimate_rate: fewer than 10 usable iterates");

  const int count = std::max<int>(2, static_cast<int>(std::ceil(window_fraction *
                                                                static_cast<double>(usable.size()))));
  const int first = static_cast<int>(usable.size()) - count;
  std::vector<int> window(usable.begin() + first, usable.end());

  // Least squares of log(dist) against the iterate index.
  double sk = 0.0, sl = 0.0, skk = 0.0, skl = 0.0;
  for (int k : window) {
    const double l = std::log(dist[k]);
    sk += k;
    sl += l;
    skk += static_cast<double>(k) * k;
    skl += k * l;
  }
  const double m = static_cast<double>(window.size());
  const double denom = m * skk - sk * sk;
  require(denom > 0.0, "estimate_rate: degenerate fit window");
  const double slope = (m * skl - sk * sl) / denom;
  const double intercept = (sl - slope * sk) / m;

  double ss = 0.0;
  for (int k : window) {
    const double r = std::log(dist[k]) - (slope * k + intercept);
    ss += r * r;
  }

  RateFit fit;
  fit.rate = std::exp(slope);
  fit.window = {window.front(), window.back()};
  fit.residual = std::sqrt(ss / m);
  fit.samples_used = static_cast<int>(window.size());
  return fit;
}

std::pair<IterationTrace, std::vector<double>> adaptive_theta_run(const ProjectableSet& set_a,
                                                                  const ProjectableSet& set_b,
                                                                  const Vector& x0,
                                                                  const StopRule& stop) {
  IterationTrace trace;
  std::vector<double> estimates;
  trace.iterates.push_back(x0);
  trace.face_labels.emplace_back("init");

  GapParams params = classify_params(1.0, 1.0, 1.0);
  Vector x = x0;
  const double tiny = 10.0 * kEps * (1.0 + x0.norm());
  for (int k = 0;; ++k) {
    const double da = distance(set_a, x);
    const double db = distance(set_b, x);
    if (std::max(da, db) <= stop.tol) {
      trace.converged = true;
      trace.stop_reason = (k > 0 && exactly_feasible(da, db, x))
                              ? StopReason::FiniteIdentification
                              : StopReason::Tolerance;
      break;
    }
    if (k >= stop.max_iter) {
      trace.stop_reason = StopReason::MaxIter;
      break;
    }

    const std::string label_b = face_label(set_b, x);
    const Vector pb = project(set_b, x);
    const Vector v1 = pb - x;
    const Vector y = x + params.alpha1 * v1;
    const std::string label_a = face_label(set_a, y);
    const Vector pa = project(set_a, y);
    const Vector v2 = y - pa;
    if (v1.norm() <= tiny || v2.norm() <= tiny) {
      // One of the moves vanished: the angle is no longer observable.
      trace.stop_reason = StopReason::Tolerance;
      trace.converged = std::max(da, db) <= stop.tol;
      break;
    }

    const double cosv = std::clamp(std::abs(v1.dot(v2)) / (v1.norm() * v2.norm()), 0.0, 1.0);
    const double theta_hat = std::acos(cosv);
    estimates.push_back(theta_hat);

    const Vector z = y + params.alpha2 * (pa - y);
    x = (1.0 - params.alpha) * x + params.alpha * z;
    trace.iterates.push_back(x);
    trace.face_labels.push_back(label_b + "|" + label_a);

    if (theta_hat > 0.0) params = optimal_params(theta_hat).params;
  }
  return {std::move(trace), std::move(estimates)};
}

}  // namespace gapkit
