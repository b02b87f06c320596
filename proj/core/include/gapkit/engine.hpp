#pragma once

#include <string>
#include <utility>
#include <vector>

#include "gapkit/params.hpp"
#include "gapkit/sets.hpp"
#include "gapkit/types.hpp"

namespace gapkit {

struct StopRule {
  double tol = 1e-12;    // on max(d_A, d_B)
  int max_iter = 100000;
};

enum class StopReason { Tolerance, MaxIter, FiniteIdentification };

std::string to_string(StopReason r);

// One GAP run. face_labels[k] tags the two projections of the step that
// produced iterates[k] ("<setB face>|<setA face>", "init" for k = 0).
// distances_to_solution is filled once a reference solution is known.
struct IterationTrace {
  std::vector<Vector> iterates;
  std::vector<std::string> face_labels;
  std::vector<double> distances_to_solution;
  bool converged = false;
  StopReason stop_reason = StopReason::MaxIter;

  const Vector& last() const { return iterates.back(); }
};

// A projection failed mid-run; carries the trace accumulated so far.
class RunAborted : public Error {
 public:
  RunAborted(const std::string& msg, IterationTrace partial)
      : Error(msg), partial_(std::move(partial)) {}
  const IterationTrace& partial_trace() const { return partial_; }

 private:
  IterationTrace partial_;
};

// Least-squares fit of the empirical linear rate from trailing log-distances.
struct RateFit {
  double rate = 0.0;
  std::pair<int, int> window = {0, 0};  // iterate indices (first, last)
  double residual = 0.0;                // RMS deviation of log-distances from the fit line
  int samples_used = 0;
};

// One application of S: setB is projected first (relaxation alpha1), setA
// second (alpha2), matching S = (1-a) I + a Pi_A^{a2} Pi_B^{a1}. Keep this
// ordering in mind when reproducing results that are sensitive to which set
// has the larger dimension.
Vector gap_step(const ProjectableSet& set_a, const ProjectableSet& set_b, const GapParams& params,
                const Vector& x);

// Iterates x_{k+1} = S x_k until max(d_A, d_B) <= stop.tol or stop.max_iter.
IterationTrace run(const ProjectableSet& set_a, const ProjectableSet& set_b,
                   const GapParams& params, const Vector& x0, const StopRule& stop = {});

// Computes ||x_k - reference|| for every iterate of the trace.
void fill_distances(IterationTrace& trace, const Vector& reference);

// Slope of log||x_k - reference|| over the trailing window_fraction of the
// iterates whose distance exceeds 10 eps ||reference||; rate = exp(slope).
// Throws InsufficientDataError with fewer than 10 usable iterates.
RateFit estimate_rate(const IterationTrace& trace, const Vector& reference,
                      double window_fraction = 0.5);

// GAP run that re-tunes (alpha1, alpha2) every iteration from the Friedrichs
// angle estimate given by the angle between v1 = Pi_B x_k - x_k and
// v2 = y_k - Pi_A y_k, where y_k is the relaxed intermediate point. Returns
// the trace and the per-iteration estimates (empty if x0 is already feasible).
std::pair<IterationTrace, std::vector<double>> adaptive_theta_run(const ProjectableSet& set_a,
                                                                  const ProjectableSet& set_b,
                                                                  const Vector& x0,
                                                                  const StopRule& stop = {});

}  // namespace gapkit
