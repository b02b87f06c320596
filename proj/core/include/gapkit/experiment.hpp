#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "gapkit/engine.hpp"
#include "gapkit/params.hpp"
#include "gapkit/types.hpp"

namespace gapkit {

// Relaxation parameters for an experiment: an explicit triple, "optimal"
// (resolved from the instance's Friedrichs angle), or "kappa:<value>".
struct ParamsSpec {
  enum class Mode { Explicit, Optimal, Kappa };
  Mode mode = Mode::Optimal;
  double alpha = 1.0, alpha1 = 1.0, alpha2 = 1.0;
  double kappa = 0.0;

  GapParams resolve(std::optional<double> theta_f) const;
};

// Start point: an explicit point, or a seeded offset of the given length
// from the instance's target solution.
struct X0Spec {
  std::optional<Vector> point;
  double distance = 1e-2;
};

struct SubspaceProblem {
  int n = 20, p = 1, q = 1;
  std::vector<double> angles;
};

struct ManifoldProblem {
  std::string pair = "circle_line";  // circle_line | sphere_plane | parabola_line
  double angle = 0.52359877559829887;
};

struct ConvexProblem {
  std::string pair = "disc_disc";  // disc_disc | disc_line
  double centers_distance = 1.9;
  double line_offset = 0.5;
};

struct CounterexampleProblem {
  int iters = 60;
};

struct SpectrumProblem {
  int instances = 100;
  int max_n = 40;
};

struct SweepProblem {
  double theta_f = 0.52359877559829887;
  double grid_step = 0.05;
};

struct AdaptiveProblem {
  std::string instance = "subspace";  // subspace | discs
  SubspaceProblem subspace{4, 1, 1, {0.52359877559829887}};
  double centers_distance = 1.9;
};

using ProblemSpec = std::variant<SubspaceProblem, ManifoldProblem, ConvexProblem,
                                 CounterexampleProblem, SpectrumProblem, SweepProblem,
                                 AdaptiveProblem>;

// Declared comparison tolerances; every verdict is computed against these.
struct Tolerances {
  double rate = 0.02;          // |measured - predicted gamma|
  double jacobian = 1e-5;      // finite-difference Jacobian vs tangent operator
  int finite_iters = 50;       // iteration bound for finite-convergence verdicts
  double spectrum = 1e-8;      // multiset matching distance
  double sigma_slack = 1e-10;  // slack on the sigma upper bound
  double sweep_margin = 1e-10; // strictness margin for the sweep minimizer
  double beta = 1e-10;         // per-step factor constancy in the counter-example
  double adaptive = 1e-3;      // final theta estimate error
};

struct ExperimentConfig {
  ProblemSpec problem;
  ParamsSpec params;
  X0Spec x0;
  StopRule stop{1e-12, 100000};
  Tolerances tolerances;
  double window_fraction = 0.5;  // trailing fraction used by the rate fit
  unsigned seed = 1;
  std::string out_stem;  // output file stem; defaulted from the kind

  std::string kind() const;
};

// Parses the JSON config document (see README for the schema).
ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig load_config(const std::string& path);

struct TraceRow {
  int k = 0;
  double dist_solution = 0.0;
  double dist_a = 0.0;
  double dist_b = 0.0;
  std::string face;
};

struct ExperimentResult {
  bool pass = false;
  std::string kind;
  std::string document;  // machine-readable JSON (no timestamp)
  std::vector<TraceRow> trace_rows;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Serializes <stem>.json (with one generated_at header field) and
// <stem>.csv (columns k,dist_to_solution,dist_A,dist_B,face_label) into
// out_dir, atomically (write-then-rename).
void write_result_files(const ExperimentResult& result, const std::string& out_dir,
                        const std::string& stem);

// Built-in configs for the standard experiment instances; `name` is one of
// the kinds plus variants such as "subspace_rate_optimal". Used by the CLI
// defaults, the tests, and the acceptance suite.
ExperimentConfig builtin_config(const std::string& name);

}  // namespace gapkit
