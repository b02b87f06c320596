#include "gapkit/experiment.hpp"

#include "json.hpp"

#include "gapkit/local.hpp"
#include "gapkit/spectral.hpp"
#include "gapkit/subspace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

namespace gapkit {

namespace {

using json = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

// ---------------------------------------------------------------------------
// Quad-precision replica of the cone/line counter-example recursion. The
// alternating orbit is linearly unstable: the off-ray mode of the two-step
// map decays at sqrt(0.52) against beta ~ 0.3465 on the ray, so relative
// roundoff grows by ~2.08 per step. Double precision loses the per-step
// factor at the 1e-10 level near iteration 20; quad precision keeps the
// deviation below ~1e-18 through iteration 50.
// ---------------------------------------------------------------------------
using quad = __float128;

struct QPoint {
  quad x, y;
};

quad quad_abs(quad v) { return v < 0 ? -v : v; }

quad quad_sqrt(quad v) {
  if (v <= 0) return 0;
  quad s = std::sqrt(static_cast<double>(v));
  for (int i = 0; i < 4; ++i) s = (s + v / s) / quad(2);
  return s;
}

quad quad_norm(const QPoint& p) { return quad_sqrt(p.x * p.x + p.y * p.y); }

struct ConeStep {
  QPoint next;
  const char* face;  // "right" | "left" | "apex" | "interior"
};

ConeStep counterexample_step(const QPoint& p, quad alpha1, quad alpha2) {
  // Relaxed projection onto C = {y >= |x|}, then onto D = {y = 0}.
  QPoint pc;
  const char* face;
  if (p.y >= quad_abs(p.x)) {
    pc = p;
    face = "interior";
  } else if (p.x + p.y > 0) {
    const quad t = (p.x + p.y) / quad(2);
    pc = {t, t};
    face = "right";
  } else if (p.y - p.x > 0) {
    const quad t = (p.x - p.y) / quad(2);
    pc = {t, -t};
    face = "left";
  } else {
    pc = {quad(0), quad(0)};
    face = "apex";
  }
  const QPoint relaxed{(quad(1) - alpha1) * p.x + alpha1 * pc.x,
                       (quad(1) - alpha1) * p.y + alpha1 * pc.y};
  const QPoint next{relaxed.x, (quad(1) - alpha2) * relaxed.y};
  return {next, face};
}

double cone_distance_double(double x, double y) {
  if (y >= std::abs(x)) return 0.0;
  if (x + y > 0) {
    const double t = (x + y) / 2;
    return std::hypot(x - t, y - t);
  }
  if (y - x > 0) {
    const double t = (x - y) / 2;
    return std::hypot(x - t, y + t);
  }
  return std::hypot(x, y);
}

// ---------------------------------------------------------------------------
// Instance builders
// ---------------------------------------------------------------------------

struct Instance {
  ProjectableSet a;
  ProjectableSet b;
  Vector x_star;
  std::optional<double> theta_f;
};

Vector seeded_unit(Eigen::Index n, unsigned seed) {
  std::mt19937_64 rng(0x9e3779b97f4a7c15ULL ^ seed);
  std::normal_distribution<double> gauss;
  Vector v(n);
  for (Eigen::Index i = 0; i < n; ++i) v(i) = gauss(rng);
  return v / v.norm();
}

Matrix column(const Vector& v) {
  Matrix m(v.size(), 1);
  m.col(0) = v;
  return m;
}

Instance build_subspace_instance(const SubspaceProblem& prob, unsigned seed) {
  require(!prob.angles.empty(), "subspace_rate: angle list must not be empty");
  auto [u, v] = construct_pair_with_angles(prob.n, prob.p, prob.q, prob.angles, seed);
  const auto cosine = friedrichs_cosine(u, v);
  Instance inst{LinearSubspaceSet(u), LinearSubspaceSet(v), Vector::Zero(prob.n),
                cosine ? std::optional<double>(std::acos(*cosine)) : std::nullopt};
  return inst;
}

Instance build_manifold_instance(const ManifoldProblem& prob) {
  if (prob.pair == "circle_line") {
    Vector xstar(2);
    xstar << 1, 0;
    Vector dir(2);
    dir << std::sin(prob.angle), std::cos(prob.angle);
    return {SphereSet(Vector::Zero(2), 1.0), AffineSubspaceSet(Subspace(column(dir)), xstar),
            xstar, prob.angle};
  }
  if (prob.pair == "sphere_plane") {
    Vector xstar(3);
    xstar << 1, 0, 0;
    Matrix dirs(3, 2);
    dirs.col(0) << 0, 0, 1;
    dirs.col(1) << std::sin(prob.angle), std::cos(prob.angle), 0;
    return {SphereSet(Vector::Zero(3), 1.0), AffineSubspaceSet(Subspace(dirs), xstar), xstar,
            prob.angle};
  }
  if (prob.pair == "parabola_line") {
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
    Vector axis(3);
    axis << 0, 1, 0;
    return {ProjectableSet(m), LinearSubspaceSet(Subspace(column(axis))), Vector::Zero(3),
            kPi / 2};
  }
  throw PreconditionError("manifold_rate: unknown pair '" + prob.pair + "'");
}

Instance build_convex_instance(const ConvexProblem& prob) {
  if (prob.pair == "disc_disc") {
    const double d = prob.centers_distance;
    require(d > 0.0 && d < 2.0, "convex_rate: centers_distance must lie in (0, 2)");
    Vector c2(2);
    c2 << d, 0;
    Vector xstar(2);
    xstar << d / 2, std::sqrt(1.0 - d * d / 4.0);
    const double inner = 1.0 - d * d / 2.0;  // <n_A, n_B> at the intersection point
    return {BallSet(Vector::Zero(2), 1.0), BallSet(c2, 1.0), xstar, std::acos(std::abs(inner))};
  }
  if (prob.pair == "disc_line") {
    const double c = prob.line_offset;
    require(c > 0.0 && c < 1.0, "convex_rate: line_offset must lie in (0, 1)");
    Vector off(2);
    off << 0, c;
    Vector dir(2);
    dir << 1, 0;
    Vector xstar(2);
    xstar << std::sqrt(1.0 - c * c), c;
    return {BallSet(Vector::Zero(2), 1.0), AffineSubspaceSet(Subspace(column(dir)), off), xstar,
            std::acos(c)};
  }
  throw PreconditionError("convex_rate: unknown pair '" + prob.pair + "'");
}

// ---------------------------------------------------------------------------
// Shared reporting helpers
// ---------------------------------------------------------------------------

std::string face_digest(const std::vector<std::string>& labels) {
  std::ostringstream out;
  std::size_t i = 0;
  while (i < labels.size()) {
    std::size_t j = i;
    while (j < labels.size() && labels[j] == labels[i]) ++j;
    if (i > 0) out << ";";
    out << labels[i] << "x" << (j - i);
    i = j;
  }
  return out.str();
}

json trace_summary(const IterationTrace& trace) {
  return json{{"iterations", trace.iterates.size() - 1},
              {"stop_reason", to_string(trace.stop_reason)},
              {"converged", trace.converged},
              {"face_digest", face_digest(trace.face_labels)}};
}

std::vector<TraceRow> make_rows(const IterationTrace& trace, const ProjectableSet& a,
                                const ProjectableSet& b, const Vector& reference) {
  std::vector<TraceRow> rows;
  rows.reserve(trace.iterates.size());
  for (std::size_t k = 0; k < trace.iterates.size(); ++k) {
    const Vector& x = trace.iterates[k];
    rows.push_back({static_cast<int>(k), (x - reference).norm(), distance(a, x), distance(b, x),
                    trace.face_labels[k]});
  }
  return rows;
}

json params_json(const GapParams& p) {
  return json{{"alpha", p.alpha},
              {"alpha1", p.alpha1},
              {"alpha2", p.alpha2},
              {"case", to_string(p.param_case)}};
}

json fit_json(const RateFit& fit) {
  return json{{"rate", fit.rate},
              {"window_first", fit.window.first},
              {"window_last", fit.window.second},
              {"residual", fit.residual},
              {"samples_used", fit.samples_used}};
}

json check(const std::string& name, bool pass, json details) {
  return json{{"name", name}, {"pass", pass}, {"details", std::move(details)}};
}

json spectral_report_json(const SpectralReport& rep) {
  json eigs = json::array();
  for (const Complex& l : rep.eigenvalues) eigs.push_back({l.real(), l.imag()});
  return json{{"eigenvalues", eigs},
              {"gamma", rep.gamma},
              {"sigma", rep.sigma},
              {"lambda3", rep.lambda3},
              {"lambda4", rep.lambda4},
              {"fixed_multiplicity", rep.fixed_multiplicity}};
}

json regularity_constants_json(const RegularityConstants& rc) {
  return json{{"sr", rc.sr},
              {"r", rc.r},
              {"r_a", rc.r_a},
              {"classification", to_string(rc.classification)},
              {"theta_f", rc.theta_f}};
}

ExperimentResult finish(const std::string& kind, json doc, std::vector<TraceRow> rows) {
  bool pass = true;
  for (const auto& c : doc["checks"]) pass = pass && c["pass"].get<bool>();
  doc["verdict"] = pass ? "pass" : "fail";
  ExperimentResult result;
  result.pass = pass;
  result.kind = kind;
  result.document = doc.dump(2);
  result.trace_rows = std::move(rows);
  return result;
}

json config_echo(const ExperimentConfig& config);

// Reference limit from a tight run, then the measured trace at the
// configured tolerance.
struct Measured {
  IterationTrace trace;
  Vector reference;
  bool reference_ok = false;
};

Measured measure(const ProjectableSet& a, const ProjectableSet& b, const GapParams& params,
                 const Vector& x0, const StopRule& stop) {
  Measured m;
  const double ref_tol = std::min(1e-14, stop.tol);
  const auto ref = run(a, b, params, x0, {ref_tol, stop.max_iter});
  m.reference = ref.last();
  m.reference_ok = ref.converged;
  m.trace = run(a, b, params, x0, stop);
  return m;
}

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

ExperimentResult run_subspace_rate(const ExperimentConfig& config) {
  const auto& prob = std::get<SubspaceProblem>(config.problem);
  const Instance inst = build_subspace_instance(prob, config.seed);
  const GapParams params = config.params.resolve(inst.theta_f);
  require(params.valid(), "subspace_rate: parameters violate the validity assumption");

  const auto& u = std::get<LinearSubspaceSet>(inst.a).subspace;
  const auto& v = std::get<LinearSubspaceSet>(inst.b).subspace;
  const Matrix s = assemble_gap_matrix(u, v, params);
  const Subspace fix = intersect(u, v);
  const auto spectral = spectral_report(s, fix, params, prob.p > prob.q);
  const double gamma = spectral.gamma;
  const double sigma = spectral.sigma;
  const auto choice = optimal_params(inst.theta_f);

  const Vector x0 = config.x0.point
                        ? *config.x0.point
                        : Vector(inst.x_star + config.x0.distance * seeded_unit(prob.n, config.seed));
  json doc;
  doc["kind"] = "subspace_rate";
  doc["config"] = config_echo(config);
  doc["predicted"] = {{"gamma", gamma},
                      {"sigma", sigma},
                      {"theta_f", inst.theta_f ? json(*inst.theta_f) : json(nullptr)},
                      {"alpha_star", choice.alpha_star},
                      {"gamma_star", choice.gamma_star},
                      {"params", params_json(params)}};
  doc["spectral_report"] = spectral_report_json(spectral);
  doc["checks"] = json::array();

  if (gamma < 1e-9) {
    // Finite convergence: there is no asymptotic rate to fit.
    const auto trace = run(inst.a, inst.b, params, x0, config.stop);
    doc["measured"] = {{"rate", nullptr}};
    doc["trace_summary"] = trace_summary(trace);
    const int iters = static_cast<int>(trace.iterates.size()) - 1;
    doc["checks"].push_back(check("finite_convergence",
                                  trace.converged && iters <= config.tolerances.finite_iters,
                                  {{"iterations", iters},
                                   {"bound", config.tolerances.finite_iters}}));
    return finish("subspace_rate", std::move(doc),
                  make_rows(trace, inst.a, inst.b, trace.last()));
  }

  const Measured m = measure(inst.a, inst.b, params, x0, config.stop);
  doc["trace_summary"] = trace_summary(m.trace);
  doc["checks"].push_back(check("reference_converged", m.reference_ok, {}));
  const auto fit = estimate_rate(m.trace, m.reference, config.window_fraction);
  doc["measured"] = fit_json(fit);
  doc["checks"].push_back(check("rate_matches_gamma",
                                std::abs(fit.rate - gamma) <= config.tolerances.rate,
                                {{"measured", fit.rate},
                                 {"predicted", gamma},
                                 {"tolerance", config.tolerances.rate}}));
  return finish("subspace_rate", std::move(doc), make_rows(m.trace, inst.a, inst.b, m.reference));
}

ExperimentResult run_manifold_rate(const ExperimentConfig& config) {
  const auto& prob = std::get<ManifoldProblem>(config.problem);
  const Instance inst = build_manifold_instance(prob);
  const GapParams params = config.params.resolve(inst.theta_f);
  require(params.valid(), "manifold_rate: parameters violate the validity assumption");

  const Vector x0 =
      config.x0.point
          ? *config.x0.point
          : Vector(inst.x_star + config.x0.distance * seeded_unit(inst.x_star.size(), config.seed));

  json doc;
  doc["kind"] = "manifold_rate";
  doc["config"] = config_echo(config);
  doc["checks"] = json::array();

  const Measured m = measure(inst.a, inst.b, params, x0, config.stop);
  const Vector limit = m.reference;
  doc["checks"].push_back(check("reference_converged", m.reference_ok, {}));
  const double final_dist = (m.trace.last() - inst.x_star).norm();
  const bool diverged = final_dist > 10.0 * config.x0.distance + 1.0;
  doc["checks"].push_back(check("stayed_in_basin", !diverged, {{"final_distance", final_dist}}));

  const auto local = predicted_local_rate(inst.a, inst.b, limit, params);
  doc["predicted"] = {{"gamma_local", local.gamma_local},
                      {"sigma_local", local.sigma_local},
                      {"theta_f", local.theta_f ? json(*local.theta_f) : json(nullptr)},
                      {"transversal", local.transversal},
                      {"regularity", to_string(local.verdict)},
                      {"params", params_json(params)}};
  doc["trace_summary"] = trace_summary(m.trace);

  // Jacobian of the full map at the limit against the tangent operator.
  const Matrix fd = numerical_jacobian(
      [&](const Vector& p) { return gap_step(inst.a, inst.b, params, p); }, limit, 1e-6);
  const double jac_dev =
      (fd - tangent_gap_operator(inst.a, inst.b, limit, params)).cwiseAbs().maxCoeff();
  doc["checks"].push_back(check("jacobian_matches_tangent_operator",
                                jac_dev <= config.tolerances.jacobian,
                                {{"deviation", jac_dev},
                                 {"tolerance", config.tolerances.jacobian}}));

  if (local.gamma_local < 1e-9) {
    const int iters = static_cast<int>(m.trace.iterates.size()) - 1;
    doc["measured"] = {{"rate", nullptr}};
    doc["checks"].push_back(check("finite_convergence",
                                  m.trace.converged && iters <= config.tolerances.finite_iters,
                                  {{"iterations", iters},
                                   {"bound", config.tolerances.finite_iters}}));
  } else {
    const auto fit = estimate_rate(m.trace, limit, config.window_fraction);
    doc["measured"] = fit_json(fit);
    doc["checks"].push_back(check("rate_matches_gamma_local",
                                  std::abs(fit.rate - local.gamma_local) <=
                                      config.tolerances.rate,
                                  {{"measured", fit.rate},
                                   {"predicted", local.gamma_local},
                                   {"tolerance", config.tolerances.rate}}));
  }
  return finish("manifold_rate", std::move(doc), make_rows(m.trace, inst.a, inst.b, limit));
}

ExperimentResult run_convex_rate(const ExperimentConfig& config) {
  const auto& prob = std::get<ConvexProblem>(config.problem);
  const Instance inst = build_convex_instance(prob);
  const GapParams params = config.params.resolve(inst.theta_f);
  require(params.valid(), "convex_rate: parameters violate the validity assumption");

  json doc;
  doc["kind"] = "convex_rate";
  doc["config"] = config_echo(config);
  doc["checks"] = json::array();

  Vector w;
  std::string classification = "none";
  if (prob.pair == "disc_disc") {
    const Vector n1 = boundary_normal(inst.a, inst.x_star);
    const Vector n2 = boundary_normal(inst.b, inst.x_star);
    w = (n1 + n2).normalized();
    classification = to_string(classify_intersection(inst.a, inst.b, inst.x_star));
  } else {
    w = inst.x_star.normalized();
  }
  const Vector x0 =
      config.x0.point ? *config.x0.point : Vector(inst.x_star + config.x0.distance * w);

  doc["predicted"] = json{{"classification", classification},
                          {"theta_f", inst.theta_f ? json(*inst.theta_f) : json(nullptr)},
                          {"params", params_json(params)}};
  if (prob.pair == "disc_disc")
    doc["regularity_constants"] =
        regularity_constants_json(regularity_constants(inst.a, inst.b, inst.x_star));

  if (classification == "obtuse") {
    const auto trace = run(inst.a, inst.b, params, x0, config.stop);
    const int iters = static_cast<int>(trace.iterates.size()) - 1;
    doc["trace_summary"] = trace_summary(trace);
    doc["measured"] = {{"rate", nullptr}, {"iterations", iters}};
    const bool feasible =
        contains(inst.a, trace.last(), 1e-10) && contains(inst.b, trace.last(), 1e-10);
    doc["checks"].push_back(check("finite_termination",
                                  trace.converged && feasible &&
                                      iters <= config.tolerances.finite_iters &&
                                      trace.stop_reason == StopReason::FiniteIdentification,
                                  {{"iterations", iters},
                                   {"bound", config.tolerances.finite_iters},
                                   {"stop_reason", to_string(trace.stop_reason)}}));
    return finish("convex_rate", std::move(doc), make_rows(trace, inst.a, inst.b, trace.last()));
  }

  const Measured m = measure(inst.a, inst.b, params, x0, config.stop);
  const Vector limit = m.reference;
  doc["checks"].push_back(check("reference_converged", m.reference_ok, {}));

  const auto local = predicted_local_rate(inst.a, inst.b, limit, params);
  doc["predicted"]["gamma_local"] = local.gamma_local;
  doc["predicted"]["sigma_local"] = local.sigma_local;
  doc["trace_summary"] = trace_summary(m.trace);

  // Identification: a trailing run of steps whose projections land on the
  // set boundaries (the affine side has no interior to identify).
  const auto& labels = m.trace.face_labels;
  const std::string stable_label =
      prob.pair == "disc_line" ? "affine|boundary" : "boundary|boundary";
  std::size_t stable_from = labels.size();
  for (std::size_t k = labels.size(); k-- > 1;) {
    if (labels[k] == stable_label)
      stable_from = k;
    else
      break;
  }
  const std::size_t trailing = labels.size() - stable_from;
  const bool identified = trailing >= std::min<std::size_t>(10, labels.size() - 1);
  doc["checks"].push_back(check("boundary_identification", identified,
                                {{"stable_from", stable_from},
                                 {"iterations", labels.size() - 1}}));

  const auto fit = estimate_rate(m.trace, limit, config.window_fraction);
  doc["measured"] = fit_json(fit);
  doc["checks"].push_back(check("rate_matches_gamma_local",
                                std::abs(fit.rate - local.gamma_local) <= config.tolerances.rate,
                                {{"measured", fit.rate},
                                 {"predicted", local.gamma_local},
                                 {"tolerance", config.tolerances.rate}}));
  return finish("convex_rate", std::move(doc), make_rows(m.trace, inst.a, inst.b, limit));
}

ExperimentResult run_counterexample(const ExperimentConfig& config) {
  const auto& prob = std::get<CounterexampleProblem>(config.problem);
  const int iters = std::max(prob.iters, 50);

  const quad sqrt73 = quad_sqrt(quad(73));
  const quad gamma = (quad(1) + sqrt73) / quad(12);
  const quad beta_exact = (quad(6) * gamma - quad(2)) / quad(8);
  const quad alpha = quad(3) / quad(2);

  json doc;
  doc["kind"] = "counterexample";
  doc["config"] = config_echo(config);
  doc["checks"] = json::array();
  doc["predicted"] = {{"beta", static_cast<double>(beta_exact)},
                      {"gamma", static_cast<double>(gamma)},
                      {"subspace_theory_rate", 0.5}};

  std::vector<QPoint> orbit{{quad(1), -gamma}};
  std::vector<std::string> faces{"init"};
  bool alternate_ok = true;
  bool no_identification = true;
  quad max_beta_dev = 0;
  for (int k = 0; k < iters; ++k) {
    const auto step = counterexample_step(orbit.back(), alpha, alpha);
    const char* expected = (k % 2 == 0) ? "right" : "left";
    if (k < 50 && std::string(step.face) != expected) alternate_ok = false;
    if (std::string(step.face) == "interior" || std::string(step.face) == "apex")
      no_identification = false;
    if (k < 50) {
      // p_{k+1} = beta * flip_x(p_k)
      const QPoint& cur = orbit.back();
      const QPoint dev_vec{step.next.x + beta_exact * cur.x, step.next.y - beta_exact * cur.y};
      const quad dev = quad_norm(dev_vec) / quad_norm(cur);
      if (dev > max_beta_dev) max_beta_dev = dev;
    }
    faces.push_back(std::string(step.face) + "|affine");
    orbit.push_back(step.next);
  }

  const double p1x = static_cast<double>(orbit[1].x);
  const double p1y = static_cast<double>(orbit[1].y);
  doc["measured"] = {{"p1", {p1x, p1y}},
                     {"max_beta_deviation", static_cast<double>(max_beta_dev)},
                     {"beta", static_cast<double>(beta_exact)},
                     {"iterations", iters}};

  doc["checks"].push_back(check("faces_alternate_50", alternate_ok, {}));
  doc["checks"].push_back(check("no_finite_identification", no_identification, {}));
  doc["checks"].push_back(check("beta_constant",
                                static_cast<double>(max_beta_dev) <= config.tolerances.beta,
                                {{"max_deviation", static_cast<double>(max_beta_dev)},
                                 {"tolerance", config.tolerances.beta}}));
  doc["checks"].push_back(check("p1_matches_figure",
                                std::abs(p1x - (-0.3465)) < 5e-4 &&
                                    std::abs(p1y - (-0.2755)) < 5e-4,
                                {{"p1", {p1x, p1y}}}));
  doc["checks"].push_back(check("beta_below_subspace_theory",
                                static_cast<double>(beta_exact) < 0.5,
                                {{"beta", static_cast<double>(beta_exact)}}));

  std::vector<TraceRow> rows;
  for (std::size_t k = 0; k < orbit.size(); ++k) {
    const double x = static_cast<double>(orbit[k].x);
    const double y = static_cast<double>(orbit[k].y);
    rows.push_back({static_cast<int>(k), std::hypot(x, y), std::abs(y),
                    cone_distance_double(x, y), faces[k]});
  }
  doc["trace_summary"] = json{{"iterations", iters},
                              {"stop_reason", "max_iter"},
                              {"converged", false},
                              {"face_digest", face_digest(faces)}};
  return finish("counterexample", std::move(doc), std::move(rows));
}

ExperimentResult run_spectrum_check(const ExperimentConfig& config) {
  const auto& prob = std::get<SpectrumProblem>(config.problem);
  require(prob.instances >= 1 && prob.max_n >= 4, "spectrum_check: bad batch spec");

  json doc;
  doc["kind"] = "spectrum_check";
  doc["config"] = config_echo(config);
  doc["checks"] = json::array();

  int match_failures = 0, sigma_failures = 0, fix_failures = 0;
  std::vector<int> failing;
  double worst_match = 0.0;

  for (int i = 0; i < prob.instances; ++i) {
    std::mt19937_64 rng(config.seed * 1000003ULL + static_cast<unsigned long long>(i));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n = 4 + static_cast<int>(rng() % static_cast<unsigned>(prob.max_n - 3));
    const int p = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(6, n - 1)));
    const int q = 1 + static_cast<int>(rng() % static_cast<unsigned>(std::min(6, n - 1)));
    int s = static_cast<int>(rng() % static_cast<unsigned>(std::min(p, q) + 1));
    s = std::max(s, p + q - n);  // realizability of the pair in R^n

    std::vector<double> angles;
    for (int k = 0; k < s; ++k) angles.push_back(0.0);
    for (int k = s; k < std::min(p, q); ++k)
      angles.push_back(0.05 + (kPi / 2 - 0.05) * unif(rng));
    std::sort(angles.begin(), angles.end());

    GapParams params;
    const int mode = static_cast<int>(rng() % 3);
    if (mode == 0)
      params = classify_params(0.05 + 0.95 * unif(rng), 0.05 + 1.9 * unif(rng),
                               0.05 + 1.9 * unif(rng));
    else if (mode == 1)
      params = (rng() % 2 == 0)
                   ? classify_params(0.05 + 0.9 * unif(rng), 2.0, 0.05 + 1.9 * unif(rng))
                   : classify_params(0.05 + 0.9 * unif(rng), 0.05 + 1.9 * unif(rng), 2.0);
    else
      params = classify_params(0.05 + 0.9 * unif(rng), 2.0, 2.0);

    auto [u, v] = construct_pair_with_angles(
        n, p, q, angles, static_cast<unsigned>(config.seed + 7919u * static_cast<unsigned>(i)));
    const Matrix smat = assemble_gap_matrix(u, v, params);

    PrincipalAngleSet pa;
    pa.angles = angles;
    pa.intersection_dim = s;
    if (s < static_cast<int>(angles.size())) pa.friedrichs = angles[s];
    const auto predicted = map_to_gap_eigenvalues(
        full_spectrum(n, p, q, s, pa, params.alpha1, params.alpha2), params.alpha);

    const auto numeric = eigenvalues_of(smat);
    const double dist = spectrum_match_distance(numeric, predicted);
    worst_match = std::max(worst_match, dist);
    bool ok = dist <= config.tolerances.spectrum;
    if (!ok) ++match_failures;

    // Fixed-point subspace: U cap V, enlarged by the joint complement under B3.
    Subspace fix = intersect(u, v);
    if (params.param_case == ParamCase::B3) {
      const Subspace extra = intersect(u.complement(), v.complement());
      Matrix joint(n, fix.dim() + extra.dim());
      if (fix.dim() > 0) joint.leftCols(fix.dim()) = fix.basis();
      if (extra.dim() > 0) joint.rightCols(extra.dim()) = extra.basis();
      fix = orthonormalize(joint);
      const int expected_mult = s + (s + n - p - q);
      int mult = 0;
      for (const Complex& l : numeric)
        if (std::abs(l - Complex(1, 0)) <= kOneTol) ++mult;
      if (mult != expected_mult) {
        ++fix_failures;
        ok = false;
      }
    }

    // sigma against the norm of the block decomposition of S - S^inf:
    //   angle blocks        ||(1-a) I + a T_1i||        (theta_i > 0)
    //   zero-angle blocks   |(1-a) + a (1-a1)(1-a2)|    (less the fixed direction)
    //   unmatched V (U)     |1 - a a2|  (|1 - a a1|)
    // Under B3 the lambda4 = 1 directions belong to the fixed-point set and
    // contribute nothing.
    const double a = params.alpha, a1 = params.alpha1, a2 = params.alpha2;
    const double l4_term = std::abs((1.0 - a) + a * (1.0 - a1) * (1.0 - a2));
    const bool b3 = params.param_case == ParamCase::B3;
    double bound = 0.0;
    if (!b3 && (s > 0 || s + n - p - q > 0)) bound = std::max(bound, l4_term);
    if (q > p) bound = std::max(bound, std::abs(1.0 - a * a2));
    if (p > q) bound = std::max(bound, std::abs(1.0 - a * a1));
    for (double theta : angles) {
      if (theta <= kZeroAngleTol) continue;
      const Matrix block = (1.0 - a) * Matrix::Identity(2, 2) + a * angle_block(theta, a1, a2);
      bound = std::max(bound, Eigen::JacobiSVD<Matrix>(block).singularValues()(0));
    }
    const double sigma = sigma_norm(smat, fix);
    if (sigma > bound + config.tolerances.sigma_slack) {
      ++sigma_failures;
      ok = false;
    }
    if (!ok) failing.push_back(i);
  }

  doc["measured"] = {{"instances", prob.instances},
                     {"worst_match_distance", worst_match},
                     {"failing_instances", failing}};
  doc["checks"].push_back(check("spectrum_multisets_match", match_failures == 0,
                                {{"failures", match_failures},
                                 {"tolerance", config.tolerances.spectrum},
                                 {"worst_match_distance", worst_match}}));
  doc["checks"].push_back(
      check("sigma_within_block_bound", sigma_failures == 0, {{"failures", sigma_failures}}));
  doc["checks"].push_back(
      check("b3_fixed_multiplicity", fix_failures == 0, {{"failures", fix_failures}}));
  doc["trace_summary"] = json{{"iterations", 0}};
  return finish("spectrum_check", std::move(doc), {});
}

ExperimentResult run_param_sweep(const ExperimentConfig& config) {
  const auto& prob = std::get<SweepProblem>(config.problem);
  const double tf = prob.theta_f;
  const double step = prob.grid_step;
  require(tf > 0.0 && tf < kPi / 2, "param_sweep: theta_f must lie in (0, pi/2)");
  require(step > 0.0 && step < 1.0, "param_sweep: grid_step must lie in (0, 1)");

  const double astar = 2.0 / (1.0 + std::sin(tf));
  const double gstar = astar - 1.0;

  PrincipalAngleSet pa;
  pa.angles = {tf};
  pa.friedrichs = tf;

  const auto max_gamma = [&](double alpha, double a1, double a2) {
    // Swapped-dimension instances: dim U1 < dim V1 and dim U2 > dim V2.
    const auto s1 = map_to_gap_eigenvalues(full_spectrum(4, 1, 2, 0, pa, a1, a2), alpha);
    const auto s2 = map_to_gap_eigenvalues(full_spectrum(4, 2, 1, 0, pa, a1, a2), alpha);
    return std::max(subdominant_magnitude(s1), subdominant_magnitude(s2));
  };

  const auto snap = [](double value, double target) {
    return std::abs(value - target) < 1e-12 ? target : value;
  };

  const int na = static_cast<int>(std::round(1.0 / step));
  const int nr = static_cast<int>(std::round(2.0 / step));
  const int i_star = static_cast<int>(std::round(astar / step));  // nearest grid index

  double best = std::numeric_limits<double>::infinity();
  int best_i = -1, best_j = -1, best_k = -1;
  double min_other = std::numeric_limits<double>::infinity();
  long evaluated = 0, skipped_invalid = 0;
  for (int i = 1; i <= na; ++i) {
    const double alpha = snap(i * step, 1.0);
    for (int j = 1; j <= nr; ++j) {
      const double a1 = snap(j * step, 2.0);
      for (int k = 1; k <= nr; ++k) {
        const double a2 = snap(k * step, 2.0);
        if (!classify_params(alpha, a1, a2).valid()) {
          ++skipped_invalid;
          continue;
        }
        const double g = max_gamma(alpha, a1, a2);
        ++evaluated;
        if (g < best) {
          best = g;
          best_i = i;
          best_j = j;
          best_k = k;
        }
        if (!(i == na && j == i_star && k == i_star)) min_other = std::min(min_other, g);
      }
    }
  }

  const bool minimizer_at_optimal = best_i == na && best_j == i_star && best_k == i_star;
  const bool strict = min_other > gstar + config.tolerances.sweep_margin;

  // The doubly-over-relaxed tuning on the p <= q instance.
  const double a2_gap2a = 2.0 / (1.0 + std::sin(2.0 * tf));
  const double gap2a_gamma = subdominant_magnitude(
      map_to_gap_eigenvalues(full_spectrum(4, 1, 2, 0, pa, 2.0, a2_gap2a), 1.0));
  const double gap2a_predicted =
      (std::cos(tf) - std::sin(tf)) / (std::cos(tf) + std::sin(tf));

  json doc;
  doc["kind"] = "param_sweep";
  doc["config"] = config_echo(config);
  doc["predicted"] = {{"gamma_star", gstar}, {"alpha_star", astar}};
  doc["measured"] = {{"grid_minimum", best},
                     {"minimizer", {best_i * step, best_j * step, best_k * step}},
                     {"evaluated", evaluated},
                     {"skipped_invalid", skipped_invalid},
                     {"min_over_other_points", min_other},
                     {"gap2alpha_gamma", gap2a_gamma}};
  doc["checks"] = json::array();
  doc["checks"].push_back(check("minimizer_is_nearest_to_optimal", minimizer_at_optimal,
                                {{"minimizer", {best_i * step, best_j * step, best_k * step}},
                                 {"expected", {1.0, i_star * step, i_star * step}}}));
  doc["checks"].push_back(check("all_other_points_exceed_gamma_star", strict,
                                {{"min_over_other_points", min_other},
                                 {"gamma_star", gstar},
                                 {"margin", config.tolerances.sweep_margin}}));
  doc["checks"].push_back(check("gap2alpha_rate",
                                std::abs(gap2a_gamma - gap2a_predicted) <= 1e-10,
                                {{"measured", gap2a_gamma}, {"predicted", gap2a_predicted}}));
  doc["trace_summary"] = json{{"iterations", 0}};
  return finish("param_sweep", std::move(doc), {});
}

ExperimentResult run_adaptive_theta(const ExperimentConfig& config) {
  const auto& prob = std::get<AdaptiveProblem>(config.problem);

  const Instance inst =
      prob.instance == "discs"
          ? build_convex_instance(ConvexProblem{"disc_disc", prob.centers_distance, 0.5})
          : build_subspace_instance(prob.subspace, config.seed);
  Vector x0;
  if (config.x0.point) {
    x0 = *config.x0.point;
  } else if (prob.instance == "discs") {
    const Vector w =
        (boundary_normal(inst.a, inst.x_star) + boundary_normal(inst.b, inst.x_star))
            .normalized();
    x0 = inst.x_star + config.x0.distance * w;
  } else {
    x0 = inst.x_star + config.x0.distance * seeded_unit(inst.x_star.size(), config.seed);
  }

  const auto [trace, estimates] = adaptive_theta_run(inst.a, inst.b, x0, config.stop);

  json doc;
  doc["kind"] = "adaptive_theta";
  doc["config"] = config_echo(config);
  doc["predicted"] = {{"theta_f", inst.theta_f ? json(*inst.theta_f) : json(nullptr)}};
  json est = json::array();
  const std::size_t tail = std::min<std::size_t>(estimates.size(), 10);
  for (std::size_t i = estimates.size() - tail; i < estimates.size(); ++i)
    est.push_back(estimates[i]);
  doc["measured"] = {{"estimates_tail", est},
                     {"estimate_count", estimates.size()},
                     {"final_estimate",
                      estimates.empty() ? json(nullptr) : json(estimates.back())}};
  doc["trace_summary"] = trace_summary(trace);
  doc["checks"] = json::array();
  doc["checks"].push_back(check("converged", trace.converged, {}));
  const bool theta_ok =
      !estimates.empty() && inst.theta_f &&
      std::abs(estimates.back() - *inst.theta_f) <= config.tolerances.adaptive;
  doc["checks"].push_back(
      check("theta_estimate_converged", theta_ok,
            {{"final_estimate", estimates.empty() ? json(nullptr) : json(estimates.back())},
             {"true_theta_f", inst.theta_f ? json(*inst.theta_f) : json(nullptr)},
             {"tolerance", config.tolerances.adaptive}}));
  return finish("adaptive_theta", std::move(doc),
                make_rows(trace, inst.a, inst.b, trace.last()));
}

// ---------------------------------------------------------------------------
// Config parsing and serialization
// ---------------------------------------------------------------------------

json config_echo(const ExperimentConfig& config) {
  json problem;
  std::visit(
      [&](const auto& p) {
        using T = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<T, SubspaceProblem>) {
          problem = {{"n", p.n}, {"p", p.p}, {"q", p.q}, {"angles", p.angles}};
        } else if constexpr (std::is_same_v<T, ManifoldProblem>) {
          problem = {{"pair", p.pair}, {"angle", p.angle}};
        } else if constexpr (std::is_same_v<T, ConvexProblem>) {
          problem = {{"pair", p.pair},
                     {"centers_distance", p.centers_distance},
                     {"line_offset", p.line_offset}};
        } else if constexpr (std::is_same_v<T, CounterexampleProblem>) {
          problem = {{"iters", p.iters}};
        } else if constexpr (std::is_same_v<T, SpectrumProblem>) {
          problem = {{"instances", p.instances}, {"max_n", p.max_n}};
        } else if constexpr (std::is_same_v<T, SweepProblem>) {
          problem = {{"theta_f", p.theta_f}, {"grid_step", p.grid_step}};
        } else {
          problem = {{"instance", p.instance},
                     {"centers_distance", p.centers_distance},
                     {"subspace",
                      {{"n", p.subspace.n},
                       {"p", p.subspace.p},
                       {"q", p.subspace.q},
                       {"angles", p.subspace.angles}}}};
        }
      },
      config.problem);

  json params;
  switch (config.params.mode) {
    case ParamsSpec::Mode::Optimal: params = "optimal"; break;
    case ParamsSpec::Mode::Kappa: params = "kappa:" + std::to_string(config.params.kappa); break;
    default:
      params = {{"alpha", config.params.alpha},
                {"alpha1", config.params.alpha1},
                {"alpha2", config.params.alpha2}};
  }

  json x0;
  if (config.x0.point) {
    json pt = json::array();
    for (Eigen::Index i = 0; i < config.x0.point->size(); ++i)
      pt.push_back((*config.x0.point)(i));
    x0 = {{"point", pt}};
  } else {
    x0 = {{"distance", config.x0.distance}};
  }

  return json{{"kind", config.kind()},
              {"seed", config.seed},
              {"problem", problem},
              {"params", params},
              {"x0", x0},
              {"stop", {{"tol", config.stop.tol}, {"max_iter", config.stop.max_iter}}},
              {"window_fraction", config.window_fraction}};
}

ParamsSpec parse_params(const json& p) {
  ParamsSpec spec;
  if (p.is_string()) {
    const std::string s = p.get<std::string>();
    if (s == "optimal") {
      spec.mode = ParamsSpec::Mode::Optimal;
    } else if (s.rfind("kappa:", 0) == 0) {
      spec.mode = ParamsSpec::Mode::Kappa;
      spec.kappa = std::stod(s.substr(6));
    } else {
      throw PreconditionError("config: unknown params spec '" + s + "'");
    }
  } else if (p.is_array()) {
    require(p.size() == 3, "config: params array must have 3 entries");
    spec.mode = ParamsSpec::Mode::Explicit;
    spec.alpha = p[0].get<double>();
    spec.alpha1 = p[1].get<double>();
    spec.alpha2 = p[2].get<double>();
  } else {
    spec.mode = ParamsSpec::Mode::Explicit;
    spec.alpha = p.value("alpha", 1.0);
    spec.alpha1 = p.value("alpha1", 1.0);
    spec.alpha2 = p.value("alpha2", 1.0);
  }
  return spec;
}

}  // namespace

GapParams ParamsSpec::resolve(std::optional<double> theta_f) const {
  switch (mode) {
    case Mode::Optimal: return optimal_params(theta_f).params;
    case Mode::Kappa: return kappa_to_params(kappa);
    default: return classify_params(alpha, alpha1, alpha2);
  }
}

std::string ExperimentConfig::kind() const {
  switch (problem.index()) {
    case 0: return "subspace_rate";
    case 1: return "manifold_rate";
    case 2: return "convex_rate";
    case 3: return "counterexample";
    case 4: return "spectrum_check";
    case 5: return "param_sweep";
    default: return "adaptive_theta";
  }
}

ExperimentConfig parse_config_text(const std::string& text) {
  const json doc = json::parse(text);
  ExperimentConfig config;
  const std::string kind = doc.at("kind").get<std::string>();
  const json prob = doc.value("problem", json::object());

  if (kind == "subspace_rate") {
    SubspaceProblem p;
    p.n = prob.value("n", 20);
    p.p = prob.value("p", 1);
    p.q = prob.value("q", 1);
    p.angles = prob.value("angles", std::vector<double>{kPi / 6});
    config.problem = p;
    config.x0.distance = 1.0;
  } else if (kind == "manifold_rate") {
    ManifoldProblem p;
    p.pair = prob.value("pair", std::string("circle_line"));
    p.angle = prob.value("angle", kPi / 6);
    config.problem = p;
  } else if (kind == "convex_rate") {
    ConvexProblem p;
    p.pair = prob.value("pair", std::string("disc_disc"));
    p.centers_distance = prob.value("centers_distance", 1.9);
    p.line_offset = prob.value("line_offset", 0.5);
    config.problem = p;
  } else if (kind == "counterexample") {
    CounterexampleProblem p;
    p.iters = prob.value("iters", 60);
    config.problem = p;
  } else if (kind == "spectrum_check") {
    SpectrumProblem p;
    p.instances = prob.value("instances", 100);
    p.max_n = prob.value("max_n", 40);
    config.problem = p;
  } else if (kind == "param_sweep") {
    SweepProblem p;
    p.theta_f = prob.value("theta_f", kPi / 6);
    p.grid_step = prob.value("grid_step", 0.05);
    config.problem = p;
  } else if (kind == "adaptive_theta") {
    AdaptiveProblem p;
    p.instance = prob.value("instance", std::string("subspace"));
    p.centers_distance = prob.value("centers_distance", 1.9);
    if (prob.contains("subspace")) {
      const json sub = prob["subspace"];
      p.subspace.n = sub.value("n", 4);
      p.subspace.p = sub.value("p", 1);
      p.subspace.q = sub.value("q", 1);
      p.subspace.angles = sub.value("angles", std::vector<double>{kPi / 6});
    }
    config.problem = p;
    if (p.instance == "subspace") config.x0.distance = 1.0;
  } else {
    throw PreconditionError("config: unknown experiment kind '" + kind + "'");
  }

  config.seed = doc.value("seed", 1u);
  if (doc.contains("params")) config.params = parse_params(doc["params"]);
  if (doc.contains("x0")) {
    const json x0 = doc["x0"];
    if (x0.contains("point")) {
      const auto pt = x0["point"].get<std::vector<double>>();
      Vector v(static_cast<Eigen::Index>(pt.size()));
      for (std::size_t i = 0; i < pt.size(); ++i) v(static_cast<Eigen::Index>(i)) = pt[i];
      config.x0.point = v;
    }
    config.x0.distance = x0.value("distance", config.x0.distance);
  }
  if (doc.contains("stop")) {
    config.stop.tol = doc["stop"].value("tol", config.stop.tol);
    config.stop.max_iter = doc["stop"].value("max_iter", config.stop.max_iter);
  }
  if (doc.contains("tolerances")) {
    const json t = doc["tolerances"];
    config.tolerances.rate = t.value("rate", config.tolerances.rate);
    config.tolerances.jacobian = t.value("jacobian", config.tolerances.jacobian);
    config.tolerances.finite_iters = t.value("finite_iters", config.tolerances.finite_iters);
    config.tolerances.spectrum = t.value("spectrum", config.tolerances.spectrum);
    config.tolerances.sigma_slack = t.value("sigma_slack", config.tolerances.sigma_slack);
    config.tolerances.sweep_margin = t.value("sweep_margin", config.tolerances.sweep_margin);
    config.tolerances.beta = t.value("beta", config.tolerances.beta);
    config.tolerances.adaptive = t.value("adaptive", config.tolerances.adaptive);
  }
  config.window_fraction = doc.value("window_fraction", config.window_fraction);
  config.out_stem = doc.value("out_stem", std::string());
  if (config.out_stem.empty()) config.out_stem = kind;
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw PreconditionError("cannot open config file '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  switch (config.problem.index()) {
    case 0: return run_subspace_rate(config);
    case 1: return run_manifold_rate(config);
    case 2: return run_convex_rate(config);
    case 3: return run_counterexample(config);
    case 4: return run_spectrum_check(config);
    case 5: return run_param_sweep(config);
    default: return run_adaptive_theta(config);
  }
}

void write_result_files(const ExperimentResult& result, const std::string& out_dir,
                        const std::string& stem) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  // The timestamp is the only nondeterministic field, isolated in one key.
  const std::time_t now = std::time(nullptr);
  char stamp[64];
  std::strftime(stamp, sizeof(stamp), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  json wrapped;
  wrapped["schema"] = "gapkit-result-v1";
  wrapped["generated_at"] = stamp;
  const json doc = json::parse(result.document);
  for (const auto& [key, value] : doc.items()) wrapped[key] = value;

  const fs::path json_path = fs::path(out_dir) / (stem + ".json");
  const fs::path json_tmp = fs::path(out_dir) / (stem + ".json.tmp");
  {
    std::ofstream out(json_tmp);
    out << wrapped.dump(2) << "\n";
  }
  fs::rename(json_tmp, json_path);

  const fs::path csv_path = fs::path(out_dir) / (stem + ".csv");
  const fs::path csv_tmp = fs::path(out_dir) / (stem + ".csv.tmp");
  {
    std::ofstream out(csv_tmp);
    out << "k,dist_to_solution,dist_A,dist_B,face_label\n";
    char line[256];
    for (const auto& row : result.trace_rows) {
      std::snprintf(line, sizeof(line), "%d,%.17g,%.17g,%.17g,", row.k, row.dist_solution,
                    row.dist_a, row.dist_b);
      out << line << row.face << "\n";
    }
  }
  fs::rename(csv_tmp, csv_path);
}

ExperimentConfig builtin_config(const std::string& name) {
  ExperimentConfig config;
  config.seed = 1;
  if (name == "subspace_rate_optimal" || name == "subspace_rate") {
    config.problem = SubspaceProblem{20, 1, 1, {kPi / 6}};
    config.params.mode = ParamsSpec::Mode::Optimal;
    config.x0.distance = 1.0;
    config.stop = {1e-13, 100000};
  } else if (name == "subspace_rate_ap") {
    config.problem = SubspaceProblem{20, 1, 1, {kPi / 6}};
    config.params = {ParamsSpec::Mode::Explicit, 1.0, 1.0, 1.0, 0.0};
    config.x0.distance = 1.0;
    config.stop = {1e-13, 100000};
  } else if (name == "subspace_rate_orthogonal") {
    config.problem = SubspaceProblem{20, 1, 1, {kPi / 2}};
    config.params = {ParamsSpec::Mode::Explicit, 1.0, 1.0, 1.0, 0.0};
    config.x0.distance = 1.0;
    config.tolerances.finite_iters = 3;
  } else if (name == "manifold_rate_ap" || name == "manifold_rate") {
    config.problem = ManifoldProblem{"circle_line", kPi / 6};
    config.params = {ParamsSpec::Mode::Explicit, 1.0, 1.0, 1.0, 0.0};
    config.stop = {1e-13, 100000};
  } else if (name == "manifold_rate_optimal") {
    config.problem = ManifoldProblem{"circle_line", kPi / 6};
    config.params.mode = ParamsSpec::Mode::Optimal;
    config.stop = {1e-13, 100000};
  } else if (name == "manifold_rate_sphere") {
    config.problem = ManifoldProblem{"sphere_plane", 0.5};
    config.params = {ParamsSpec::Mode::Explicit, 1.0, 1.0, 1.0, 0.0};
    config.stop = {1e-13, 100000};
  } else if (name == "manifold_rate_parabola") {
    config.problem = ManifoldProblem{"parabola_line", 0.0};
    config.params = {ParamsSpec::Mode::Explicit, 1.0, 1.0, 1.0, 0.0};
    config.tolerances.finite_iters = 12;
  } else if (name == "convex_rate_acute" || name == "convex_rate") {
    config.problem = ConvexProblem{"disc_disc", 1.9, 0.5};
    config.params = {ParamsSpec::Mode::Explicit, 1.0, 1.2, 1.2, 0.0};
    config.stop = {1e-13, 100000};
  } else if (name == "convex_rate_obtuse") {
    config.problem = ConvexProblem{"disc_disc", 1.0, 0.5};
    config.params = {ParamsSpec::Mode::Explicit, 1.0, 1.5, 1.5, 0.0};
    config.x0.distance = 0.3;
    config.tolerances.finite_iters = 50;
  } else if (name == "convex_rate_disc_line") {
    config.problem = ConvexProblem{"disc_line", 1.9, 0.5};
    config.params = {ParamsSpec::Mode::Explicit, 1.0, 1.0, 1.0, 0.0};
    config.stop = {1e-13, 100000};
  } else if (name == "counterexample") {
    config.problem = CounterexampleProblem{60};
  } else if (name == "spectrum_check") {
    config.problem = SpectrumProblem{100, 40};
  } else if (name == "param_sweep") {
    config.problem = SweepProblem{kPi / 6, 0.05};
  } else if (name == "adaptive_theta_subspace" || name == "adaptive_theta") {
    AdaptiveProblem p;
    p.instance = "subspace";
    p.subspace = SubspaceProblem{4, 1, 1, {kPi / 6}};
    config.problem = p;
    config.x0.distance = 1.0;
    config.tolerances.adaptive = 1e-6;
  } else if (name == "adaptive_theta_discs") {
    AdaptiveProblem p;
    p.instance = "discs";
    p.centers_distance = 1.9;
    config.problem = p;
    config.x0.distance = 1e-2;
    config.tolerances.adaptive = 1e-3;
  } else {
    throw PreconditionError("unknown builtin config '" + name + "'");
  }
  if (config.out_stem.empty()) config.out_stem = name;
  return config;
}

}  // namespace gapkit
