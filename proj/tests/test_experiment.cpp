#include "doctest.h"

#include "json.hpp"

#include <filesystem>
#include <fstream>

#include "gapkit/experiment.hpp"

using namespace gapkit;
using nlohmann::json;

namespace {

json doc_of(const ExperimentResult& result) { return json::parse(result.document); }

}  // namespace

TEST_CASE("config parsing covers the documented forms") {
  const auto config = parse_config_text(R"({
    "kind": "subspace_rate",
    "seed": 7,
    "problem": {"n": 12, "p": 2, "q": 3, "angles": [0.2, 0.9]},
    "params": [1.0, 1.25, 1.25],
    "x0": {"distance": 0.5},
    "stop": {"tol": 1e-10, "max_iter": 5000},
    "tolerances": {"rate": 0.05},
    "out_stem": "demo"
  })");
  CHECK(config.kind() == "subspace_rate");
  CHECK(config.seed == 7);
  const auto& prob = std::get<SubspaceProblem>(config.problem);
  CHECK(prob.n == 12);
  CHECK(prob.angles.size() == 2);
  CHECK(config.params.mode == ParamsSpec::Mode::Explicit);
  CHECK(config.params.alpha1 == 1.25);
  CHECK(config.x0.distance == 0.5);
  CHECK(config.stop.tol == 1e-10);
  CHECK(config.tolerances.rate == 0.05);
  CHECK(config.out_stem == "demo");

  const auto optimal = parse_config_text(R"({"kind":"manifold_rate","params":"optimal"})");
  CHECK(optimal.params.mode == ParamsSpec::Mode::Optimal);

  const auto kappa = parse_config_text(R"({"kind":"convex_rate","params":"kappa:2.0"})");
  CHECK(kappa.params.mode == ParamsSpec::Mode::Kappa);
  CHECK(kappa.params.kappa == 2.0);
  CHECK(kappa.params.resolve(std::nullopt).alpha1 ==
        doctest::Approx(8.0 / (4.0 + 2.0 * std::sqrt(3.0))));

  const auto with_point =
      parse_config_text(R"({"kind":"counterexample","x0":{"point":[1.0,-0.5]}})");
  REQUIRE(with_point.x0.point.has_value());
  CHECK((*with_point.x0.point)(1) == -0.5);

  CHECK_THROWS_AS(parse_config_text(R"({"kind":"bogus"})"), PreconditionError);
  CHECK_THROWS_AS(parse_config_text(R"({"kind":"subspace_rate","params":"fastest"})"),
                  PreconditionError);
}

TEST_CASE("every builtin experiment passes") {
  for (const char* name :
       {"subspace_rate_optimal", "subspace_rate_ap", "subspace_rate_orthogonal",
        "manifold_rate_ap", "manifold_rate_optimal", "manifold_rate_sphere",
        "manifold_rate_parabola", "convex_rate_acute", "convex_rate_obtuse",
        "convex_rate_disc_line", "counterexample", "spectrum_check", "param_sweep",
        "adaptive_theta_subspace", "adaptive_theta_discs"}) {
    CAPTURE(name);
    const auto result = run_experiment(builtin_config(name));
    CHECK(result.pass);
  }
}

TEST_CASE("subspace rate document carries the expected quantities") {
  const auto result = run_experiment(builtin_config("subspace_rate_ap"));
  const json doc = doc_of(result);
  CHECK(doc["predicted"]["gamma"].get<double>() == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(doc["predicted"]["sigma"].get<double>() ==
        doctest::Approx(std::cos(0.52359877559829887)).epsilon(1e-9));
  CHECK(std::abs(doc["measured"]["rate"].get<double>() - 0.75) < 0.02);
  CHECK(doc["verdict"] == "pass");
  CHECK(result.trace_rows.size() >= 10);
}

TEST_CASE("counterexample document reproduces the figure") {
  const auto result = run_experiment(builtin_config("counterexample"));
  const json doc = doc_of(result);
  CHECK(doc["measured"]["p1"][0].get<double>() == doctest::Approx(-0.3465).epsilon(1e-3));
  CHECK(doc["measured"]["p1"][1].get<double>() == doctest::Approx(-0.2755).epsilon(1e-3));
  CHECK(doc["measured"]["max_beta_deviation"].get<double>() < 1e-10);
  CHECK(doc["predicted"]["beta"].get<double>() ==
        doctest::Approx((6.0 * (1.0 + std::sqrt(73.0)) / 12.0 - 2.0) / 8.0).epsilon(1e-14));
  // Trace rows alternate faces.
  CHECK(result.trace_rows[1].face == "right|affine");
  CHECK(result.trace_rows[2].face == "left|affine");
}

TEST_CASE("obtuse discs terminate finitely, acute discs identify boundaries") {
  const auto obtuse = run_experiment(builtin_config("convex_rate_obtuse"));
  const json obtuse_doc = doc_of(obtuse);
  CHECK(obtuse_doc["trace_summary"]["stop_reason"] == "finite_identification");
  CHECK(obtuse_doc["measured"]["iterations"].get<int>() <= 50);

  const auto acute = run_experiment(builtin_config("convex_rate_acute"));
  const json acute_doc = doc_of(acute);
  CHECK(acute_doc["predicted"]["classification"] == "acute");
  bool identification = false;
  for (const auto& c : acute_doc["checks"])
    if (c["name"] == "boundary_identification") identification = c["pass"].get<bool>();
  CHECK(identification);
}

TEST_CASE("experiments are deterministic per config and seed") {
  const auto a = run_experiment(builtin_config("subspace_rate_ap"));
  const auto b = run_experiment(builtin_config("subspace_rate_ap"));
  CHECK(a.document == b.document);
  REQUIRE(a.trace_rows.size() == b.trace_rows.size());
  for (std::size_t i = 0; i < a.trace_rows.size(); ++i) {
    CHECK(a.trace_rows[i].dist_solution == b.trace_rows[i].dist_solution);
    CHECK(a.trace_rows[i].face == b.trace_rows[i].face);
  }

  auto other_seed = builtin_config("subspace_rate_ap");
  other_seed.seed = 2;
  const auto c = run_experiment(other_seed);
  CHECK(c.document != a.document);
}

TEST_CASE("result files are written atomically with the documented layout") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "gapkit_test_out";
  fs::remove_all(dir);

  auto config = builtin_config("counterexample");
  const auto result = run_experiment(config);
  write_result_files(result, dir.string(), config.out_stem);

  const fs::path json_path = dir / "counterexample.json";
  const fs::path csv_path = dir / "counterexample.csv";
  REQUIRE(fs::exists(json_path));
  REQUIRE(fs::exists(csv_path));
  CHECK_FALSE(fs::exists(dir / "counterexample.json.tmp"));

  std::ifstream jin(json_path);
  json doc;
  jin >> doc;
  CHECK(doc["schema"] == "gapkit-result-v1");
  CHECK(doc.contains("generated_at"));
  CHECK(doc["verdict"] == "pass");

  std::ifstream cin(csv_path);
  std::string header;
  std::getline(cin, header);
  CHECK(header == "k,dist_to_solution,dist_A,dist_B,face_label");
  int rows = 0;
  for (std::string line; std::getline(cin, line);)
    if (!line.empty()) ++rows;
  CHECK(rows == static_cast<int>(result.trace_rows.size()));

  // Byte-identical rewrite modulo the timestamp header line.
  write_result_files(result, dir.string(), "again");
  std::ifstream j1(json_path), j2(dir / "again.json");
  std::string l1, l2;
  int diff = 0;
  while (std::getline(j1, l1) && std::getline(j2, l2))
    if (l1 != l2) ++diff;
  CHECK(diff <= 1);  // only generated_at may differ
  fs::remove_all(dir);
}

TEST_CASE("spectrum batch reports failing seeds on demand") {
  auto config = builtin_config("spectrum_check");
  config.problem = SpectrumProblem{25, 24};
  const auto result = run_experiment(config);
  CHECK(result.pass);
  const json doc = doc_of(result);
  CHECK(doc["measured"]["failing_instances"].empty());
  CHECK(doc["measured"]["worst_match_distance"].get<double>() < 1e-8);
}

TEST_CASE("sweep rejects out-of-range knobs") {
  auto config = builtin_config("param_sweep");
  config.problem = SweepProblem{2.0, 0.05};  // theta_f beyond pi/2
  CHECK_THROWS_AS(run_experiment(config), PreconditionError);
}
