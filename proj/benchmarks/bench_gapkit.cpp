#include <benchmark/benchmark.h>

#include "gapkit/engine.hpp"
#include "gapkit/spectral.hpp"
#include "gapkit/subspace.hpp"

using namespace gapkit;

namespace {

std::vector<double> ladder(int count) {
  std::vector<double> angles(count);
  for (int i = 0; i < count; ++i) angles[i] = 0.1 + 1.3 * i / std::max(1, count - 1);
  return angles;
}

void BM_PrincipalAngles(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const int k = n / 8;
  auto [u, v] = construct_pair_with_angles(n, k, k, ladder(k), 1);
  for (auto _ : state) {
    auto pa = principal_angles(u, v);
    benchmark::DoNotOptimize(pa.angles.data());
  }
}
BENCHMARK(BM_PrincipalAngles)->Arg(16)->Arg(64)->Arg(256);

void BM_AssembleAndSpectrum(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto [u, v] = construct_pair_with_angles(n, 3, 4, ladder(3), 2);
  const GapParams params = classify_params(1.0, 1.4, 1.3);
  for (auto _ : state) {
    const Matrix s = assemble_gap_matrix(u, v, params);
    benchmark::DoNotOptimize(subdominant_magnitude(s));
  }
}
BENCHMARK(BM_AssembleAndSpectrum)->Arg(10)->Arg(40)->Arg(100);

void BM_GapRun(benchmark::State& state) {
  auto [u, v] = construct_pair_with_angles(20, 1, 1, {0.5235987755982988}, 3);
  const ProjectableSet a{LinearSubspaceSet(u)};
  const ProjectableSet b{LinearSubspaceSet(v)};
  const GapParams params = classify_params(1.0, 1.0, 1.0);
  Vector x0 = Vector::Zero(20);
  x0(0) = 0.3;
  x0(5) = -1.1;
  x0(13) = 0.7;
  for (auto _ : state) {
    const auto trace = run(a, b, params, x0, {1e-12, 100000});
    benchmark::DoNotOptimize(trace.iterates.size());
  }
}
BENCHMARK(BM_GapRun);

void BM_SpectrumMatch(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  auto [u, v] = construct_pair_with_angles(n, 4, 5, ladder(4), 4);
  const GapParams params = classify_params(0.8, 1.7, 0.9);
  const Matrix s = assemble_gap_matrix(u, v, params);
  const auto numeric = eigenvalues_of(s);
  for (auto _ : state) {
    benchmark::DoNotOptimize(spectrum_match_distance(numeric, numeric));
  }
}
BENCHMARK(BM_SpectrumMatch)->Arg(16)->Arg(40);

}  // namespace

BENCHMARK_MAIN();
