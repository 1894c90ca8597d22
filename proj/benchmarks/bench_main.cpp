#include <benchmark/benchmark.h>

#include <numbers>
#include <random>

#include "saext/saext.hpp"

using namespace saext;

namespace {

const IntervalSet& two_intervals() {
  static const IntervalSet g({{0.0, 1.0}, {0.0, 3.0}});
  return g;
}

BoundaryCondition random_condition(int n) {
  std::mt19937_64 rng(42);
  return BoundaryCondition::from_matrix(random_unitary(2 * n, rng), Ordering::Endpoint);
}

void BM_Assemble(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BoundaryCondition bc = random_condition(2);
  const Potential v = Potential::constant({0.0, 2.0});
  for (auto _ : state) {
    const Mesh mesh = build_mesh(two_intervals(), n);
    const BoundaryValues bv = solve_boundary_values(assemble_boundary_system(bc, mesh));
    benchmark::DoNotOptimize(assemble_pencil(mesh, bv, v));
  }
}
BENCHMARK(BM_Assemble)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BoundaryCondition bc = random_condition(2);
  const Mesh mesh = build_mesh(two_intervals(), n);
  const BoundaryValues bv = solve_boundary_values(assemble_boundary_system(bc, mesh));
  const Pencil pencil = assemble_pencil(mesh, bv, Potential::constant({0.0, 2.0}));
  for (auto _ : state) benchmark::DoNotOptimize(solve_pencil(pencil));
}
BENCHMARK(BM_Solve)->Arg(100)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_OracleScan(benchmark::State& state) {
  const BoundaryCondition bc = random_condition(2);
  SpectrumOptions o;
  o.lambda_min = -5.0;
  o.lambda_max = 5.0 + static_cast<double>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(find_spectrum(bc, Potential::constant({0.0, 2.0}), two_intervals(), o));
}
BENCHMARK(BM_OracleScan)->Arg(10)->Arg(50)->Unit(benchmark::kMillisecond);

void BM_OracleOdeTraces(benchmark::State& state) {
  const Potential v = Potential::callable([](int, double x) { return x * x; });
  for (auto _ : state)
    benchmark::DoNotOptimize(fundamental_traces(v, two_intervals(), 3.0, 1.0, FundamentalBasis::CosSin));
}
BENCHMARK(BM_OracleOdeTraces)->Unit(benchmark::kMicrosecond);

}  // namespace
BENCHMARK_MAIN();
