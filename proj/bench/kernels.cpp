// Serial reference vs OpenMP kernel for each parallel routine.

#include <benchmark/benchmark.h>

#include "polyquant/geom.hpp"
#include "polyquant/sections.hpp"
#include "polyquant/toric.hpp"

using namespace polyquant;

namespace {

ToricBundleModel toric_model() {
  return ToricBundleModel({{3, 2, 4}, {2, 4, 1}, {4, 1, 3}}, {1, -1, 2},
                          {Rational(1, 2), Rational(3), Rational(-1)});
}

AbelianRep standard_rep(std::size_t l) {
  std::vector<QVector> weights;
  for (std::size_t a = 0; a < l; ++a) {
    QVector e(l, Rational(0));
    e[a] = 1;
    weights.push_back(e);
  }
  return AbelianRep::diagonal(l, weights);
}

template <long (*Fn)(const ToricBundleModel&, long)>
void toric_kernel(benchmark::State& state) {
  auto model = toric_model();
  for (auto _ : state) benchmark::DoNotOptimize(Fn(model, state.range(0)));
}

template <SweepReport (*Fn)(const CanonicalModel&, const AbelianRep&, int)>
void sweep_kernel(benchmark::State& state) {
  std::size_t k = static_cast<std::size_t>(state.range(0));
  CanonicalModel model(k, 2);
  auto rep = standard_rep(2);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(model, rep, 3));
}

template <std::vector<Integer> (*Fn)(const ManifoldPresentation&, const std::vector<long>&)>
void rr_kernel(benchmark::State& state) {
  auto model = ManifoldPresentation::from_degrees(
      {{Integer(2), Integer(3), Integer(1)}, {Integer(1), Integer(2), Integer(4)}});
  std::vector<long> ks;
  for (long k = 1; k <= state.range(0); ++k) ks.push_back(k);
  for (auto _ : state) benchmark::DoNotOptimize(Fn(model, ks));
}

}  // namespace

BENCHMARK(toric_kernel<holomorphic_dim_serial>)->Name("holomorphic_dim/serial")->Arg(8)->Arg(16);
BENCHMARK(toric_kernel<holomorphic_dim>)->Name("holomorphic_dim/omp")->Arg(8)->Arg(16);
BENCHMARK(toric_kernel<invariant_dim_serial>)->Name("invariant_dim/serial")->Arg(8)->Arg(16);
BENCHMARK(toric_kernel<invariant_dim>)->Name("invariant_dim/omp")->Arg(8)->Arg(16);
BENCHMARK(sweep_kernel<commutator_sweep_serial>)->Name("commutator_sweep/serial")->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(sweep_kernel<commutator_sweep>)->Name("commutator_sweep/omp")->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond);
BENCHMARK(rr_kernel<rr_table_serial>)->Name("rr_table/serial")->Arg(50)->Arg(200);
BENCHMARK(rr_kernel<rr_table>)->Name("rr_table/omp")->Arg(50)->Arg(200);

BENCHMARK_MAIN();
