#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "densecode/residual.hpp"
#include "densecode/search.hpp"

using namespace densecode;

namespace {

std::vector<double> spectrum_for(int d) {
  std::vector<double> v;
  double total = 0.0;
  for (int i = 0; i < d; ++i) {
    v.push_back(1.0 + 0.1 * (d - i));
    total += v.back();
  }
  for (double& x : v) x /= total;
  return v;
}

void BM_Gram(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const EncodingScheme scheme = weyl_scheme(d);
  const SchmidtSpectrum lambda(spectrum_for(d));
  for (auto _ : state) benchmark::DoNotOptimize(gram(scheme, lambda));
}
BENCHMARK(BM_Gram)->DenseRange(2, 6);

void BM_ObjectiveAndGradient(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const int n = d * d - 1;
  const SchmidtSpectrum lambda(spectrum_for(d));
  const std::vector<double> params = initial_params(1, d, n);
  std::vector<double> grad;
  for (auto _ : state) benchmark::DoNotOptimize(objective_and_gradient(params, lambda, grad));
}
BENCHMARK(BM_ObjectiveAndGradient)->DenseRange(2, 5);

void BM_UnitaryFromParams(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const std::vector<double> params = initial_params(2, d, 1);
  for (auto _ : state) benchmark::DoNotOptimize(unitary_from_params(params));
}
BENCHMARK(BM_UnitaryFromParams)->DenseRange(2, 8);

void BM_PartialTrace(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  ComplexMatrix m(d * d, d * d);
  for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = Complex(g(rng), g(rng));
  const ComplexMatrix rho = m * m.adjoint();
  for (auto _ : state) benchmark::DoNotOptimize(partial_trace(rho, Subsystem::A));
}
BENCHMARK(BM_PartialTrace)->DenseRange(2, 8);

void BM_Certify(benchmark::State& state) {
  const int d = static_cast<int>(state.range(0));
  const SchmidtSpectrum lambda(spectrum_for(d));
  for (auto _ : state) benchmark::DoNotOptimize(certify_impossibility(lambda));
}
BENCHMARK(BM_Certify)->DenseRange(2, 6);

}  // namespace
BENCHMARK_MAIN();
