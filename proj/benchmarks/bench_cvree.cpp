#include "cvree/fock.hpp"
#include "cvree/gaussian.hpp"
#include "cvree/gree.hpp"
#include "cvree/relent.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace cvree;

namespace {

Matrix sample_cm(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> gam(0.6, 2.5), ang(-3.0, 3.0), sq(-0.5, 0.5);
  Vector d(2 * n);
  for (int j = 0; j < n; ++j) d[j] = d[n + j] = gam(rng);
  Matrix s = Matrix::Identity(2 * n, 2 * n);
  for (int k = 0; k < 3 * n; ++k) {
    const int i = static_cast<int>(rng() % static_cast<unsigned>(n));
    const double r[] = {ang(rng)};
    s = elementary_transform(TransformKind::local_rotation, r, {i, std::nullopt}, n).matrix() * s;
    if (n > 1) {
      const double t[] = {sq(rng)};
      s = elementary_transform(TransformKind::two_mode_squeeze_qq, t, {i, (i + 1) % n}, n).matrix() * s;
    }
  }
  return s * d.asDiagonal() * s.transpose();
}

void BM_Williamson(benchmark::State& state) {
  const Matrix a = sample_cm(static_cast<int>(state.range(0)), 1);
  for (auto _ : state) benchmark::DoNotOptimize(williamson(a));
}
BENCHMARK(BM_Williamson)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_CmToEm(benchmark::State& state) {
  const CovarianceMatrix a(sample_cm(static_cast<int>(state.range(0)), 2));
  for (auto _ : state) benchmark::DoNotOptimize(cm_to_em(a));
}
BENCHMARK(BM_CmToEm)->Arg(1)->Arg(2)->Arg(4)->Arg(8);

void BM_RelativeEntropy(benchmark::State& state) {
  const CovarianceMatrix a(sample_cm(2, 3));
  const ExponentialMatrix m = cm_to_em(CovarianceMatrix(sample_cm(2, 4)));
  for (auto _ : state) benchmark::DoNotOptimize(relative_entropy(a, m));
}
BENCHMARK(BM_RelativeEntropy);

void BM_BorderCandidate(benchmark::State& state) {
  const CovarianceMatrix rho = two_mode_squeezed_thermal(0.8, 0.7, 0.5);
  const BorderParams p = make_border_params(BorderType::I, 0.9, 0.8, 0.2);
  for (auto _ : state) benchmark::DoNotOptimize(border_candidate_value(rho, p));
}
BENCHMARK(BM_BorderCandidate);

void BM_Gree(benchmark::State& state) {
  const CovarianceMatrix rho = two_mode_squeezed_thermal(0.8, 0.7, 0.5);
  GreeOptions o;
  o.starts = static_cast<int>(state.range(0));
  o.spot_check = false;
  for (auto _ : state) benchmark::DoNotOptimize(gree(rho, o));
}
BENCHMARK(BM_Gree)->Arg(8)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_GreeTmst(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(gree_tmst(1.5, 0.9));
}
BENCHMARK(BM_GreeTmst)->Unit(benchmark::kMicrosecond);

void BM_FockRelativeEntropy(benchmark::State& state) {
  const int dim = static_cast<int>(state.range(0));
  const FockDensity rho =
      fock_apply_squeeze(fock_thermal_product({0.8, 0.7}, dim), FockSqueeze::two_mode, 0.4, {0, 1});
  const FockDensity sigma = fock_thermal_product({1.0, 1.2}, dim);
  for (auto _ : state) benchmark::DoNotOptimize(fock_relative_entropy(rho, sigma));
}
BENCHMARK(BM_FockRelativeEntropy)->Arg(15)->Arg(30)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
