#include <benchmark/benchmark.h>

#include "minen/baselines.hpp"
#include "minen/clustering.hpp"
#include "minen/network.hpp"

namespace {

Eigen::MatrixXd features_for_default_network() {
  minen::RngStream rng(3);
  minen::NetworkConfig nc;
  const auto nodes = minen::build_network(nc, rng);
  return minen::extract_features(nodes, nc.bs_pos).points;
}

void BM_Kmeans(benchmark::State& state) {
  const Eigen::MatrixXd x = features_for_default_network();
  minen::RngStream rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(minen::kmeans(x, 15, rng));
  }
}
BENCHMARK(BM_Kmeans)->Unit(benchmark::kMillisecond);

void BM_Gmm(benchmark::State& state) {
  const Eigen::MatrixXd x = features_for_default_network();
  minen::RngStream rng(1);
  for (auto _ : state) {
    benchmark::DoNotOptimize(minen::gmm_fit(x, 15, rng));
  }
}
BENCHMARK(BM_Gmm)->Unit(benchmark::kMillisecond);

void BM_FuzzyCmeans(benchmark::State& state) {
  minen::RngStream rng(2);
  Eigen::MatrixXd x(300, 2);
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    x(i, 0) = rng.uniform(0, 250);
    x(i, 1) = rng.uniform(0, 250);
  }
  const minen::FcmConfig cfg;
  for (auto _ : state) {
    benchmark::DoNotOptimize(minen::fuzzy_cmeans(x, 15, cfg, rng, false));
  }
}
BENCHMARK(BM_FuzzyCmeans)->Unit(benchmark::kMillisecond);

}  // namespace
