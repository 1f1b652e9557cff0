#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "dualdi/augment.hpp"
#include "dualdi/classifier.hpp"
#include "dualdi/rankpool.hpp"
#include "dualdi/raster.hpp"
#include "dualdi/synthgen.hpp"

namespace {

dualdi::Frame noise_frame(std::mt19937_64& gen, int w, int h, int c) {
  std::uniform_real_distribution<double> d(0.0, 255.0);
  dualdi::Frame f(w, h, c);
  for (double& v : f.data) v = d(gen);
  return f;
}

void BM_RankPool(benchmark::State& state) {
  const int T = static_cast<int>(state.range(0));
  std::mt19937_64 gen(1);
  std::vector<dualdi::Frame> clip;
  for (int t = 0; t < T; ++t) clip.push_back(noise_frame(gen, 64, 64, 3));
  const auto w = dualdi::arp_weights(T);
  for (auto _ : state) benchmark::DoNotOptimize(dualdi::rank_pool(clip, w));
  state.SetItemsProcessed(state.iterations() * T);
}
BENCHMARK(BM_RankPool)->Arg(8)->Arg(32)->Arg(128);

void BM_ResizeTo224(benchmark::State& state) {
  std::mt19937_64 gen(2);
  const auto f = noise_frame(gen, 64, 64, static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(dualdi::resize_bilinear(f, 224, 224));
}
BENCHMARK(BM_ResizeTo224)->Arg(1)->Arg(3);

void BM_Rotate224(benchmark::State& state) {
  std::mt19937_64 gen(3);
  const auto img = dualdi::quantize(noise_frame(gen, 224, 224, 3));
  for (auto _ : state) benchmark::DoNotOptimize(dualdi::rotate(img, 7.5, 128));
}
BENCHMARK(BM_Rotate224);

void BM_ExpandSequence(benchmark::State& state) {
  const auto s = dualdi::synth_sequence(dualdi::SynthParams{});
  auto cfg = dualdi::AugmentConfig::from_name("dual_flip_rotate");
  for (auto _ : state) benchmark::DoNotOptimize(dualdi::expand_sequence(s.sequence, s.annotation, cfg));
}
BENCHMARK(BM_ExpandSequence);

void BM_LossAndGrad(benchmark::State& state) {
  const int batch_size = static_cast<int>(state.range(0));
  std::mt19937_64 gen(4);
  std::normal_distribution<double> nd(0.0, 0.1);
  dualdi::ClassifierModel m({"a", "b", "c"}, 32, 1);
  for (double& w : m.weights) w = nd(gen);
  std::vector<std::vector<double>> xs(batch_size, std::vector<double>(m.feature_dim()));
  std::vector<dualdi::BatchItem> batch;
  for (int i = 0; i < batch_size; ++i) {
    for (double& v : xs[i]) v = std::uniform_real_distribution<double>(0.0, 1.0)(gen);
    batch.push_back({xs[i], i % 3});
  }
  for (auto _ : state) benchmark::DoNotOptimize(dualdi::loss_and_grad(m, batch));
  state.SetItemsProcessed(state.iterations() * batch_size);
}
BENCHMARK(BM_LossAndGrad)->Arg(1)->Arg(25)->Arg(100);

}  // namespace
BENCHMARK_MAIN();
