#include <benchmark/benchmark.h>

#include <random>

#include "docbin/metrics.hpp"
#include "docbin/pipeline.hpp"
#include "docbin/wavelet.hpp"

using namespace docbin;

namespace {

FloatPlane noise_plane(int w, int h, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 255.0);
  FloatPlane p(w, h);
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x) p.at(x, y) = u(rng);
  return p;
}

BinaryMask blob_mask(int w, int h, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_int_distribution<int> px(0, w - 1), py(0, h - 1), pr(2, 6);
  BinaryMask m(w, h);
  for (int k = 0; k < w * h / 60; ++k) {
    const int cx = px(rng), cy = py(rng), r = pr(rng);
    for (int y = std::max(0, cy - r); y < std::min(h, cy + r); ++y)
      for (int x = std::max(0, cx - r); x < std::min(w, cx + r); ++x) m.set(x, y, true);
  }
  return m;
}

BinaryMask flip_some(BinaryMask m, unsigned seed) {
  std::mt19937 rng(seed);
  std::bernoulli_distribution flip(0.05);
  for (int y = 0; y < m.height(); ++y)
    for (int x = 0; x < m.width(); ++x)
      if (flip(rng)) m.set(x, y, !m.foreground(x, y));
  return m;
}

void BM_Dwt2Haar(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const FloatPlane p = noise_plane(n, n, 1);
  for (auto _ : state) benchmark::DoNotOptimize(dwt2_haar(p));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Dwt2Haar)->Arg(224)->Arg(1024);

void BM_ResizeBicubic(benchmark::State& state) {
  const FloatPlane p = noise_plane(112, 112, 2);
  for (auto _ : state) benchmark::DoNotOptimize(resize_bicubic(p, 224, 224));
  state.SetItemsProcessed(state.iterations() * 224 * 224);
}
BENCHMARK(BM_ResizeBicubic);

void BM_Otsu(benchmark::State& state) {
  const FloatPlane p = noise_plane(224, 224, 3);
  for (auto _ : state) benchmark::DoNotOptimize(otsu_threshold(p));
}
BENCHMARK(BM_Otsu);

void BM_Stage1(benchmark::State& state) {
  const FloatPlane p = noise_plane(224, 224, 4);
  for (auto _ : state) benchmark::DoNotOptimize(stage1_channel_transform(p));
}
BENCHMARK(BM_Stage1);

void BM_Drd(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BinaryMask gt = blob_mask(n, n, 5);
  const BinaryMask pred = flip_some(gt, 6);
  for (auto _ : state) benchmark::DoNotOptimize(drd(pred, gt));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_Drd)->Arg(256)->Arg(1024);

void BM_PseudoFMeasure(benchmark::State& state) {
  const int n = static_cast<int>(state.range(0));
  const BinaryMask gt = blob_mask(n, n, 7);
  const BinaryMask pred = flip_some(gt, 8);
  for (auto _ : state) benchmark::DoNotOptimize(pseudo_f_measure(pred, gt));
  state.SetItemsProcessed(state.iterations() * n * n);
}
BENCHMARK(BM_PseudoFMeasure)->Arg(256)->Arg(1024);

void BM_BinarizeDocument(benchmark::State& state) {
  const FloatPlane g = noise_plane(800, 600, 9);
  const Raster img = merge_channels(g, g, g);
  const RunConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(binarize_document(img, cfg));
}
BENCHMARK(BM_BinarizeDocument)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
