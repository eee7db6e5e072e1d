#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "docbin/metrics.hpp"
#include "docbin/wavelet.hpp"
#include "synthetic.hpp"

namespace docbin {
namespace {

double energy(const FloatPlane& p) {
  double e = 0;
  for (double v : p.data()) e += v * v;
  return e;
}

TEST(Dwt2Haar, ConstantBlock) {
  const SubbandSet s = dwt2_haar(FloatPlane(2, 2, 7.0));
  EXPECT_NEAR(s.ll.at(0, 0), 14.0, 1e-12);
  EXPECT_EQ(s.hl.at(0, 0), 0.0);
  EXPECT_EQ(s.lh.at(0, 0), 0.0);
  EXPECT_EQ(s.hh.at(0, 0), 0.0);
}

TEST(Dwt2Haar, SingleImpulse) {
  const SubbandSet s = dwt2_haar(FloatPlane(2, 2, std::vector<double>{1, 0, 0, 0}));
  EXPECT_NEAR(s.ll.at(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(s.hl.at(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(s.lh.at(0, 0), 0.5, 1e-12);
  EXPECT_NEAR(s.hh.at(0, 0), 0.5, 1e-12);
}

TEST(Dwt2Haar, DiagonalBlockAndParseval) {
  const FloatPlane p(2, 2, std::vector<double>{3, 1, 1, 3});
  const SubbandSet s = dwt2_haar(p);
  EXPECT_NEAR(s.ll.at(0, 0), 4.0, 1e-12);
  EXPECT_NEAR(s.lh.at(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(s.hl.at(0, 0), 0.0, 1e-12);
  EXPECT_NEAR(s.hh.at(0, 0), 2.0, 1e-12);
  EXPECT_NEAR(energy(s.ll) + energy(s.hl) + energy(s.lh) + energy(s.hh), 20.0, 1e-12);
}

TEST(Dwt2Haar, SubbandOrientation) {
  // Vertical stripes vary along x: energy goes to the horizontal high-pass (HL).
  FloatPlane stripes(4, 4);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 4; ++x) stripes.at(x, y) = x % 2 ? 10.0 : 0.0;
  const SubbandSet s = dwt2_haar(stripes);
  EXPECT_GT(energy(s.hl), 0.0);
  EXPECT_EQ(energy(s.lh), 0.0);
  EXPECT_EQ(energy(s.hh), 0.0);
}

TEST(Dwt2Haar, OddDimensionsAreRejected) {
  try {
    dwt2_haar(FloatPlane(3, 4));
    FAIL();
  } catch (const InvalidArgument& e) {
    EXPECT_NE(std::string(e.what()).find("pad"), std::string::npos);
  }
}

TEST(Idwt2Haar, InvertsForwardTransform) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> half(1, 40);
  for (int trial = 0; trial < 100; ++trial) {
    const FloatPlane p = testing::random_plane(2 * half(rng), 2 * half(rng), rng, -300, 300);
    const SubbandSet s = dwt2_haar(p);
    const FloatPlane back = idwt2_haar(s);
    ASSERT_TRUE(back.same_shape(p));
    for (std::size_t i = 0; i < p.size(); ++i) ASSERT_NEAR(back.data()[i], p.data()[i], 1e-9);
    const double e = energy(p);
    ASSERT_LE(std::abs(energy(s.ll) + energy(s.hl) + energy(s.lh) + energy(s.hh) - e), 1e-6 * e);
  }
}

TEST(Idwt2Haar, ZeroAndConstantCases) {
  const FloatPlane z = idwt2_haar({FloatPlane(3, 2), FloatPlane(3, 2), FloatPlane(3, 2), FloatPlane(3, 2)});
  for (double v : z.data()) EXPECT_EQ(v, 0.0);
  const FloatPlane c =
      idwt2_haar({FloatPlane(1, 1, 2 * 9.0), FloatPlane(1, 1), FloatPlane(1, 1), FloatPlane(1, 1)});
  for (double v : c.data()) EXPECT_NEAR(v, 9.0, 1e-12);
  EXPECT_THROW(idwt2_haar({FloatPlane(2, 2), FloatPlane(2, 1), FloatPlane(2, 2), FloatPlane(2, 2)}),
               StructuralError);
}

TEST(NormalizeSigmoid, CenterAndTail) {
  NormParams p;
  p.alpha = 3.0;
  p.beta = 90.0;
  const FloatPlane out = normalize_sigmoid(
      FloatPlane(2, 1, std::vector<double>{90.0, 90.0 + 20 * 3.0}), p);
  EXPECT_DOUBLE_EQ(out.at(0, 0), 127.5);
  // 255 * sigmoid(20) = 255 - 255 * 2.06e-9
  EXPECT_NEAR(out.at(1, 0), 255.0, 1e-6);
  EXPECT_LT(out.at(1, 0), 255.0);
}

TEST(NormalizeSigmoid, StrictlyMonotoneAndBounded) {
  NormParams p{25.0, 140.0, 10.0, 200.0};
  std::vector<double> xs;
  for (int i = -100; i <= 400; i += 3) xs.push_back(i);
  const FloatPlane out = normalize_sigmoid(FloatPlane(int(xs.size()), 1, xs), p);
  for (std::size_t i = 0; i < xs.size(); ++i) {
    EXPECT_GT(out.data()[i], 10.0);
    EXPECT_LT(out.data()[i], 200.0);
    if (i > 0) EXPECT_GT(out.data()[i], out.data()[i - 1]);
  }
}

TEST(NormalizeSigmoid, RejectsInvalidParams) {
  EXPECT_THROW(normalize_sigmoid(FloatPlane(1, 1), NormParams{0.0, 0.0, 0.0, 255.0}),
               InvalidArgument);
  EXPECT_THROW(normalize_sigmoid(FloatPlane(1, 1), NormParams{1.0, 0.0, 5.0, 5.0}),
               InvalidArgument);
}

TEST(AutoNormParams, ConstantPlaneSitsAtMidpoint) {
  for (BetaRule rule : {BetaRule::otsu_cut, BetaRule::mean}) {
    NormOverrides o;
    o.beta_rule = rule;
    const FloatPlane ll(56, 56, 301.7);
    const FloatPlane out = normalize_sigmoid(ll, auto_norm_params(ll, o));
    for (double v : out.data()) ASSERT_EQ(v, 127.5);
  }
}

TEST(AutoNormParams, MeanRuleAndOverrides) {
  const FloatPlane p(4, 1, std::vector<double>{0, 0, 10, 10});
  NormOverrides o;
  o.beta_rule = BetaRule::mean;
  const NormParams a = auto_norm_params(p, o);
  EXPECT_DOUBLE_EQ(a.beta, 5.0);
  EXPECT_DOUBLE_EQ(a.alpha, 5.0);
  o.alpha = 2.0;
  o.beta = 1.0;
  const NormParams b = auto_norm_params(p, o);
  EXPECT_EQ(b.alpha, 2.0);
  EXPECT_EQ(b.beta, 1.0);
}

TEST(AutoNormParams, OtsuCutSeparatesBimodalPlane) {
  const FloatPlane p(4, 1, std::vector<double>{20, 20, 380, 380});
  const double beta = auto_norm_params(p).beta;
  EXPECT_GT(beta, 20.0);
  EXPECT_LT(beta, 380.0);
  EXPECT_LT(otsu_cut(p), 380.0);
}

TEST(Stage1, ConstantPatchBecomesMidGray) {
  const FloatPlane out = stage1_channel_transform(FloatPlane(224, 224, 88.0));
  ASSERT_EQ(out.width(), 224);
  ASSERT_EQ(out.height(), 224);
  for (double v : out.data()) ASSERT_EQ(v, 127.5);
}

TEST(Stage1, PreservesDimensionsIncludingOdd) {
  std::mt19937 rng(8);
  for (auto [w, h] : {std::pair{224, 224}, {10, 6}, {9, 7}, {1, 1}}) {
    const FloatPlane p = testing::random_plane(w, h, rng);
    const FloatPlane out = stage1_channel_transform(p);
    EXPECT_EQ(out.width(), w);
    EXPECT_EQ(out.height(), h);
    EXPECT_EQ(stage1_channel_transform(p), out);
  }
}

TEST(Stage1, CleansSaltAndPepperText) {
  for (std::uint32_t seed : {1u, 2u, 3u}) {
    const auto doc = testing::make_salt_pepper_patch(224, 0.08, seed);
    const FloatPlane input = channel_plane(doc.image, 0);
    const double before = psnr(binarize(input, Threshold::unit(0.5)), doc.gt);
    const double after = psnr(binarize(stage1_channel_transform(input), Threshold::unit(0.5)), doc.gt);
    EXPECT_GT(after, before) << "seed " << seed;
  }
}

TEST(SubbandDebugImages, RendersFourBands) {
  std::mt19937 rng(9);
  const auto imgs = subband_debug_images(dwt2_haar(testing::random_plane(16, 8, rng)));
  for (const Raster& r : imgs) {
    EXPECT_EQ(r.width(), 8);
    EXPECT_EQ(r.height(), 4);
    EXPECT_EQ(r.channels(), 1);
  }
}

}  // namespace
}  // namespace docbin
