#include <gtest/gtest.h>

#include <filesystem>
#include <random>

#include "docbin/image_io.hpp"
#include "docbin/manifest.hpp"
#include "docbin/metrics.hpp"
#include "docbin/pipeline.hpp"
#include "oracles.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;

namespace docbin {
namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("docbin_pipeline_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

/// Writes a manifest whose every (row, col) record for `tag` points at `patch`.
fs::path write_uniform_manifest(const fs::path& dir, const GridGeometry& geo, ChannelTag tag,
                                const Raster& patch) {
  write_raster(dir / "patch.png", patch);
  PatchManifest m;
  m.source_id = "test";
  m.geometry = geo;
  for (int r = 0; r < geo.rows; ++r)
    for (int c = 0; c < geo.cols; ++c) m.records.push_back({r, c, tag, "patch.png", {}});
  write_manifest(dir / "manifest.json", m);
  return dir / "manifest.json";
}

TEST(ChannelGroundtruth, Examples) {
  std::mt19937 rng(1);
  const FloatPlane x = testing::random_plane(20, 10, rng);
  const Threshold t = Threshold::unit(0.5);
  const BinaryMask none = make_channel_groundtruth(x, BinaryMask(20, 10, false), t);
  EXPECT_EQ(none.count_foreground(), 0u);
  EXPECT_EQ(make_channel_groundtruth(x, BinaryMask(20, 10, true), t), binarize(x, t));

  BinaryMask left(20, 10);
  for (int y = 0; y < 10; ++y)
    for (int x0 = 0; x0 < 10; ++x0) left.set(x0, y, true);
  EXPECT_EQ(make_channel_groundtruth(FloatPlane(20, 10, 30.0), left, t), left);
  EXPECT_THROW(make_channel_groundtruth(x, BinaryMask(10, 10), t), StructuralError);
}

TEST(FuseChannels, Examples) {
  std::mt19937 rng(2);
  const FloatPlane p = testing::random_plane(8, 8, rng);
  for (double omega : {0.0, 0.3, 1.0}) {
    const FloatPlane f = fuse_channels(p, p, {omega, 0.5});
    for (std::size_t i = 0; i < p.size(); ++i) EXPECT_NEAR(f.data()[i], p.data()[i], 1e-12);
  }
  const FloatPlane q = testing::random_plane(8, 8, rng);
  EXPECT_EQ(fuse_channels(p, q, {1.0, 0.5}), p);
  const FloatPlane mid = fuse_channels(FloatPlane(1, 1, 200.0), FloatPlane(1, 1, 100.0), {});
  EXPECT_DOUBLE_EQ(mid.at(0, 0), 150.0);
  EXPECT_THROW(fuse_channels(p, FloatPlane(4, 4), {}), StructuralError);
  EXPECT_THROW(fuse_channels(p, q, {1.5, 0.5}), InvalidArgument);
}

TEST(AssembleColorPrediction, Examples) {
  const Raster red = assemble_color_prediction(FloatPlane(3, 2, 255.0), FloatPlane(3, 2, 0.0),
                                               FloatPlane(3, 2, 0.0));
  EXPECT_EQ(red.channels(), 3);
  for (int y = 0; y < 2; ++y)
    for (int x = 0; x < 3; ++x) {
      EXPECT_EQ(red.at(x, y, 0), 255);
      EXPECT_EQ(red.at(x, y, 1), 0);
      EXPECT_EQ(red.at(x, y, 2), 0);
    }
  const FloatPlane p(2, 2, std::vector<double>{10, 20, 30, 40});
  const Raster gray = assemble_color_prediction(p, p, p);
  for (int c = 0; c < 3; ++c) EXPECT_EQ(gray.at(1, 1, c), 40);
}

TEST(FuseLocalGlobal, EqualInputsAndTie) {
  std::mt19937 rng(3);
  const FloatPlane p = testing::random_plane(16, 16, rng);
  EXPECT_EQ(fuse_local_global(p, p, 16, 16, {}), binarize(p, Threshold::unit(0.5)));

  const BinaryMask tie =
      fuse_local_global(FloatPlane(16, 16, 0.0), FloatPlane(8, 8, 255.0), 16, 16, {});
  EXPECT_EQ(tie.count_foreground(), 0u);
}

TEST(FuseLocalGlobal, MatchesScalarOracle) {
  std::mt19937 rng(4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const FloatPlane local = testing::random_plane(37, 29, rng);
    const FloatPlane global = testing::random_plane(16, 16, rng);
    const FusionWeights w{0.5, u(rng)};
    const BinaryMask got = fuse_local_global(local, global, 37, 29, w);
    for (int y = 0; y < 29; ++y) {
      for (int x = 0; x < 37; ++x) {
        const double g = oracle::bicubic_at(global, 37, 29, x, y);
        const double blend = w.local_global_weight * local.at(x, y) + (1 - w.local_global_weight) * g;
        // Skip values within rounding distance of the cut.
        if (std::abs(blend - 127.5) < 1e-9) continue;
        ASSERT_EQ(got.foreground(x, y), blend < 127.5) << x << "," << y;
      }
    }
  }
}

TEST(RunStage1, GrayInputIsPassedThrough) {
  std::mt19937 rng(5);
  const Raster img = testing::random_raster(300, 100, 1, rng);
  const Stage1Output out = run_stage1(img, RunConfig{});
  EXPECT_FALSE(out.color);
  ASSERT_EQ(out.patches.size(), 2u);
  EXPECT_EQ(out.patches[0].gray, split_patches(channel_plane(img, 0), 224).patches[0]);
  EXPECT_TRUE(out.patches[0].red.empty());
}

TEST(RunStage1, ColorConstantImage) {
  const Raster img(224, 224, 3, std::vector<std::uint8_t>(224 * 224 * 3, 90));
  const Stage1Output out = run_stage1(img, RunConfig{});
  ASSERT_TRUE(out.color);
  ASSERT_EQ(out.patches.size(), 1u);
  const ChannelBundle& b = out.patches[0];
  for (const FloatPlane* p : {&b.red, &b.green, &b.blue})
    for (double v : p->data()) ASSERT_EQ(v, 127.5);
  for (double v : b.gray.data()) ASSERT_NEAR(v, 90.0, 1e-9);
}

TEST(RunStage1, NonDivisibleColorInput) {
  std::mt19937 rng(6);
  const Stage1Output out = run_stage1(testing::random_raster(250, 230, 3, rng), RunConfig{});
  EXPECT_EQ(out.patches.size(), 4u);
  EXPECT_EQ(out.geometry.pad_right, 198);
  EXPECT_EQ(out.geometry.pad_bottom, 218);
}

TEST(ApplyEnhancer, IdentityAndBaseline) {
  std::mt19937 rng(7);
  const PatchGrid grid = split_patches(testing::random_raster(300, 250, 1, rng), 224);
  EXPECT_EQ(apply_enhancer(grid, IdentityEnhancer{}), grid);

  const PatchGrid constant = split_patches(Raster(224, 224, 1, 60), 224);
  const PatchGrid out = apply_enhancer(constant, DwtNormBaseline{});
  ASSERT_EQ(out.patches.size(), 1u);
  for (auto v : out.patches[0].data()) ASSERT_EQ(v, 255);
}

TEST(ApplyEnhancer, ExternalSubstitutesManifestPatches) {
  const fs::path dir = scratch_dir("external");
  std::mt19937 rng(8);
  const PatchGrid grid = split_patches(testing::random_raster(400, 300, 3, rng), 224);
  const fs::path manifest =
      write_uniform_manifest(dir, grid.geometry, ChannelTag::red, Raster(224, 224, 1, 0));
  const PatchGrid out = apply_enhancer(grid, ExternalEnhancer{manifest}, ChannelTag::red);
  const Raster whole = reassemble(out);
  EXPECT_EQ(whole.channels(), 3);
  for (auto v : whole.data()) ASSERT_EQ(v, 0);
  // Records exist for red only.
  EXPECT_THROW(apply_enhancer(grid, ExternalEnhancer{manifest}, ChannelTag::blue),
               StructuralError);
  fs::remove_all(dir);
}

TEST(ApplyEnhancer, ExternalErrorsNameThePatch) {
  const fs::path dir = scratch_dir("external_err");
  const PatchGrid grid = split_patches(Raster(300, 300, 1, 128), 224);
  const fs::path manifest =
      write_uniform_manifest(dir, grid.geometry, ChannelTag::gray, Raster(100, 224, 1, 0));
  try {
    apply_enhancer(grid, ExternalEnhancer{manifest});
    FAIL();
  } catch (const StructuralError& e) {
    EXPECT_NE(std::string(e.what()).find("patch (0,0)"), std::string::npos) << e.what();
  }

  fs::remove(dir / "patch.png");
  try {
    apply_enhancer(grid, ExternalEnhancer{manifest});
    FAIL();
  } catch (const IoError& e) {
    EXPECT_NE(std::string(e.what()).find("patch (0,0)"), std::string::npos) << e.what();
  }

  const PatchGrid other = split_patches(Raster(500, 300, 1, 128), 224);
  EXPECT_THROW(apply_enhancer(other, ExternalEnhancer{manifest}), StructuralError);
  fs::remove_all(dir);
}

TEST(ParseEnhancer, RoundTrip) {
  EXPECT_TRUE(std::holds_alternative<IdentityEnhancer>(parse_enhancer("identity")));
  EXPECT_TRUE(std::holds_alternative<DwtNormBaseline>(parse_enhancer("baseline")));
  EXPECT_TRUE(std::holds_alternative<DwtNormBaseline>(parse_enhancer("dwt-norm")));
  const EnhancerKind ext = parse_enhancer("external:/tmp/m.json");
  ASSERT_TRUE(std::holds_alternative<ExternalEnhancer>(ext));
  EXPECT_EQ(std::get<ExternalEnhancer>(ext).manifest, fs::path("/tmp/m.json"));
  EXPECT_EQ(parse_enhancer(describe(ext)), ext);
  EXPECT_THROW(parse_enhancer("gan"), InvalidArgument);
  EXPECT_THROW(parse_enhancer("external:"), InvalidArgument);
}

TEST(RunConfig, Validation) {
  RunConfig cfg;
  EXPECT_NO_THROW(cfg.validate());
  cfg.patch_size = 0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.threshold = 1.5;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.fusion.omega = -0.1;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(BinarizeDocument, IdentityEverywhereMatchesScalarOracle) {
  std::mt19937 rng(9);
  const Raster img = testing::random_raster(90, 70, 3, rng);
  RunConfig cfg;
  cfg.patch_size = 32;
  cfg.global_size = 24;
  cfg.color_enhancer = cfg.gray_enhancer = cfg.local_enhancer = cfg.global_enhancer =
      IdentityEnhancer{};
  const BinaryMask got = binarize_document(img, cfg);

  // Fusion of identical rounding paths: fused channel k = 0.5 * c_k + 0.5 * luma(rounded).
  const FloatPlane luma = luma_plane(img);
  const Raster luma8 = to_raster(luma);
  FloatPlane fused[3];
  for (int k = 0; k < 3; ++k) {
    const FloatPlane ck = channel_plane(img, k);
    FloatPlane f(90, 70);
    for (int y = 0; y < 70; ++y)
      for (int x = 0; x < 90; ++x) f.at(x, y) = 0.5 * ck.at(x, y) + 0.5 * luma8.at(x, y);
    fused[k] = f;
  }
  const FloatPlane local = luma_plane(assemble_color_prediction(fused[0], fused[1], fused[2]));
  const FloatPlane global = channel_plane(to_raster(resize_bicubic(luma, 24, 24)), 0);
  int checked = 0;
  for (int y = 0; y < 70; ++y) {
    for (int x = 0; x < 90; ++x) {
      const double blend = 0.5 * local.at(x, y) + 0.5 * oracle::bicubic_at(global, 90, 70, x, y);
      if (std::abs(blend - 127.5) < 1e-9) continue;
      ASSERT_EQ(got.foreground(x, y), blend < 127.5) << x << "," << y;
      ++checked;
    }
  }
  EXPECT_GT(checked, 6000);
}

TEST(BinarizeDocument, GroundTruthImageWithIdentityIsReproduced) {
  std::mt19937 rng(10);
  const BinaryMask gt = testing::random_mask(150, 120, rng);
  RunConfig cfg;
  cfg.color_enhancer = cfg.gray_enhancer = cfg.local_enhancer = cfg.global_enhancer =
      IdentityEnhancer{};
  cfg.fusion.local_global_weight = 1.0;
  EXPECT_EQ(binarize_document(gt.to_raster(), cfg), gt);
}

TEST(BinarizeDocument, DeterministicAndRecoversText) {
  const auto doc = testing::make_degraded_document(300, 260, 11);
  const RunConfig cfg;
  const BinaryMask a = binarize_document(doc.image, cfg);
  const BinaryMask b = binarize_document(doc.image, cfg);
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.width(), 300);
  EXPECT_EQ(a.height(), 260);
  // Far better than labelling everything background.
  EXPECT_GT(psnr(a, doc.gt), psnr(BinaryMask(300, 260), doc.gt));
}

TEST(BinarizeDocument, DebugDumpWritesStages) {
  const fs::path dir = scratch_dir("debug");
  const auto doc = testing::make_degraded_document(240, 230, 12);
  RunConfig cfg;
  const DebugSink sink(dir, "page");
  binarize_document(doc.image, cfg, &sink);
  EXPECT_TRUE(fs::exists(dir / "page" / "fused" / "prediction.png"));
  EXPECT_TRUE(fs::exists(dir / "page" / "stage3" / "local.png"));
  EXPECT_TRUE(fs::exists(dir / "page" / "enhanced" / (DebugSink::patch_name(1, 1, ChannelTag::red) + ".png")));
  fs::remove_all(dir);
}

}  // namespace
}  // namespace docbin
