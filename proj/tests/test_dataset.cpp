#include <gtest/gtest.h>

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>

#include "docbin/dataset.hpp"
#include "docbin/image_io.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;

namespace docbin {
namespace {

class DatasetTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("docbin_dataset_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  void touch_image(const std::string& name, const Raster& img = Raster(8, 8, 1, 255)) {
    write_raster(dir_ / name, img);
  }

  fs::path dir_;
};

TEST_F(DatasetTest, PairsByStem) {
  touch_image("a.png");
  touch_image("a_gt.png");
  const IngestResult r = ingest_dataset(dir_);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].stem, "a");
  EXPECT_EQ(r.pairs[0].groundtruth.filename(), "a_gt.png");
  EXPECT_TRUE(r.unmatched.empty());
}

TEST_F(DatasetTest, EmptyDirectoryWarns) {
  const IngestResult r = ingest_dataset(dir_);
  EXPECT_TRUE(r.pairs.empty());
  EXPECT_FALSE(r.warnings.empty());
}

TEST_F(DatasetTest, MixedFormatsAndUnmatched) {
  touch_image("b.bmp", Raster(8, 8, 3, 200));
  touch_image("b_GT.tiff");
  touch_image("c.png");
  std::ofstream(dir_ / "notes.txt") << "ignored";
  const IngestResult r = ingest_dataset(dir_);
  ASSERT_EQ(r.pairs.size(), 1u);
  EXPECT_EQ(r.pairs[0].stem, "b");
  EXPECT_EQ(r.pairs[0].groundtruth.extension(), ".tiff");
  ASSERT_EQ(r.unmatched.size(), 1u);
  EXPECT_EQ(r.unmatched[0].filename(), "c.png");
  EXPECT_FALSE(r.warnings.empty());
}

TEST_F(DatasetTest, CustomSuffix) {
  touch_image("d.png");
  touch_image("d-mask.png");
  EXPECT_TRUE(ingest_dataset(dir_).pairs.empty());
  EXPECT_EQ(ingest_dataset(dir_, {"-mask"}).pairs.size(), 1u);
}

TEST_F(DatasetTest, FindGroundtruthFallsBackToBareStem) {
  touch_image("e.png");
  EXPECT_EQ(find_groundtruth(dir_, "e")->filename(), "e.png");
  touch_image("e_gt.bmp");
  EXPECT_EQ(find_groundtruth(dir_, "e")->filename(), "e_gt.bmp");
  EXPECT_FALSE(find_groundtruth(dir_, "zzz").has_value());
}

TEST_F(DatasetTest, LoadGroundtruthThresholdsAtHalf) {
  std::mt19937 rng(1);
  const BinaryMask gt = testing::random_mask(20, 15, rng);
  touch_image("f_gt.png", gt.to_raster());
  EXPECT_EQ(load_groundtruth(dir_ / "f_gt.png"), gt);
}

TEST_F(DatasetTest, MissingRootThrows) {
  EXPECT_THROW(ingest_dataset(dir_ / "nope"), IoError);
}

TEST(Report, JsonLayout) {
  std::mt19937 rng(2);
  const BinaryMask gt = testing::random_mask(32, 32, rng);
  const BinaryMask pred = testing::perturb_mask(gt, rng, 0.05);
  std::vector<ImageResult> results = {
      {"perfect.png", evaluate(gt, gt), {}},
      {"noisy.png", evaluate(pred, gt), {}},
      {"broken.png", {}, "cannot read"},
  };
  const auto j = nlohmann::json::parse(report_to_json(results));
  ASSERT_EQ(j.at("images").size(), 3u);
  EXPECT_TRUE(j["images"][0]["psnr"].is_null());
  EXPECT_TRUE(j["images"][0]["avg"].is_null());
  EXPECT_DOUBLE_EQ(j["images"][0]["fm"].get<double>(), 100.0);
  EXPECT_TRUE(j["images"][1]["avg"].is_number());
  EXPECT_EQ(j["images"][2]["error"], "cannot read");
  EXPECT_EQ(j["failures"], 1);
  EXPECT_EQ(j["mean"]["count"], 2);
  EXPECT_TRUE(j["mean"]["psnr"].is_null());
  EXPECT_DOUBLE_EQ(j["mean"]["avg"].get<double>(), *results[1].report->avg);
}

}  // namespace
}  // namespace docbin
