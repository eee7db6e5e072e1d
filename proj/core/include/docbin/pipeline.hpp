#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "docbin/manifest.hpp"
#include "docbin/patching.hpp"
#include "docbin/raster.hpp"
#include "docbin/wavelet.hpp"

namespace docbin {

inline constexpr int kDefaultGlobalSize = 512;

// Enhancers stand in for the per-channel generators. None of them needs a
// trained model; External reads patches produced elsewhere.
struct IdentityEnhancer {
  friend bool operator==(const IdentityEnhancer&, const IdentityEnhancer&) = default;
};
/// Stage-1 transform followed by Otsu binarization, rendered as {0,255}.
struct DwtNormBaseline {
  NormOverrides norm;
  friend bool operator==(const DwtNormBaseline& a, const DwtNormBaseline& b) {
    return a.norm.alpha == b.norm.alpha && a.norm.beta == b.norm.beta;
  }
};
/// Patches replaced by the images a manifest lists for the matching channel.
struct ExternalEnhancer {
  std::filesystem::path manifest;
  friend bool operator==(const ExternalEnhancer&, const ExternalEnhancer&) = default;
};

using EnhancerKind = std::variant<IdentityEnhancer, DwtNormBaseline, ExternalEnhancer>;

/// "identity", "baseline" or "external:<manifest path>".
EnhancerKind parse_enhancer(std::string_view text);
std::string describe(const EnhancerKind& kind);

struct FusionWeights {
  double omega = 0.5;                // color generator weight against gray
  double local_global_weight = 0.5;  // weight of the local branch

  void validate() const;
};

struct RunConfig {
  int patch_size = kDefaultPatchSize;
  int global_size = kDefaultGlobalSize;
  FusionWeights fusion;
  double threshold = 0.5;  // on [0,1]
  EnhancerKind color_enhancer = DwtNormBaseline{};
  EnhancerKind gray_enhancer = DwtNormBaseline{};
  EnhancerKind local_enhancer = IdentityEnhancer{};
  EnhancerKind global_enhancer = DwtNormBaseline{};
  NormOverrides norm;
  std::optional<std::filesystem::path> debug_dump;

  Threshold cut() const { return Threshold::unit(threshold); }
  void validate() const;
};

/// Receives intermediate artifacts when a debug directory is configured.
/// Files land at <root>/<stem>/<stage>/<name>.png.
class DebugSink {
 public:
  DebugSink(std::filesystem::path root, std::string stem);

  void write(std::string_view stage, std::string_view name, const Raster& img) const;
  void write(std::string_view stage, std::string_view name, const FloatPlane& plane) const;

  static std::string patch_name(int row, int col, ChannelTag channel);

 private:
  std::filesystem::path dir_;
};

/// Per-channel GT: background wherever `y` is background, otherwise the
/// binarization of `x_prime` at `t`.
BinaryMask make_channel_groundtruth(const FloatPlane& x_prime, const BinaryMask& y, Threshold t);

/// omega * color + (1 - omega) * gray, clamped to [0,255].
FloatPlane fuse_channels(const FloatPlane& color_out, const FloatPlane& gray_out,
                         const FusionWeights& w);

/// The three fused planes as an RGB raster.
Raster assemble_color_prediction(const FloatPlane& red, const FloatPlane& green,
                                 const FloatPlane& blue);

/// Upsamples the global plane to (out_w, out_h), blends it with the local
/// plane and thresholds: text iff blend < cut.
BinaryMask fuse_local_global(const FloatPlane& local, const FloatPlane& global_small,
                             int out_w, int out_h, const FusionWeights& w,
                             Threshold t = Threshold::unit(0.5));

/// Stage-1 output for every patch.
struct Stage1Output {
  GridGeometry geometry;
  bool color = false;
  /// Row-major. Color input: gray is the raw luma, red/green/blue are
  /// transformed. Gray input: only `gray` is populated, untransformed.
  std::vector<ChannelBundle> patches;
};

Stage1Output run_stage1(const Raster& img, const RunConfig& cfg,
                        const DebugSink* debug = nullptr);

/// Runs one enhancer over a grid. `channel` selects the External manifest
/// records to use.
PatchGrid apply_enhancer(const PatchGrid& grid, const EnhancerKind& kind,
                         ChannelTag channel = ChannelTag::gray);

/// Full three-stage binarization of one document.
BinaryMask binarize_document(const Raster& img, const RunConfig& cfg,
                             const DebugSink* debug = nullptr);

}  // namespace docbin
