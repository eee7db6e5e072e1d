#pragma once

#include <array>
#include <optional>

#include "docbin/raster.hpp"

namespace docbin {

/// One level of a 2-D Haar decomposition. The first letter names the
/// horizontal filter, the second the vertical one: `hl` is high-pass along
/// rows and low-pass along columns.
struct SubbandSet {
  FloatPlane ll;
  FloatPlane hl;
  FloatPlane lh;
  FloatPlane hh;

  int width() const noexcept { return ll.width(); }
  int height() const noexcept { return ll.height(); }
};

/// Otsu cut in the plane's own units: the plane is mapped affinely onto
/// [0,255], thresholded with otsu_threshold, and the cut mapped back half a
/// bin below the winning bin. Returns the value itself for constant planes.
double otsu_cut(const FloatPlane& plane);

/// Sigmoid normalization parameters: `alpha` is the width of the input
/// intensity range, `beta` its center, and the output spans (out_min, out_max).
struct NormParams {
  double alpha = 1.0;
  double beta = 127.5;
  double out_min = 0.0;
  double out_max = 255.0;

  void validate() const;
};

/// How the automatic beta (sigmoid center) is chosen.
enum class BetaRule {
  /// Otsu cut of the plane, computed over its own value range.
  otsu_cut,
  /// Plane mean.
  mean,
};

/// Caller overrides for the automatically chosen alpha and beta.
struct NormOverrides {
  std::optional<double> alpha;
  std::optional<double> beta;
  BetaRule beta_rule = BetaRule::otsu_cut;
};

/// Orthonormal Haar analysis. Requires even dimensions; pad odd planes by
/// edge replication first.
SubbandSet dwt2_haar(const FloatPlane& plane);

/// Exact inverse of dwt2_haar.
FloatPlane idwt2_haar(const SubbandSet& sub);

/// I_N = (out_max - out_min) * sigmoid((I - beta) / alpha) + out_min.
FloatPlane normalize_sigmoid(const FloatPlane& plane, const NormParams& p);

/// alpha = max(stddev, 1e-6); beta per `overrides.beta_rule`; output range
/// [0,255]. A constant plane gets beta equal to its value.
NormParams auto_norm_params(const FloatPlane& plane, const NormOverrides& overrides = {});

/// Stage-1 channel preprocessing: Haar LL band, sigmoid-normalized, resized
/// back to the input size with bicubic interpolation. Odd dimensions are
/// edge-padded before the transform.
FloatPlane stage1_channel_transform(const FloatPlane& plane,
                                    const NormOverrides& overrides = {});

/// LL band resized back to the input size without normalization.
FloatPlane haar_ll_upsampled(const FloatPlane& plane);

/// 8-bit renderings of the four subbands (LL, HL, LH, HH), each passed
/// through automatic sigmoid normalization for display.
std::array<Raster, 4> subband_debug_images(const SubbandSet& sub);

}  // namespace docbin
