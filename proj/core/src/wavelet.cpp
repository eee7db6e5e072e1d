#include "docbin/wavelet.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace docbin {
namespace {

constexpr double kInvSqrt2 = 1.0 / std::numbers::sqrt2;
constexpr double kMinAlpha = 1e-6;

FloatPlane pad_to_even(const FloatPlane& plane) {
  const int w = plane.width() + (plane.width() % 2);
  const int h = plane.height() + (plane.height() % 2);
  if (w == plane.width() && h == plane.height()) return plane;
  return pad_edge(plane, w, h);
}

}  // namespace

void NormParams::validate() const {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw InvalidArgument("normalization alpha must be positive");
  }
  if (!(out_min < out_max)) {
    throw InvalidArgument("normalization range must satisfy out_min < out_max");
  }
}

SubbandSet dwt2_haar(const FloatPlane& plane) {
  const int w = plane.width();
  const int h = plane.height();
  if (plane.empty()) throw InvalidArgument("dwt2_haar: empty plane");
  if (w % 2 != 0 || h % 2 != 0) {
    throw InvalidArgument("dwt2_haar: dimensions " + std::to_string(w) + "x" +
                          std::to_string(h) +
                          " are odd; pad by edge replication before transforming");
  }
  const int hw = w / 2;
  const int hh = h / 2;

  // Row pass: low and high halves at half width, full height.
  FloatPlane low(hw, h);
  FloatPlane high(hw, h);
  for (int y = 0; y < h; ++y) {
    for (int n = 0; n < hw; ++n) {
      const double a = plane.at(2 * n, y);
      const double b = plane.at(2 * n + 1, y);
      low.at(n, y) = (a + b) * kInvSqrt2;
      high.at(n, y) = (a - b) * kInvSqrt2;
    }
  }

  SubbandSet out{FloatPlane(hw, hh), FloatPlane(hw, hh), FloatPlane(hw, hh),
                 FloatPlane(hw, hh)};
  for (int m = 0; m < hh; ++m) {
    for (int n = 0; n < hw; ++n) {
      const double la = low.at(n, 2 * m);
      const double lb = low.at(n, 2 * m + 1);
      const double ha = high.at(n, 2 * m);
      const double hb = high.at(n, 2 * m + 1);
      out.ll.at(n, m) = (la + lb) * kInvSqrt2;
      out.lh.at(n, m) = (la - lb) * kInvSqrt2;
      out.hl.at(n, m) = (ha + hb) * kInvSqrt2;
      out.hh.at(n, m) = (ha - hb) * kInvSqrt2;
    }
  }
  return out;
}

FloatPlane idwt2_haar(const SubbandSet& sub) {
  if (!sub.ll.same_shape(sub.hl) || !sub.ll.same_shape(sub.lh) ||
      !sub.ll.same_shape(sub.hh)) {
    throw StructuralError("idwt2_haar: subband dimensions differ");
  }
  const int hw = sub.ll.width();
  const int hh = sub.ll.height();
  FloatPlane out(2 * hw, 2 * hh);
  for (int m = 0; m < hh; ++m) {
    for (int n = 0; n < hw; ++n) {
      const double ll = sub.ll.at(n, m);
      const double lh = sub.lh.at(n, m);
      const double hl = sub.hl.at(n, m);
      const double hhv = sub.hh.at(n, m);
      // Undo the column pass, then the row pass.
      const double la = (ll + lh) * kInvSqrt2;
      const double lb = (ll - lh) * kInvSqrt2;
      const double ha = (hl + hhv) * kInvSqrt2;
      const double hb = (hl - hhv) * kInvSqrt2;
      out.at(2 * n, 2 * m) = (la + ha) * kInvSqrt2;
      out.at(2 * n + 1, 2 * m) = (la - ha) * kInvSqrt2;
      out.at(2 * n, 2 * m + 1) = (lb + hb) * kInvSqrt2;
      out.at(2 * n + 1, 2 * m + 1) = (lb - hb) * kInvSqrt2;
    }
  }
  return out;
}

FloatPlane normalize_sigmoid(const FloatPlane& plane, const NormParams& p) {
  p.validate();
  FloatPlane out(plane.width(), plane.height());
  auto src = plane.data();
  auto dst = out.data();
  const double span = p.out_max - p.out_min;
  for (std::size_t i = 0; i < src.size(); ++i) {
    dst[i] = span / (1.0 + std::exp(-(src[i] - p.beta) / p.alpha)) + p.out_min;
  }
  return out;
}

double otsu_cut(const FloatPlane& plane) {
  if (plane.empty()) throw InvalidArgument("otsu_cut: empty plane");
  const auto [lo_it, hi_it] = std::minmax_element(plane.data().begin(), plane.data().end());
  const double lo = *lo_it;
  const double hi = *hi_it;
  if (lo == hi) return lo;
  const double scale = 255.0 / (hi - lo);
  FloatPlane scaled(plane.width(), plane.height());
  auto src = plane.data();
  auto dst = scaled.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = (src[i] - lo) * scale;
  const int t = otsu_threshold(scaled);
  return lo + (t - 0.5) / scale;
}

NormParams auto_norm_params(const FloatPlane& plane, const NormOverrides& overrides) {
  NormParams p;
  if (!plane.empty()) {
    const auto data = plane.data();
    // Shifted by the first sample so constant planes give their value exactly.
    const double shift = data.front();
    double offset = 0.0;
    for (double v : data) offset += v - shift;
    const double mean = shift + offset / static_cast<double>(data.size());
    double var = 0.0;
    for (double v : data) var += (v - mean) * (v - mean);
    var /= static_cast<double>(data.size());
    p.alpha = std::max(std::sqrt(var), kMinAlpha);
    p.beta = overrides.beta_rule == BetaRule::mean ? mean : otsu_cut(plane);
  }
  if (overrides.alpha) p.alpha = *overrides.alpha;
  if (overrides.beta) p.beta = *overrides.beta;
  p.validate();
  return p;
}

FloatPlane stage1_channel_transform(const FloatPlane& plane,
                                    const NormOverrides& overrides) {
  const FloatPlane ll = dwt2_haar(pad_to_even(plane)).ll;
  const FloatPlane normalized = normalize_sigmoid(ll, auto_norm_params(ll, overrides));
  return resize_bicubic(normalized, plane.width(), plane.height());
}

FloatPlane haar_ll_upsampled(const FloatPlane& plane) {
  return resize_bicubic(dwt2_haar(pad_to_even(plane)).ll, plane.width(), plane.height());
}

std::array<Raster, 4> subband_debug_images(const SubbandSet& sub) {
  auto render = [](const FloatPlane& band) {
    return to_raster(normalize_sigmoid(band, auto_norm_params(band)));
  };
  return {render(sub.ll), render(sub.hl), render(sub.lh), render(sub.hh)};
}

}  // namespace docbin
