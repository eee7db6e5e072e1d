#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "docbin/error.hpp"

namespace docbin {

/// 8-bit image, 1 or 3 channels, row-major and channel-interleaved (RGB order).
class Raster {
 public:
  Raster() = default;
  Raster(int width, int height, int channels, std::uint8_t fill = 0);
  Raster(int width, int height, int channels, std::vector<std::uint8_t> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  int channels() const noexcept { return channels_; }
  bool empty() const noexcept { return data_.empty(); }

  std::uint8_t at(int x, int y, int c = 0) const {
    return data_[index(x, y, c)];
  }
  std::uint8_t& at(int x, int y, int c = 0) { return data_[index(x, y, c)]; }

  std::span<const std::uint8_t> data() const noexcept { return data_; }
  std::span<std::uint8_t> data() noexcept { return data_; }

  friend bool operator==(const Raster&, const Raster&) = default;

 private:
  std::size_t index(int x, int y, int c) const noexcept {
    return (static_cast<std::size_t>(y) * width_ + x) * channels_ + c;
  }

  int width_ = 0;
  int height_ = 0;
  int channels_ = 0;
  std::vector<std::uint8_t> data_;
};

/// Real-valued single-channel workspace.
class FloatPlane {
 public:
  FloatPlane() = default;
  FloatPlane(int width, int height, double fill = 0.0);
  /// Throws InvalidArgument if `data` has the wrong length or a non-finite value.
  FloatPlane(int width, int height, std::vector<double> data);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  bool empty() const noexcept { return data_.empty(); }
  std::size_t size() const noexcept { return data_.size(); }

  double at(int x, int y) const { return data_[index(x, y)]; }
  double& at(int x, int y) { return data_[index(x, y)]; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  bool same_shape(const FloatPlane& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const FloatPlane&, const FloatPlane&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<double> data_;
};

struct ChannelBundle {
  FloatPlane gray;
  FloatPlane red;
  FloatPlane green;
  FloatPlane blue;
};

/// Per-pixel text/background labels. Foreground is text, drawn as 0.
class BinaryMask {
 public:
  BinaryMask() = default;
  BinaryMask(int width, int height, bool fill = false);

  int width() const noexcept { return width_; }
  int height() const noexcept { return height_; }
  std::size_t size() const noexcept { return data_.size(); }

  bool foreground(int x, int y) const { return data_[index(x, y)] != 0; }
  void set(int x, int y, bool fg) { data_[index(x, y)] = fg ? 1 : 0; }

  /// 0/1 bytes, row-major.
  std::span<const std::uint8_t> data() const noexcept { return data_; }

  std::size_t count_foreground() const noexcept;
  bool same_shape(const BinaryMask& other) const noexcept {
    return width_ == other.width_ && height_ == other.height_;
  }

  /// Single-channel raster: foreground 0, background 255.
  Raster to_raster() const;
  /// Decodes a GT-style raster with threshold 0.5 (foreground iff luma < 127.5).
  static BinaryMask from_raster(const Raster& img);

  friend bool operator==(const BinaryMask&, const BinaryMask&) = default;

 private:
  std::size_t index(int x, int y) const noexcept {
    return static_cast<std::size_t>(y) * width_ + x;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<std::uint8_t> data_;
};

/// A binarization cut. Pixels strictly darker than the cut are text.
class Threshold {
 public:
  /// Cut expressed on [0,1]; 0.5 corresponds to intensity 127.5.
  static constexpr Threshold unit(double t) { return Threshold(t * 255.0); }
  static constexpr Threshold intensity(double cut) { return Threshold(cut); }

  constexpr double cut() const noexcept { return cut_; }

 private:
  constexpr explicit Threshold(double cut) : cut_(cut) {}
  double cut_;
};

/// ITU-R BT.601 luma weights.
inline constexpr double kLumaRed = 0.299;
inline constexpr double kLumaGreen = 0.587;
inline constexpr double kLumaBlue = 0.114;

/// Splits a 3-channel raster into gray (BT.601 luma), red, green and blue
/// planes. Single-channel input is rejected; gray images take the gray path.
ChannelBundle split_channels(const Raster& img);

/// Recombines three planes (rounded, clamped to [0,255]) into an RGB raster.
Raster merge_channels(const FloatPlane& red, const FloatPlane& green,
                      const FloatPlane& blue);

/// Channel `c` of `img` as a plane.
FloatPlane channel_plane(const Raster& img, int c);

/// Gray view of any raster: the channel itself for 1-channel input, luma otherwise.
FloatPlane luma_plane(const Raster& img);

/// Single-channel raster from a plane, rounded half away from zero and clamped.
Raster to_raster(const FloatPlane& plane);

/// Keys cubic convolution (a = -0.5), pixel-center aligned, edge-replicated.
FloatPlane resize_bicubic(const FloatPlane& plane, int new_width, int new_height);

/// Edge-replicating pad on the right and bottom.
FloatPlane pad_edge(const FloatPlane& plane, int new_width, int new_height);
/// Top-left crop.
FloatPlane crop(const FloatPlane& plane, int width, int height);

/// 256-bin histogram of the plane rounded and clamped to [0,255].
std::vector<std::uint64_t> histogram256(const FloatPlane& plane);

/// Otsu's global threshold. The returned t splits the histogram into
/// {v < t} and {v >= t}; the smallest maximizer of between-class variance
/// wins. A single occupied bin returns that bin's value.
int otsu_threshold(const FloatPlane& plane);

/// Foreground iff intensity < cut.
BinaryMask binarize(const FloatPlane& plane, Threshold t);

/// Otsu binarization on the same rounded intensities the threshold was
/// chosen from: foreground iff round(v) < otsu_threshold(plane).
BinaryMask binarize_otsu(const FloatPlane& plane);

}  // namespace docbin
