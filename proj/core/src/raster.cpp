#include "docbin/raster.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace docbin {
namespace {

void check_dims(int width, int height, int channels) {
  if (width < 0 || height < 0) {
    throw InvalidArgument("negative image dimensions");
  }
  if (channels != 1 && channels != 3) {
    throw InvalidArgument("raster channels must be 1 or 3, got " +
                          std::to_string(channels));
  }
}

std::uint8_t to_byte(double v) {
  return static_cast<std::uint8_t>(std::lround(std::clamp(v, 0.0, 255.0)));
}

constexpr double kCubicA = -0.5;

double keys_kernel(double x) {
  x = std::abs(x);
  if (x <= 1.0) {
    return ((kCubicA + 2.0) * x - (kCubicA + 3.0)) * x * x + 1.0;
  }
  if (x < 2.0) {
    return ((kCubicA * x - 5.0 * kCubicA) * x + 8.0 * kCubicA) * x - 4.0 * kCubicA;
  }
  return 0.0;
}

struct Taps {
  int ref;           // clamped floor index
  int index[4];      // clamped neighbor indices
  double weight[4];
};

std::vector<Taps> make_taps(int in_size, int out_size) {
  std::vector<Taps> taps(out_size);
  const double scale = static_cast<double>(in_size) / out_size;
  for (int d = 0; d < out_size; ++d) {
    const double src = (d + 0.5) * scale - 0.5;
    const double base = std::floor(src);
    const double t = src - base;
    const int i0 = static_cast<int>(base);
    Taps& tp = taps[d];
    tp.ref = std::clamp(i0, 0, in_size - 1);
    for (int k = 0; k < 4; ++k) {
      tp.index[k] = std::clamp(i0 - 1 + k, 0, in_size - 1);
    }
    tp.weight[0] = keys_kernel(t + 1.0);
    tp.weight[1] = keys_kernel(t);
    tp.weight[2] = keys_kernel(1.0 - t);
    tp.weight[3] = keys_kernel(2.0 - t);
  }
  return taps;
}

// Sums are taken relative to the reference tap so that constant runs
// reproduce exactly.
inline double apply_taps(const Taps& tp, const double* src, std::size_t stride) {
  const double ref = src[tp.ref * stride];
  double acc = 0.0;
  for (int k = 0; k < 4; ++k) {
    acc += tp.weight[k] * (src[tp.index[k] * stride] - ref);
  }
  return ref + acc;
}

}  // namespace

Raster::Raster(int width, int height, int channels, std::uint8_t fill)
    : width_(width), height_(height), channels_(channels) {
  check_dims(width, height, channels);
  data_.assign(static_cast<std::size_t>(width) * height * channels, fill);
}

Raster::Raster(int width, int height, int channels, std::vector<std::uint8_t> data)
    : width_(width), height_(height), channels_(channels), data_(std::move(data)) {
  check_dims(width, height, channels);
  if (data_.size() != static_cast<std::size_t>(width) * height * channels) {
    throw InvalidArgument("raster data length does not match dimensions");
  }
}

FloatPlane::FloatPlane(int width, int height, double fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) throw InvalidArgument("negative plane dimensions");
  if (!std::isfinite(fill)) throw InvalidArgument("non-finite plane fill");
  data_.assign(static_cast<std::size_t>(width) * height, fill);
}

FloatPlane::FloatPlane(int width, int height, std::vector<double> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 0 || height < 0) throw InvalidArgument("negative plane dimensions");
  if (data_.size() != static_cast<std::size_t>(width) * height) {
    throw InvalidArgument("plane data length does not match dimensions");
  }
  if (!std::all_of(data_.begin(), data_.end(), [](double v) { return std::isfinite(v); })) {
    throw InvalidArgument("plane contains non-finite values");
  }
}

BinaryMask::BinaryMask(int width, int height, bool fill)
    : width_(width), height_(height) {
  if (width < 0 || height < 0) throw InvalidArgument("negative mask dimensions");
  data_.assign(static_cast<std::size_t>(width) * height, fill ? 1 : 0);
}

std::size_t BinaryMask::count_foreground() const noexcept {
  return static_cast<std::size_t>(std::count(data_.begin(), data_.end(), 1));
}

Raster BinaryMask::to_raster() const {
  Raster out(width_, height_, 1);
  auto dst = out.data();
  for (std::size_t i = 0; i < data_.size(); ++i) dst[i] = data_[i] ? 0 : 255;
  return out;
}

BinaryMask BinaryMask::from_raster(const Raster& img) {
  return binarize(luma_plane(img), Threshold::unit(0.5));
}

ChannelBundle split_channels(const Raster& img) {
  if (img.channels() != 3) {
    throw InvalidArgument(
        "split_channels needs a 3-channel raster; use the gray path for "
        "single-channel images");
  }
  const int w = img.width();
  const int h = img.height();
  ChannelBundle b{FloatPlane(w, h), FloatPlane(w, h), FloatPlane(w, h), FloatPlane(w, h)};
  auto src = img.data();
  auto gray = b.gray.data();
  auto red = b.red.data();
  auto green = b.green.data();
  auto blue = b.blue.data();
  for (std::size_t i = 0, n = static_cast<std::size_t>(w) * h; i < n; ++i) {
    const double r = src[3 * i];
    const double g = src[3 * i + 1];
    const double bl = src[3 * i + 2];
    red[i] = r;
    green[i] = g;
    blue[i] = bl;
    gray[i] = kLumaRed * r + kLumaGreen * g + kLumaBlue * bl;
  }
  return b;
}

Raster merge_channels(const FloatPlane& red, const FloatPlane& green,
                      const FloatPlane& blue) {
  if (!red.same_shape(green) || !red.same_shape(blue)) {
    throw StructuralError("merge_channels: plane dimensions differ");
  }
  Raster out(red.width(), red.height(), 3);
  auto dst = out.data();
  auto r = red.data();
  auto g = green.data();
  auto b = blue.data();
  for (std::size_t i = 0; i < r.size(); ++i) {
    dst[3 * i] = to_byte(r[i]);
    dst[3 * i + 1] = to_byte(g[i]);
    dst[3 * i + 2] = to_byte(b[i]);
  }
  return out;
}

FloatPlane channel_plane(const Raster& img, int c) {
  if (c < 0 || c >= img.channels()) throw InvalidArgument("channel index out of range");
  FloatPlane out(img.width(), img.height());
  auto src = img.data();
  auto dst = out.data();
  const int ch = img.channels();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = src[i * ch + c];
  return out;
}

FloatPlane luma_plane(const Raster& img) {
  if (img.channels() == 1) return channel_plane(img, 0);
  return split_channels(img).gray;
}

Raster to_raster(const FloatPlane& plane) {
  Raster out(plane.width(), plane.height(), 1);
  auto src = plane.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = to_byte(src[i]);
  return out;
}

FloatPlane resize_bicubic(const FloatPlane& plane, int new_width, int new_height) {
  if (plane.empty()) throw InvalidArgument("resize_bicubic: empty input plane");
  if (new_width < 1 || new_height < 1) {
    throw InvalidArgument("resize_bicubic: target dimensions must be positive");
  }
  const int w = plane.width();
  const int h = plane.height();
  if (w == new_width && h == new_height) return plane;

  const auto xtaps = make_taps(w, new_width);
  const auto ytaps = make_taps(h, new_height);

  std::vector<double> horiz(static_cast<std::size_t>(new_width) * h);
  const double* src = plane.data().data();
  for (int y = 0; y < h; ++y) {
    const double* row = src + static_cast<std::size_t>(y) * w;
    double* out = horiz.data() + static_cast<std::size_t>(y) * new_width;
    for (int x = 0; x < new_width; ++x) out[x] = apply_taps(xtaps[x], row, 1);
  }

  std::vector<double> result(static_cast<std::size_t>(new_width) * new_height);
  for (int y = 0; y < new_height; ++y) {
    double* out = result.data() + static_cast<std::size_t>(y) * new_width;
    for (int x = 0; x < new_width; ++x) {
      out[x] = apply_taps(ytaps[y], horiz.data() + x, new_width);
    }
  }
  return FloatPlane(new_width, new_height, std::move(result));
}

FloatPlane pad_edge(const FloatPlane& plane, int new_width, int new_height) {
  if (plane.empty()) throw InvalidArgument("pad_edge: empty plane");
  if (new_width < plane.width() || new_height < plane.height()) {
    throw InvalidArgument("pad_edge: target smaller than source");
  }
  FloatPlane out(new_width, new_height);
  for (int y = 0; y < new_height; ++y) {
    const int sy = std::min(y, plane.height() - 1);
    for (int x = 0; x < new_width; ++x) {
      out.at(x, y) = plane.at(std::min(x, plane.width() - 1), sy);
    }
  }
  return out;
}

FloatPlane crop(const FloatPlane& plane, int width, int height) {
  if (width > plane.width() || height > plane.height() || width < 0 || height < 0) {
    throw InvalidArgument("crop: region exceeds plane");
  }
  FloatPlane out(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) out.at(x, y) = plane.at(x, y);
  }
  return out;
}

std::vector<std::uint64_t> histogram256(const FloatPlane& plane) {
  std::vector<std::uint64_t> hist(256, 0);
  for (double v : plane.data()) ++hist[to_byte(v)];
  return hist;
}

int otsu_threshold(const FloatPlane& plane) {
  if (plane.empty()) throw InvalidArgument("otsu_threshold: empty plane");
  using boost::multiprecision::int256_t;

  const auto hist = histogram256(plane);
  std::uint64_t total = 0;
  std::uint64_t total_sum = 0;
  for (int v = 0; v < 256; ++v) {
    total += hist[v];
    total_sum += hist[v] * static_cast<std::uint64_t>(v);
  }

  // Between-class variance times N^2 equals (S0*N - S*w0)^2 / (w0*w1).
  // Candidates are compared as exact fractions.
  int best_t = -1;
  int256_t best_num = 0;
  int256_t best_den = 1;
  std::uint64_t w0 = 0;
  std::uint64_t s0 = 0;
  for (int t = 0; t < 256; ++t) {
    if (t > 0) {
      w0 += hist[t - 1];
      s0 += hist[t - 1] * static_cast<std::uint64_t>(t - 1);
    }
    const std::uint64_t w1 = total - w0;
    if (w0 == 0 || w1 == 0) continue;
    const int256_t diff = int256_t(s0) * total - int256_t(total_sum) * w0;
    const int256_t num = diff * diff;
    const int256_t den = int256_t(w0) * w1;
    if (best_t < 0 || num * best_den > best_num * den) {
      best_t = t;
      best_num = num;
      best_den = den;
    }
  }
  if (best_t < 0 || best_num == 0) {
    // Single occupied bin.
    for (int v = 0; v < 256; ++v) {
      if (hist[v] != 0) return v;
    }
  }
  return best_t;
}

BinaryMask binarize(const FloatPlane& plane, Threshold t) {
  BinaryMask out(plane.width(), plane.height());
  auto src = plane.data();
  const double cut = t.cut();
  for (int y = 0; y < plane.height(); ++y) {
    for (int x = 0; x < plane.width(); ++x) {
      out.set(x, y, src[static_cast<std::size_t>(y) * plane.width() + x] < cut);
    }
  }
  return out;
}

BinaryMask binarize_otsu(const FloatPlane& plane) {
  const int t = otsu_threshold(plane);
  BinaryMask out(plane.width(), plane.height());
  for (int y = 0; y < plane.height(); ++y) {
    for (int x = 0; x < plane.width(); ++x) {
      out.set(x, y, to_byte(plane.at(x, y)) < t);
    }
  }
  return out;
}

}  // namespace docbin
