#include "docbin/patching.hpp"

#include <algorithm>
#include <string>

namespace docbin {
namespace {

std::string coord(int row, int col) {
  return "(" + std::to_string(row) + "," + std::to_string(col) + ")";
}

// Pixel accessors unify Raster and FloatPlane for the shared tiling code.
struct RasterOps {
  using Image = Raster;
  static int channels(const Raster& r) { return r.channels(); }
  static Raster make(int w, int h, int c) { return Raster(w, h, c); }
  static void copy(const Raster& src, int sx, int sy, Raster& dst, int dx, int dy) {
    for (int c = 0; c < src.channels(); ++c) dst.at(dx, dy, c) = src.at(sx, sy, c);
  }
};

struct PlaneOps {
  using Image = FloatPlane;
  static int channels(const FloatPlane&) { return 1; }
  static FloatPlane make(int w, int h, int) { return FloatPlane(w, h); }
  static void copy(const FloatPlane& src, int sx, int sy, FloatPlane& dst, int dx, int dy) {
    dst.at(dx, dy) = src.at(sx, sy);
  }
};

template <typename Ops>
std::vector<typename Ops::Image> tile(const typename Ops::Image& img,
                                      const GridGeometry& g) {
  std::vector<typename Ops::Image> patches;
  patches.reserve(g.patch_count());
  const int n = g.patch_size;
  const int channels = Ops::channels(img);
  for (int row = 0; row < g.rows; ++row) {
    for (int col = 0; col < g.cols; ++col) {
      auto patch = Ops::make(n, n, channels);
      for (int y = 0; y < n; ++y) {
        const int sy = std::min(row * n + y, img.height() - 1);
        for (int x = 0; x < n; ++x) {
          const int sx = std::min(col * n + x, img.width() - 1);
          Ops::copy(img, sx, sy, patch, x, y);
        }
      }
      patches.push_back(std::move(patch));
    }
  }
  return patches;
}

template <typename Ops>
typename Ops::Image untile(const std::vector<typename Ops::Image>& patches,
                           const GridGeometry& g) {
  g.validate();
  if (patches.size() != static_cast<std::size_t>(g.patch_count())) {
    throw StructuralError("reassemble: expected " + std::to_string(g.patch_count()) +
                          " patches, got " + std::to_string(patches.size()));
  }
  const int n = g.patch_size;
  const int channels = Ops::channels(patches.front());
  for (int row = 0; row < g.rows; ++row) {
    for (int col = 0; col < g.cols; ++col) {
      const auto& p = patches[static_cast<std::size_t>(row) * g.cols + col];
      if (p.width() != n || p.height() != n || Ops::channels(p) != channels) {
        throw StructuralError("reassemble: patch " + coord(row, col) +
                              " does not match the grid geometry");
      }
    }
  }

  auto out = Ops::make(g.original_width, g.original_height, channels);
  for (int y = 0; y < g.original_height; ++y) {
    const int row = y / n;
    for (int x = 0; x < g.original_width; ++x) {
      const int col = x / n;
      Ops::copy(patches[static_cast<std::size_t>(row) * g.cols + col], x - col * n,
                y - row * n, out, x, y);
    }
  }
  return out;
}

}  // namespace

GridGeometry GridGeometry::cover(int width, int height, int patch_size) {
  if (patch_size < 1) throw InvalidArgument("patch size must be at least 1");
  if (width < 1 || height < 1) throw InvalidArgument("cannot tile an empty image");
  GridGeometry g;
  g.patch_size = patch_size;
  g.cols = (width + patch_size - 1) / patch_size;
  g.rows = (height + patch_size - 1) / patch_size;
  g.pad_right = g.cols * patch_size - width;
  g.pad_bottom = g.rows * patch_size - height;
  g.original_width = width;
  g.original_height = height;
  return g;
}

void GridGeometry::validate() const {
  if (patch_size < 1 || rows < 1 || cols < 1 || original_width < 1 ||
      original_height < 1 || pad_right < 0 || pad_bottom < 0 ||
      pad_right >= patch_size || pad_bottom >= patch_size ||
      rows * patch_size != original_height + pad_bottom ||
      cols * patch_size != original_width + pad_right) {
    throw StructuralError("inconsistent grid geometry");
  }
}

PatchGrid split_patches(const Raster& img, int patch_size) {
  if (img.empty()) throw InvalidArgument("split_patches: empty image");
  PatchGrid grid;
  grid.geometry = GridGeometry::cover(img.width(), img.height(), patch_size);
  grid.patches = tile<RasterOps>(img, grid.geometry);
  return grid;
}

PlaneGrid split_patches(const FloatPlane& plane, int patch_size) {
  if (plane.empty()) throw InvalidArgument("split_patches: empty plane");
  PlaneGrid grid;
  grid.geometry = GridGeometry::cover(plane.width(), plane.height(), patch_size);
  grid.patches = tile<PlaneOps>(plane, grid.geometry);
  return grid;
}

Raster reassemble(const PatchGrid& grid) {
  return untile<RasterOps>(grid.patches, grid.geometry);
}

FloatPlane reassemble(const PlaneGrid& grid) {
  return untile<PlaneOps>(grid.patches, grid.geometry);
}

}  // namespace docbin
