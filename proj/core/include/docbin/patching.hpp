#pragma once

#include <vector>

#include "docbin/raster.hpp"

namespace docbin {

inline constexpr int kDefaultPatchSize = 224;

/// Tiling geometry shared by image grids, plane grids and patch manifests.
struct GridGeometry {
  int patch_size = kDefaultPatchSize;
  int rows = 0;
  int cols = 0;
  int pad_right = 0;
  int pad_bottom = 0;
  int original_width = 0;
  int original_height = 0;

  /// Smallest grid covering a width x height image.
  static GridGeometry cover(int width, int height, int patch_size);

  int patch_count() const noexcept { return rows * cols; }
  /// Throws StructuralError if the padding relations do not hold.
  void validate() const;

  friend bool operator==(const GridGeometry&, const GridGeometry&) = default;
};

/// Non-overlapping row-major tiles of one raster.
struct PatchGrid {
  GridGeometry geometry;
  std::vector<Raster> patches;

  const Raster& at(int row, int col) const {
    return patches[static_cast<std::size_t>(row) * geometry.cols + col];
  }
  Raster& at(int row, int col) {
    return patches[static_cast<std::size_t>(row) * geometry.cols + col];
  }

  friend bool operator==(const PatchGrid&, const PatchGrid&) = default;
};

/// Same tiling over a real-valued plane.
struct PlaneGrid {
  GridGeometry geometry;
  std::vector<FloatPlane> patches;

  const FloatPlane& at(int row, int col) const {
    return patches[static_cast<std::size_t>(row) * geometry.cols + col];
  }
  FloatPlane& at(int row, int col) {
    return patches[static_cast<std::size_t>(row) * geometry.cols + col];
  }
};

/// Pads right/bottom by edge replication to a multiple of `patch_size` and
/// tiles left-to-right, top-to-bottom.
PatchGrid split_patches(const Raster& img, int patch_size = kDefaultPatchSize);
PlaneGrid split_patches(const FloatPlane& plane, int patch_size = kDefaultPatchSize);

/// Places the patches back and crops the padding.
Raster reassemble(const PatchGrid& grid);
FloatPlane reassemble(const PlaneGrid& grid);

}  // namespace docbin
