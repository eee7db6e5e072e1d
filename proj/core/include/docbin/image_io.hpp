#pragma once

#include <filesystem>

#include "docbin/raster.hpp"

namespace docbin {

/// Decodes PNG, BMP or TIFF into an 8-bit raster. Gray stays single-channel;
/// color and color+alpha become 3-channel RGB (alpha dropped).
Raster read_raster(const std::filesystem::path& path);

/// Encodes losslessly; the format follows the extension (.png, .bmp, .tif).
void write_raster(const std::filesystem::path& path, const Raster& img);

/// True for the extensions read_raster understands.
bool is_image_file(const std::filesystem::path& path);

}  // namespace docbin
