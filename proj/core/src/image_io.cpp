#include "docbin/image_io.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

namespace docbin {
namespace {

std::string lower_extension(const std::filesystem::path& path) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return ext;
}

}  // namespace

bool is_image_file(const std::filesystem::path& path) {
  const std::string ext = lower_extension(path);
  return ext == ".png" || ext == ".bmp" || ext == ".tif" || ext == ".tiff";
}

Raster read_raster(const std::filesystem::path& path) {
  cv::Mat mat = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
  if (mat.empty()) throw IoError("cannot decode image: " + path.string());
  if (mat.depth() != CV_8U) {
    throw IoError("only 8-bit images are supported: " + path.string());
  }

  const int src_channels = mat.channels();
  if (src_channels != 1 && src_channels != 3 && src_channels != 4) {
    throw IoError("unsupported channel count in " + path.string());
  }
  const int channels = src_channels == 1 ? 1 : 3;
  Raster out(mat.cols, mat.rows, channels);
  for (int y = 0; y < mat.rows; ++y) {
    const std::uint8_t* row = mat.ptr<std::uint8_t>(y);
    for (int x = 0; x < mat.cols; ++x) {
      const std::uint8_t* px = row + static_cast<std::size_t>(x) * src_channels;
      if (channels == 1) {
        out.at(x, y) = px[0];
      } else {
        // OpenCV stores BGR(A).
        out.at(x, y, 0) = px[2];
        out.at(x, y, 1) = px[1];
        out.at(x, y, 2) = px[0];
      }
    }
  }
  return out;
}

void write_raster(const std::filesystem::path& path, const Raster& img) {
  if (img.empty()) throw IoError("refusing to write an empty image: " + path.string());
  const int type = img.channels() == 1 ? CV_8UC1 : CV_8UC3;
  cv::Mat out(img.height(), img.width(), type);
  for (int y = 0; y < img.height(); ++y) {
    std::uint8_t* row = out.ptr<std::uint8_t>(y);
    for (int x = 0; x < img.width(); ++x) {
      if (img.channels() == 1) {
        row[x] = img.at(x, y);
      } else {
        row[3 * x] = img.at(x, y, 2);
        row[3 * x + 1] = img.at(x, y, 1);
        row[3 * x + 2] = img.at(x, y, 0);
      }
    }
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  if (!cv::imwrite(path.string(), out)) {
    throw IoError("cannot encode image: " + path.string());
  }
}

}  // namespace docbin
