#include "docbin/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>

#include <json.hpp>

#include "docbin/image_io.hpp"

namespace docbin {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

bool ends_with(const std::string& s, const std::string& suffix) {
  return s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

std::vector<fs::path> image_files(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

IngestResult ingest_dataset(const fs::path& root, const std::vector<std::string>& gt_suffixes) {
  if (!fs::is_directory(root)) throw IoError("dataset root is not a directory: " + root.string());
  IngestResult result;
  std::map<std::string, fs::path> originals;
  std::map<std::string, fs::path> gts;
  for (const fs::path& file : image_files(root)) {
    const std::string stem = file.stem().string();
    bool is_gt = false;
    for (const std::string& suffix : gt_suffixes) {
      if (ends_with(stem, suffix)) {
        const std::string base = stem.substr(0, stem.size() - suffix.size());
        if (!gts.emplace(base, file).second) {
          result.warnings.push_back("duplicate GT for '" + base + "': " + file.string());
        }
        is_gt = true;
        break;
      }
    }
    if (!is_gt && !originals.emplace(stem, file).second) {
      result.warnings.push_back("duplicate original for '" + stem + "': " + file.string());
    }
  }
  for (const auto& [stem, path] : originals) {
    auto it = gts.find(stem);
    if (it == gts.end()) {
      result.unmatched.push_back(path);
      result.warnings.push_back("no GT for " + path.string());
    } else {
      result.pairs.push_back({stem, path, it->second});
    }
  }
  if (originals.empty()) result.warnings.push_back("no images found in " + root.string());
  return result;
}

std::optional<fs::path> find_groundtruth(const fs::path& dir, const std::string& stem,
                                         const std::vector<std::string>& gt_suffixes) {
  const auto files = image_files(dir);
  for (const std::string& suffix : gt_suffixes) {
    for (const fs::path& f : files) {
      if (f.stem().string() == stem + suffix) return f;
    }
  }
  for (const fs::path& f : files) {
    if (f.stem().string() == stem) return f;
  }
  return std::nullopt;
}

BinaryMask load_groundtruth(const fs::path& path) {
  return BinaryMask::from_raster(read_raster(path));
}

std::string report_to_json(std::span<const ImageResult> results) {
  json images = json::array();
  std::vector<MetricsReport> ok;
  std::size_t failures = 0;
  for (const ImageResult& r : results) {
    json entry = {{"file", r.file}};
    if (r.report) {
      const MetricsReport& m = *r.report;
      entry["fm"] = m.fm;
      entry["pfm"] = m.pfm;
      entry["psnr"] = number_or_null(m.psnr);
      entry["drd"] = m.drd;
      entry["avg"] = m.avg ? json(*m.avg) : json(nullptr);
      entry["counts"] = {{"tp", m.counts.tp}, {"fp", m.counts.fp},
                         {"fn", m.counts.fn}, {"tn", m.counts.tn}};
      ok.push_back(m);
    } else {
      entry["error"] = r.error.value_or("unknown error");
      ++failures;
    }
    images.push_back(std::move(entry));
  }
  const DatasetMean mean = mean_report(ok);
  json j;
  j["images"] = std::move(images);
  j["mean"] = {{"count", mean.count},
               {"fm", mean.fm},
               {"pfm", mean.pfm},
               {"psnr", number_or_null(mean.psnr)},
               {"drd", mean.drd},
               {"avg", mean.avg ? json(*mean.avg) : json(nullptr)}};
  j["failures"] = failures;
  return j.dump(2);
}

void write_report(const fs::path& path, std::span<const ImageResult> results) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write report: " + path.string());
  out << report_to_json(results) << '\n';
}

}  // namespace docbin
