#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "docbin/metrics.hpp"
#include "docbin/raster.hpp"

namespace docbin {

inline const std::vector<std::string> kDefaultGtSuffixes = {"_gt", "_GT"};

/// One document and its ground truth, paired by file stem.
struct DatasetPair {
  std::string stem;
  std::filesystem::path original;
  std::filesystem::path groundtruth;
};

struct IngestResult {
  std::vector<DatasetPair> pairs;  // sorted by stem
  std::vector<std::filesystem::path> unmatched;
  std::vector<std::string> warnings;
};

/// Scans `root` (non-recursive) for PNG/BMP/TIFF files. A file whose stem
/// ends in one of `gt_suffixes` is the GT of the file with the bare stem;
/// extensions need not agree. Throws IoError if `root` is not a directory.
IngestResult ingest_dataset(const std::filesystem::path& root,
                            const std::vector<std::string>& gt_suffixes = kDefaultGtSuffixes);

/// Finds the GT for `stem` in `dir`: `stem<suffix>.*` first, then `stem.*`.
std::optional<std::filesystem::path> find_groundtruth(
    const std::filesystem::path& dir, const std::string& stem,
    const std::vector<std::string>& gt_suffixes = kDefaultGtSuffixes);

/// Reads a GT image and thresholds it at 0.5.
BinaryMask load_groundtruth(const std::filesystem::path& path);

/// Per-image outcome in an evaluation report.
struct ImageResult {
  std::string file;
  std::optional<MetricsReport> report;
  std::optional<std::string> error;
};

/// JSON report: {"images": [...], "mean": {...}, "failures": n}. Infinite
/// PSNR and withheld avg are written as null.
std::string report_to_json(std::span<const ImageResult> results);
void write_report(const std::filesystem::path& path, std::span<const ImageResult> results);

}  // namespace docbin
