#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "docbin/dataset.hpp"
#include "docbin/pipeline.hpp"

namespace docbin::cli {

enum ExitCode : int { kOk = 0, kFatal = 1, kPartial = 2 };

inline constexpr const char* kWorkersEnv = "DOCBIN_WORKERS";

struct Options {
  RunConfig config;
  std::vector<std::string> gt_suffixes = kDefaultGtSuffixes;
  int workers = 1;
  std::optional<std::filesystem::path> report;
};

/// --workers wins, then DOCBIN_WORKERS, then the hardware thread count.
int resolve_workers(std::optional<int> flag);

/// Runs fn(0..n-1) on up to `workers` threads. Each index runs exactly once;
/// callers store results by index so output order never depends on timing.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

/// Images named on the command line: files are taken as-is, directories are
/// scanned (non-recursive) with GT files left out. Sorted, de-duplicated.
std::vector<std::filesystem::path> collect_inputs(const std::vector<std::filesystem::path>& inputs,
                                                  const std::vector<std::string>& gt_suffixes);

/// Writes <out>/<stem>/manifest.json plus Stage-1 patches (raw gray, transformed
/// red/green/blue) and, when a GT is found beside the input, per-channel GT patches.
int cmd_preprocess(const std::vector<std::filesystem::path>& inputs,
                   const std::filesystem::path& out, const Options& opts, std::ostream& log);

/// Writes <out>/<stem>.png masks (text black, background white).
int cmd_binarize(const std::vector<std::filesystem::path>& inputs,
                 const std::filesystem::path& out, const Options& opts, std::ostream& log);

/// Scores every mask in `pred_dir` against the matching GT in `gt_dir`.
int cmd_evaluate(const std::filesystem::path& pred_dir, const std::filesystem::path& gt_dir,
                 const Options& opts, std::ostream& log);

/// preprocess + binarize + evaluate over one dataset directory.
int cmd_pipeline(const std::filesystem::path& dataset, const std::filesystem::path& out,
                 const Options& opts, std::ostream& log);

/// Threshold binarization PSNR of raw, DWT and DWT+normalization subbands.
int cmd_study(const std::filesystem::path& dataset, const Options& opts, std::ostream& log);

}  // namespace docbin::cli
