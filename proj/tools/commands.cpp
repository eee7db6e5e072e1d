#include "commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <thread>

#include "docbin/image_io.hpp"
#include "docbin/manifest.hpp"
#include "docbin/metrics.hpp"
#include "docbin/study.hpp"

namespace fs = std::filesystem;

namespace docbin::cli {
namespace {

bool has_gt_suffix(const fs::path& p, const std::vector<std::string>& suffixes) {
  const std::string stem = p.stem().string();
  return std::any_of(suffixes.begin(), suffixes.end(), [&](const std::string& s) {
    return stem.size() > s.size() && stem.compare(stem.size() - s.size(), s.size(), s) == 0;
  });
}

std::vector<fs::path> images_in(const fs::path& dir) {
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && is_image_file(entry.path())) files.push_back(entry.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

// GT stored beside an input under one of the suffixed names.
std::optional<fs::path> gt_beside(const fs::path& input, const std::vector<std::string>& suffixes) {
  const auto found = find_groundtruth(input.parent_path(), input.stem().string(), suffixes);
  if (!found || fs::equivalent(*found, input)) return std::nullopt;
  return found;
}

// Outcome of one per-image job, printed in input order once all jobs finish.
struct JobResult {
  bool ok = false;
  std::string message;
};

int run_jobs(const std::vector<fs::path>& inputs, int workers, std::ostream& log,
             const std::function<std::string(const fs::path&)>& job) {
  std::vector<JobResult> results(inputs.size());
  parallel_for(inputs.size(), workers, [&](std::size_t i) {
    try {
      results[i] = {true, job(inputs[i])};
    } catch (const std::exception& e) {
      results[i] = {false, e.what()};
    }
  });
  std::size_t failures = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (results[i].ok) {
      log << "ok    " << inputs[i].string();
      if (!results[i].message.empty()) log << " -> " << results[i].message;
      log << '\n';
    } else {
      log << "error " << inputs[i].string() << ": " << results[i].message << '\n';
      ++failures;
    }
  }
  return failures == 0 ? kOk : kPartial;
}

void check_unique_stems(const std::vector<fs::path>& inputs) {
  std::map<std::string, fs::path> seen;
  for (const fs::path& p : inputs) {
    const auto [it, fresh] = seen.emplace(p.stem().string(), p);
    if (!fresh) {
      throw InvalidArgument("inputs " + it->second.string() + " and " + p.string() +
                            " share the stem '" + it->first + "'");
    }
  }
}

std::optional<DebugSink> debug_sink(const RunConfig& cfg, const fs::path& input) {
  if (!cfg.debug_dump) return std::nullopt;
  return DebugSink(*cfg.debug_dump, input.stem().string());
}

std::string preprocess_one(const fs::path& input, const fs::path& out, const Options& opts) {
  const RunConfig& cfg = opts.config;
  const Raster img = read_raster(input);
  const auto sink = debug_sink(cfg, input);
  const Stage1Output s1 = run_stage1(img, cfg, sink ? &*sink : nullptr);
  const GridGeometry& geo = s1.geometry;

  std::optional<PatchGrid> gt_grid;
  if (const auto gt_path = gt_beside(input, opts.gt_suffixes)) {
    const BinaryMask gt = load_groundtruth(*gt_path);
    if (gt.width() != img.width() || gt.height() != img.height()) {
      throw StructuralError("GT " + gt_path->string() + " does not match the image size");
    }
    gt_grid = split_patches(gt.to_raster(), cfg.patch_size);
  }

  const std::string stem = input.stem().string();
  const fs::path dir = out / stem;
  PatchManifest manifest;
  manifest.source_id = stem;
  manifest.geometry = geo;

  auto emit = [&](int row, int col, ChannelTag tag, const FloatPlane& plane,
                  const std::optional<BinaryMask>& gt) {
    const std::string name = DebugSink::patch_name(row, col, tag) + ".png";
    PatchRecord rec{row, col, tag, "patches/" + name, std::nullopt};
    write_raster(dir / rec.path, to_raster(plane));
    if (gt) {
      rec.gt_path = "gt/" + name;
      write_raster(dir / *rec.gt_path, gt->to_raster());
    }
    manifest.records.push_back(std::move(rec));
  };

  for (int row = 0; row < geo.rows; ++row) {
    for (int col = 0; col < geo.cols; ++col) {
      const ChannelBundle& b = s1.patches[static_cast<std::size_t>(row) * geo.cols + col];
      std::optional<BinaryMask> y;
      if (gt_grid) y = BinaryMask::from_raster(gt_grid->at(row, col));
      emit(row, col, ChannelTag::gray, b.gray, y);
      if (!s1.color) continue;
      const std::pair<ChannelTag, const FloatPlane*> colors[] = {
          {ChannelTag::red, &b.red}, {ChannelTag::green, &b.green}, {ChannelTag::blue, &b.blue}};
      for (const auto& [tag, plane] : colors) {
        std::optional<BinaryMask> yk;
        if (y) yk = make_channel_groundtruth(*plane, *y, cfg.cut());
        emit(row, col, tag, *plane, yk);
      }
    }
  }
  write_manifest(dir / "manifest.json", manifest);
  return (dir / "manifest.json").string();
}

std::string binarize_one(const fs::path& input, const fs::path& out, const Options& opts) {
  const Raster img = read_raster(input);
  const auto sink = debug_sink(opts.config, input);
  const BinaryMask mask = binarize_document(img, opts.config, sink ? &*sink : nullptr);
  const fs::path target = out / (input.stem().string() + ".png");
  write_raster(target, mask.to_raster());
  return target.string();
}

std::string format_score(double v) {
  if (std::isinf(v)) return "inf";
  std::ostringstream s;
  s << std::fixed << std::setprecision(2) << v;
  return s.str();
}

}  // namespace

int resolve_workers(std::optional<int> flag) {
  if (flag) {
    if (*flag < 1) throw InvalidArgument("--workers must be at least 1");
    return *flag;
  }
  if (const char* env = std::getenv(kWorkersEnv); env && *env) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (*end != '\0' || n < 1) {
      throw InvalidArgument(std::string(kWorkersEnv) + " must be a positive integer");
    }
    return static_cast<int>(n);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn) {
  const std::size_t threads = std::min<std::size_t>(std::max(workers, 1), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  }
}

std::vector<fs::path> collect_inputs(const std::vector<fs::path>& inputs,
                                     const std::vector<std::string>& gt_suffixes) {
  std::set<fs::path> files;
  for (const fs::path& in : inputs) {
    if (fs::is_directory(in)) {
      for (const fs::path& f : images_in(in)) {
        if (!has_gt_suffix(f, gt_suffixes)) files.insert(f);
      }
    } else if (fs::is_regular_file(in)) {
      files.insert(in);
    } else {
      throw IoError("no such file or directory: " + in.string());
    }
  }
  return {files.begin(), files.end()};
}

int cmd_preprocess(const std::vector<fs::path>& inputs, const fs::path& out, const Options& opts,
                   std::ostream& log) {
  opts.config.validate();
  const auto files = collect_inputs(inputs, opts.gt_suffixes);
  if (files.empty()) throw InvalidArgument("preprocess: no input images");
  check_unique_stems(files);
  return run_jobs(files, opts.workers, log,
                  [&](const fs::path& f) { return preprocess_one(f, out, opts); });
}

int cmd_binarize(const std::vector<fs::path>& inputs, const fs::path& out, const Options& opts,
                 std::ostream& log) {
  opts.config.validate();
  const auto files = collect_inputs(inputs, opts.gt_suffixes);
  if (files.empty()) throw InvalidArgument("binarize: no input images");
  check_unique_stems(files);
  fs::create_directories(out);
  return run_jobs(files, opts.workers, log,
                  [&](const fs::path& f) { return binarize_one(f, out, opts); });
}

int cmd_evaluate(const fs::path& pred_dir, const fs::path& gt_dir, const Options& opts,
                 std::ostream& log) {
  for (const fs::path& d : {pred_dir, gt_dir}) {
    if (!fs::is_directory(d)) throw IoError("not a directory: " + d.string());
  }
  const auto preds = images_in(pred_dir);
  if (preds.empty()) throw InvalidArgument("evaluate: no masks in " + pred_dir.string());

  std::vector<ImageResult> results(preds.size());
  parallel_for(preds.size(), opts.workers, [&](std::size_t i) {
    ImageResult& r = results[i];
    r.file = preds[i].filename().string();
    try {
      const auto gt_path = find_groundtruth(gt_dir, preds[i].stem().string(), opts.gt_suffixes);
      if (!gt_path) throw IoError("no GT for '" + preds[i].stem().string() + "'");
      const BinaryMask gt = load_groundtruth(*gt_path);
      const BinaryMask pred = BinaryMask::from_raster(read_raster(preds[i]));
      if (!pred.same_shape(gt)) throw StructuralError("mask and GT sizes differ");
      r.report = evaluate(pred, gt);
    } catch (const std::exception& e) {
      r.error = e.what();
    }
  });

  std::size_t failures = 0;
  log << std::left << std::setw(28) << "file" << std::right << std::setw(8) << "FM"
      << std::setw(8) << "p-FM" << std::setw(8) << "PSNR" << std::setw(8) << "DRD" << std::setw(8)
      << "Avg" << '\n';
  std::vector<MetricsReport> ok;
  for (const ImageResult& r : results) {
    log << std::left << std::setw(28) << r.file << std::right;
    if (!r.report) {
      log << "  error: " << *r.error << '\n';
      ++failures;
      continue;
    }
    const MetricsReport& m = *r.report;
    ok.push_back(m);
    log << std::setw(8) << format_score(m.fm) << std::setw(8) << format_score(m.pfm)
        << std::setw(8) << format_score(m.psnr) << std::setw(8) << format_score(m.drd)
        << std::setw(8) << (m.avg ? format_score(*m.avg) : "-") << '\n';
  }
  const DatasetMean mean = mean_report(ok);
  log << std::left << std::setw(28) << "mean" << std::right << std::setw(8)
      << format_score(mean.fm) << std::setw(8) << format_score(mean.pfm) << std::setw(8)
      << format_score(mean.psnr) << std::setw(8) << format_score(mean.drd) << std::setw(8)
      << (mean.avg ? format_score(*mean.avg) : "-") << '\n';

  if (opts.report) write_report(*opts.report, results);
  return failures == 0 ? kOk : kPartial;
}

int cmd_pipeline(const fs::path& dataset, const fs::path& out, const Options& opts,
                 std::ostream& log) {
  const IngestResult ingest = ingest_dataset(dataset, opts.gt_suffixes);
  for (const std::string& w : ingest.warnings) log << "warning: " << w << '\n';
  if (ingest.pairs.empty()) throw InvalidArgument("pipeline: no image/GT pairs in " + dataset.string());
  std::vector<fs::path> originals;
  for (const DatasetPair& p : ingest.pairs) originals.push_back(p.original);

  Options eval_opts = opts;
  if (!eval_opts.report) eval_opts.report = out / "report.json";

  log << "[preprocess]\n";
  const int a = cmd_preprocess(originals, out / "patches", opts, log);
  log << "[binarize]\n";
  const int b = cmd_binarize(originals, out / "masks", opts, log);
  log << "[evaluate]\n";
  const int c = cmd_evaluate(out / "masks", dataset, eval_opts, log);
  const bool partial = a != kOk || b != kOk || c != kOk || !ingest.unmatched.empty();
  return partial ? kPartial : kOk;
}

int cmd_study(const fs::path& dataset, const Options& opts, std::ostream& log) {
  const IngestResult ingest = ingest_dataset(dataset, opts.gt_suffixes);
  for (const std::string& w : ingest.warnings) log << "warning: " << w << '\n';
  if (ingest.pairs.empty()) throw InvalidArgument("study: no image/GT pairs in " + dataset.string());

  std::vector<std::optional<SubbandPsnr>> rows(ingest.pairs.size());
  std::vector<std::string> errors(ingest.pairs.size());
  parallel_for(rows.size(), opts.workers, [&](std::size_t i) {
    try {
      const Raster img = read_raster(ingest.pairs[i].original);
      if (img.channels() != 3) throw InvalidArgument("study needs color images");
      rows[i] = subband_binarization_psnr(img, load_groundtruth(ingest.pairs[i].groundtruth),
                                          opts.config.patch_size, opts.config.cut(),
                                          opts.config.norm);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  });

  SubbandPsnr sum;
  std::size_t n = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (!rows[i]) {
      log << "error " << ingest.pairs[i].original.string() << ": " << errors[i] << '\n';
      continue;
    }
    ++n;
    sum.original += rows[i]->original;
    for (int k = 0; k < 4; ++k) {
      sum.dwt[k] += rows[i]->dwt[k];
      sum.dwt_norm[k] += rows[i]->dwt_norm[k];
    }
  }
  if (n == 0) return kFatal;
  const char* bands[] = {"LL", "HL", "LH", "HH"};
  log << "mean PSNR over " << n << " images (dB)\n";
  log << "original      " << format_score(sum.original / n) << '\n';
  for (int k = 0; k < 4; ++k) {
    log << bands[k] << "  DWT " << std::setw(8) << format_score(sum.dwt[k] / n)
        << "   DWT+norm " << std::setw(8) << format_score(sum.dwt_norm[k] / n) << '\n';
  }
  return n == rows.size() ? kOk : kPartial;
}

}  // namespace docbin::cli
