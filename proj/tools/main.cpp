// docbin command-line front end.
#include <CLI11.hpp>

#include <iostream>

#include "commands.hpp"

namespace fs = std::filesystem;
using namespace docbin;

namespace {

struct Flags {
  int patch_size = kDefaultPatchSize;
  int global_size = kDefaultGlobalSize;
  double omega = 0.5;
  double local_global_weight = 0.5;
  double threshold = 0.5;
  std::string color_enhancer = "baseline";
  std::string gray_enhancer = "baseline";
  std::string local_enhancer = "identity";
  std::string global_enhancer = "baseline";
  std::optional<double> alpha;
  std::optional<double> beta;
  std::string beta_rule = "otsu";
  std::vector<std::string> gt_suffixes = kDefaultGtSuffixes;
  std::optional<int> workers;
  std::optional<std::string> report;
  std::optional<std::string> debug_dump;
};

void add_run_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--patch-size", f.patch_size, "Patch edge in pixels")->capture_default_str();
  cmd.add_option("--global-size", f.global_size, "Edge of the resized global view")
      ->capture_default_str();
  cmd.add_option("--omega", f.omega, "Color weight against gray in channel fusion")
      ->capture_default_str();
  cmd.add_option("--local-global-weight", f.local_global_weight,
                 "Weight of the local prediction in the final blend")
      ->capture_default_str();
  cmd.add_option("--threshold", f.threshold, "Binarization threshold on [0,1]")
      ->capture_default_str();
  const char* kinds = "identity | baseline | external:MANIFEST";
  cmd.add_option("--color-enhancer", f.color_enhancer, kinds)->capture_default_str();
  cmd.add_option("--gray-enhancer", f.gray_enhancer, kinds)->capture_default_str();
  cmd.add_option("--local-enhancer", f.local_enhancer, kinds)->capture_default_str();
  cmd.add_option("--global-enhancer", f.global_enhancer, kinds)->capture_default_str();
  cmd.add_option("--alpha", f.alpha, "Fixed sigmoid slope (default: plane std)");
  cmd.add_option("--beta", f.beta, "Fixed sigmoid center (default: --beta-rule)");
  cmd.add_option("--beta-rule", f.beta_rule, "Automatic sigmoid center")
      ->check(CLI::IsMember({"otsu", "mean"}))
      ->capture_default_str();
  cmd.add_option("--debug-dump", f.debug_dump, "Directory for intermediate images");
}

void add_common_flags(CLI::App& cmd, Flags& f) {
  cmd.add_option("--gt-suffix", f.gt_suffixes, "GT file stem suffixes")->capture_default_str();
  cmd.add_option("--workers", f.workers,
                 std::string("Parallel images (default: $") + cli::kWorkersEnv +
                     " or CPU count)");
}

cli::Options make_options(const Flags& f) {
  cli::Options o;
  RunConfig& c = o.config;
  c.patch_size = f.patch_size;
  c.global_size = f.global_size;
  c.fusion = {f.omega, f.local_global_weight};
  c.threshold = f.threshold;
  c.norm.alpha = f.alpha;
  c.norm.beta = f.beta;
  c.norm.beta_rule = f.beta_rule == "mean" ? BetaRule::mean : BetaRule::otsu_cut;
  auto enhancer = [&](const std::string& text) {
    EnhancerKind k = parse_enhancer(text);
    if (auto* b = std::get_if<DwtNormBaseline>(&k)) b->norm = c.norm;
    return k;
  };
  c.color_enhancer = enhancer(f.color_enhancer);
  c.gray_enhancer = enhancer(f.gray_enhancer);
  c.local_enhancer = enhancer(f.local_enhancer);
  c.global_enhancer = enhancer(f.global_enhancer);
  if (f.debug_dump) c.debug_dump = fs::path(*f.debug_dump);
  c.validate();
  o.gt_suffixes = f.gt_suffixes;
  o.workers = cli::resolve_workers(f.workers);
  if (f.report) o.report = fs::path(*f.report);
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Document image binarization toolkit"};
  app.require_subcommand(1);
  Flags f;
  std::vector<std::string> inputs;
  std::string out, pred_dir, gt_dir, dataset;

  auto* pre = app.add_subcommand("preprocess", "Write Stage-1 patches and a manifest per image");
  pre->add_option("inputs", inputs, "Images or directories")->required();
  pre->add_option("-o,--out", out, "Output directory")->required();
  add_run_flags(*pre, f);
  add_common_flags(*pre, f);

  auto* bin = app.add_subcommand("binarize", "Binarize images into mask files");
  bin->add_option("inputs", inputs, "Images or directories")->required();
  bin->add_option("-o,--out", out, "Output directory")->required();
  add_run_flags(*bin, f);
  add_common_flags(*bin, f);

  auto* ev = app.add_subcommand("evaluate", "Score a mask directory against GT");
  ev->add_option("predictions", pred_dir, "Directory of predicted masks")->required();
  ev->add_option("groundtruth", gt_dir, "Directory of GT masks")->required();
  ev->add_option("--report", f.report, "Write a JSON report here");
  add_common_flags(*ev, f);

  auto* pipe = app.add_subcommand("pipeline", "preprocess, binarize and evaluate a dataset");
  pipe->add_option("dataset", dataset, "Directory of images and their GT")->required();
  pipe->add_option("-o,--out", out, "Output directory")->required();
  pipe->add_option("--report", f.report, "JSON report path (default: OUT/report.json)");
  add_run_flags(*pipe, f);
  add_common_flags(*pipe, f);

  auto* study = app.add_subcommand("study", "Threshold PSNR of wavelet subbands against GT");
  study->add_option("dataset", dataset, "Directory of color images and their GT")->required();
  add_run_flags(*study, f);
  add_common_flags(*study, f);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? cli::kOk : cli::kFatal;
  }

  try {
    const cli::Options opts = make_options(f);
    std::vector<fs::path> in(inputs.begin(), inputs.end());
    if (*pre) return cli::cmd_preprocess(in, out, opts, std::cerr);
    if (*bin) return cli::cmd_binarize(in, out, opts, std::cerr);
    if (*ev) return cli::cmd_evaluate(pred_dir, gt_dir, opts, std::cout);
    if (*pipe) return cli::cmd_pipeline(dataset, out, opts, std::cout);
    if (*study) return cli::cmd_study(dataset, opts, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "docbin: " << e.what() << '\n';
    return cli::kFatal;
  }
  return cli::kFatal;
}
