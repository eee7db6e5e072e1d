#include "docbin/pipeline.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "docbin/image_io.hpp"

namespace docbin {
namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

constexpr std::array<ChannelTag, 3> kColorTags = {ChannelTag::red, ChannelTag::green,
                                                  ChannelTag::blue};

void require_same_shape(const FloatPlane& a, const FloatPlane& b, const char* what) {
  if (!a.same_shape(b)) throw StructuralError(std::string(what) + ": plane dimensions differ");
}

std::string patch_coord(int row, int col) {
  return "(" + std::to_string(row) + "," + std::to_string(col) + ")";
}

// Splits a grid of RGB patches into gray (rounded luma), red, green and blue
// single-channel grids.
std::array<PatchGrid, 4> split_channel_grids(const PatchGrid& grid) {
  std::array<PatchGrid, 4> out;
  for (PatchGrid& g : out) g.geometry = grid.geometry;
  for (const Raster& patch : grid.patches) {
    const ChannelBundle b = split_channels(patch);
    out[0].patches.push_back(to_raster(b.gray));
    out[1].patches.push_back(to_raster(b.red));
    out[2].patches.push_back(to_raster(b.green));
    out[3].patches.push_back(to_raster(b.blue));
  }
  return out;
}

Raster match_channels(const Raster& img, int channels) {
  if (img.channels() == channels) return img;
  if (channels == 1) return to_raster(luma_plane(img));
  const FloatPlane p = channel_plane(img, 0);
  return merge_channels(p, p, p);
}

PatchGrid enhance_external(const PatchGrid& grid, const ExternalEnhancer& ext,
                           ChannelTag channel) {
  const PatchManifest manifest = read_manifest(ext.manifest);
  if (!(manifest.geometry == grid.geometry)) {
    throw StructuralError("external manifest " + ext.manifest.string() +
                          " does not match the target grid geometry");
  }
  const auto records = manifest.channel_records(channel);
  const std::filesystem::path base = ext.manifest.parent_path();
  const int n = grid.geometry.patch_size;
  const int channels = grid.patches.empty() ? 1 : grid.patches.front().channels();

  PatchGrid out;
  out.geometry = grid.geometry;
  out.patches.reserve(records.size());
  for (const PatchRecord& r : records) {
    Raster img;
    try {
      img = read_raster(base / r.path);
    } catch (const IoError& e) {
      throw IoError("external patch " + patch_coord(r.row, r.col) + " [" +
                    std::string(to_string(channel)) + "]: " + e.what());
    }
    if (img.width() != n || img.height() != n) {
      throw StructuralError("external patch " + patch_coord(r.row, r.col) + " is " +
                            std::to_string(img.width()) + "x" +
                            std::to_string(img.height()) + ", expected " +
                            std::to_string(n) + "x" + std::to_string(n));
    }
    out.patches.push_back(match_channels(img, channels));
  }
  return out;
}

FloatPlane gray_of(const Raster& img) { return luma_plane(img); }

}  // namespace

EnhancerKind parse_enhancer(std::string_view text) {
  if (text == "identity") return IdentityEnhancer{};
  if (text == "baseline" || text == "dwt-norm") return DwtNormBaseline{};
  constexpr std::string_view kExternal = "external:";
  if (text.substr(0, kExternal.size()) == kExternal && text.size() > kExternal.size()) {
    return ExternalEnhancer{std::filesystem::path(std::string(text.substr(kExternal.size())))};
  }
  throw InvalidArgument("unknown enhancer '" + std::string(text) +
                        "' (expected identity, baseline or external:<manifest>)");
}

std::string describe(const EnhancerKind& kind) {
  return std::visit(overloaded{
                        [](const IdentityEnhancer&) { return std::string("identity"); },
                        [](const DwtNormBaseline&) { return std::string("baseline"); },
                        [](const ExternalEnhancer& e) {
                          return "external:" + e.manifest.string();
                        },
                    },
                    kind);
}

void FusionWeights::validate() const {
  if (!(omega >= 0.0 && omega <= 1.0)) throw InvalidArgument("omega must lie in [0,1]");
  if (!(local_global_weight >= 0.0 && local_global_weight <= 1.0)) {
    throw InvalidArgument("local/global weight must lie in [0,1]");
  }
}

void RunConfig::validate() const {
  if (patch_size < 2) throw InvalidArgument("patch size must be at least 2");
  if (global_size < 2) throw InvalidArgument("global size must be at least 2");
  if (!(threshold > 0.0 && threshold < 1.0)) {
    throw InvalidArgument("threshold must lie in (0,1)");
  }
  fusion.validate();
  if (norm.alpha && !(*norm.alpha > 0.0)) throw InvalidArgument("alpha must be positive");
}

DebugSink::DebugSink(std::filesystem::path root, std::string stem)
    : dir_(std::move(root) / std::move(stem)) {}

void DebugSink::write(std::string_view stage, std::string_view name, const Raster& img) const {
  write_raster(dir_ / std::string(stage) / (std::string(name) + ".png"), img);
}

void DebugSink::write(std::string_view stage, std::string_view name,
                      const FloatPlane& plane) const {
  write(stage, name, to_raster(plane));
}

std::string DebugSink::patch_name(int row, int col, ChannelTag channel) {
  return "r" + std::to_string(row) + "_c" + std::to_string(col) + "_" +
         std::string(to_string(channel));
}

BinaryMask make_channel_groundtruth(const FloatPlane& x_prime, const BinaryMask& y,
                                    Threshold t) {
  if (x_prime.width() != y.width() || x_prime.height() != y.height()) {
    throw StructuralError("make_channel_groundtruth: plane and mask dimensions differ");
  }
  BinaryMask out(y.width(), y.height());
  for (int r = 0; r < y.height(); ++r) {
    for (int c = 0; c < y.width(); ++c) {
      out.set(c, r, y.foreground(c, r) && x_prime.at(c, r) < t.cut());
    }
  }
  return out;
}

FloatPlane fuse_channels(const FloatPlane& color_out, const FloatPlane& gray_out,
                         const FusionWeights& w) {
  w.validate();
  require_same_shape(color_out, gray_out, "fuse_channels");
  FloatPlane out(color_out.width(), color_out.height());
  auto c = color_out.data();
  auto g = gray_out.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < dst.size(); ++i) {
    dst[i] = std::clamp(w.omega * c[i] + (1.0 - w.omega) * g[i], 0.0, 255.0);
  }
  return out;
}

Raster assemble_color_prediction(const FloatPlane& red, const FloatPlane& green,
                                 const FloatPlane& blue) {
  return merge_channels(red, green, blue);
}

BinaryMask fuse_local_global(const FloatPlane& local, const FloatPlane& global_small,
                             int out_w, int out_h, const FusionWeights& w, Threshold t) {
  w.validate();
  if (local.width() != out_w || local.height() != out_h) {
    throw StructuralError("fuse_local_global: local plane does not match the output size");
  }
  const FloatPlane global = resize_bicubic(global_small, out_w, out_h);
  BinaryMask out(out_w, out_h);
  const double wl = w.local_global_weight;
  for (int y = 0; y < out_h; ++y) {
    for (int x = 0; x < out_w; ++x) {
      const double blended = wl * local.at(x, y) + (1.0 - wl) * global.at(x, y);
      out.set(x, y, blended < t.cut());
    }
  }
  return out;
}

Stage1Output run_stage1(const Raster& img, const RunConfig& cfg, const DebugSink* debug) {
  cfg.validate();
  const PatchGrid grid = split_patches(img, cfg.patch_size);
  Stage1Output out;
  out.geometry = grid.geometry;
  out.color = img.channels() == 3;
  out.patches.reserve(grid.patches.size());

  for (int row = 0; row < grid.geometry.rows; ++row) {
    for (int col = 0; col < grid.geometry.cols; ++col) {
      const Raster& patch = grid.at(row, col);
      ChannelBundle bundle;
      if (!out.color) {
        bundle.gray = channel_plane(patch, 0);
      } else {
        ChannelBundle raw = split_channels(patch);
        bundle.gray = std::move(raw.gray);
        const FloatPlane* sources[3] = {&raw.red, &raw.green, &raw.blue};
        FloatPlane* targets[3] = {&bundle.red, &bundle.green, &bundle.blue};
        for (int k = 0; k < 3; ++k) {
          *targets[k] = stage1_channel_transform(*sources[k], cfg.norm);
          if (debug) {
            const auto bands = subband_debug_images(dwt2_haar(*sources[k]));
            static constexpr const char* kBandNames[4] = {"ll", "hl", "lh", "hh"};
            for (int b = 0; b < 4; ++b) {
              debug->write("subbands",
                           DebugSink::patch_name(row, col, kColorTags[k]) + "_" + kBandNames[b],
                           bands[b]);
            }
          }
        }
      }
      if (debug) {
        debug->write("stage1", DebugSink::patch_name(row, col, ChannelTag::gray), bundle.gray);
        if (out.color) {
          debug->write("stage1", DebugSink::patch_name(row, col, ChannelTag::red), bundle.red);
          debug->write("stage1", DebugSink::patch_name(row, col, ChannelTag::green),
                       bundle.green);
          debug->write("stage1", DebugSink::patch_name(row, col, ChannelTag::blue), bundle.blue);
        }
      }
      out.patches.push_back(std::move(bundle));
    }
  }
  return out;
}

PatchGrid apply_enhancer(const PatchGrid& grid, const EnhancerKind& kind, ChannelTag channel) {
  return std::visit(
      overloaded{
          [&](const IdentityEnhancer&) { return grid; },
          [&](const DwtNormBaseline& b) {
            PatchGrid out;
            out.geometry = grid.geometry;
            out.patches.reserve(grid.patches.size());
            for (const Raster& patch : grid.patches) {
              const FloatPlane s = stage1_channel_transform(gray_of(patch), b.norm);
              out.patches.push_back(binarize_otsu(s).to_raster());
            }
            return out;
          },
          [&](const ExternalEnhancer& e) { return enhance_external(grid, e, channel); },
      },
      kind);
}

BinaryMask binarize_document(const Raster& img, const RunConfig& cfg, const DebugSink* debug) {
  cfg.validate();
  if (img.empty()) throw InvalidArgument("binarize_document: empty image");
  if (debug) run_stage1(img, cfg, debug);

  const PatchGrid grid = split_patches(img, cfg.patch_size);
  const GridGeometry& geo = grid.geometry;

  auto dump_grid = [&](std::string_view stage, const PatchGrid& g, ChannelTag tag) {
    if (!debug) return;
    for (int row = 0; row < geo.rows; ++row) {
      for (int col = 0; col < geo.cols; ++col) {
        debug->write(stage, DebugSink::patch_name(row, col, tag), g.at(row, col));
      }
    }
  };

  // Stage 2: per-channel enhancement and fusion.
  Raster fused;
  if (img.channels() == 3) {
    const auto channels = split_channel_grids(grid);
    const PatchGrid gray_out = apply_enhancer(channels[0], cfg.gray_enhancer, ChannelTag::gray);
    dump_grid("enhanced", gray_out, ChannelTag::gray);
    std::array<PatchGrid, 3> color_out;
    for (int k = 0; k < 3; ++k) {
      color_out[k] = apply_enhancer(channels[k + 1], cfg.color_enhancer, kColorTags[k]);
      dump_grid("enhanced", color_out[k], kColorTags[k]);
    }
    PatchGrid fused_grid;
    fused_grid.geometry = geo;
    for (std::size_t i = 0; i < grid.patches.size(); ++i) {
      const FloatPlane g = channel_plane(gray_out.patches[i], 0);
      FloatPlane fused_k[3];
      for (int k = 0; k < 3; ++k) {
        fused_k[k] = fuse_channels(channel_plane(color_out[k].patches[i], 0), g, cfg.fusion);
      }
      fused_grid.patches.push_back(assemble_color_prediction(fused_k[0], fused_k[1], fused_k[2]));
    }
    fused = reassemble(fused_grid);
  } else {
    const PatchGrid gray_out = apply_enhancer(grid, cfg.gray_enhancer, ChannelTag::gray);
    dump_grid("enhanced", gray_out, ChannelTag::gray);
    fused = reassemble(gray_out);
  }
  if (debug) debug->write("fused", "prediction", fused);

  // Stage 3: local prediction on the fused image, global prediction on the
  // resized original.
  const PatchGrid local_in = split_patches(fused, cfg.patch_size);
  const PatchGrid local_out = apply_enhancer(
      local_in, cfg.local_enhancer, fused.channels() == 3 ? ChannelTag::rgb : ChannelTag::gray);
  const FloatPlane local = gray_of(reassemble(local_out));

  const Raster global_in =
      to_raster(resize_bicubic(luma_plane(img), cfg.global_size, cfg.global_size));
  const PatchGrid global_out = apply_enhancer(split_patches(global_in, cfg.global_size),
                                              cfg.global_enhancer, ChannelTag::gray);
  const FloatPlane global_small = gray_of(reassemble(global_out));

  if (debug) {
    debug->write("stage3", "local", local);
    debug->write("stage3", "global", global_small);
  }
  return fuse_local_global(local, global_small, img.width(), img.height(), cfg.fusion, cfg.cut());
}

}  // namespace docbin
