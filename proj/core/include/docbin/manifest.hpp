#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "docbin/patching.hpp"

namespace docbin {

enum class ChannelTag { gray, red, green, blue, rgb };

std::string_view to_string(ChannelTag tag);
/// Throws InvalidArgument for unknown names.
ChannelTag parse_channel_tag(std::string_view name);

struct PatchRecord {
  int row = 0;
  int col = 0;
  ChannelTag channel = ChannelTag::gray;
  /// Image path relative to the manifest's directory.
  std::string path;
  /// Optional per-channel ground truth, also relative.
  std::optional<std::string> gt_path;

  friend bool operator==(const PatchRecord&, const PatchRecord&) = default;
};

/// Contract for exchanging patch sets with external enhancers: grid geometry
/// plus one record per (row, col, channel).
struct PatchManifest {
  static constexpr std::string_view kFormat = "docbin-patch-manifest/1";

  std::string source_id;
  GridGeometry geometry;
  std::vector<PatchRecord> records;

  /// Geometry is consistent and, for every channel present, each (row, col)
  /// appears exactly once. Throws StructuralError otherwise.
  void validate() const;

  /// Records for one channel in row-major order; throws if incomplete.
  std::vector<PatchRecord> channel_records(ChannelTag channel) const;

  friend bool operator==(const PatchManifest&, const PatchManifest&) = default;
};

std::string manifest_to_json(const PatchManifest& m);
PatchManifest manifest_from_json(std::string_view text);

void write_manifest(const std::filesystem::path& path, const PatchManifest& m);
PatchManifest read_manifest(const std::filesystem::path& path);

}  // namespace docbin
