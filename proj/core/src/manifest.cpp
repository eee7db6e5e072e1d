#include "docbin/manifest.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

#include <json.hpp>

namespace docbin {
namespace {

using nlohmann::json;

constexpr std::pair<ChannelTag, std::string_view> kTagNames[] = {
    {ChannelTag::gray, "gray"},
    {ChannelTag::red, "red"},
    {ChannelTag::green, "green"},
    {ChannelTag::blue, "blue"},
    {ChannelTag::rgb, "rgb"},
};

std::string where(const PatchRecord& r) {
  return std::string(to_string(r.channel)) + " patch (" + std::to_string(r.row) + "," +
         std::to_string(r.col) + ")";
}

}  // namespace

std::string_view to_string(ChannelTag tag) {
  for (const auto& [t, name] : kTagNames) {
    if (t == tag) return name;
  }
  return "unknown";
}

ChannelTag parse_channel_tag(std::string_view name) {
  for (const auto& [t, n] : kTagNames) {
    if (n == name) return t;
  }
  throw InvalidArgument("unknown channel tag '" + std::string(name) + "'");
}

void PatchManifest::validate() const {
  geometry.validate();
  std::set<std::tuple<int, int, ChannelTag>> seen;
  std::map<ChannelTag, int> per_channel;
  for (const PatchRecord& r : records) {
    if (r.row < 0 || r.row >= geometry.rows || r.col < 0 || r.col >= geometry.cols) {
      throw StructuralError("manifest: " + where(r) + " lies outside the grid");
    }
    if (r.path.empty()) throw StructuralError("manifest: " + where(r) + " has no path");
    if (!seen.emplace(r.row, r.col, r.channel).second) {
      throw StructuralError("manifest: duplicate record for " + where(r));
    }
    ++per_channel[r.channel];
  }
  for (const auto& [tag, count] : per_channel) {
    if (count != geometry.patch_count()) {
      throw StructuralError("manifest: channel '" + std::string(to_string(tag)) +
                            "' covers " + std::to_string(count) + " of " +
                            std::to_string(geometry.patch_count()) + " patches");
    }
  }
}

std::vector<PatchRecord> PatchManifest::channel_records(ChannelTag channel) const {
  validate();
  std::vector<PatchRecord> out;
  for (const PatchRecord& r : records) {
    if (r.channel == channel) out.push_back(r);
  }
  if (out.empty()) {
    throw StructuralError("manifest has no records for channel '" +
                          std::string(to_string(channel)) + "'");
  }
  std::sort(out.begin(), out.end(), [](const PatchRecord& a, const PatchRecord& b) {
    return std::tie(a.row, a.col) < std::tie(b.row, b.col);
  });
  return out;
}

std::string manifest_to_json(const PatchManifest& m) {
  json j;
  j["format"] = PatchManifest::kFormat;
  j["source_id"] = m.source_id;
  const GridGeometry& g = m.geometry;
  j["geometry"] = {{"patch_size", g.patch_size},         {"rows", g.rows},
                   {"cols", g.cols},                     {"pad_right", g.pad_right},
                   {"pad_bottom", g.pad_bottom},         {"original_width", g.original_width},
                   {"original_height", g.original_height}};
  j["records"] = json::array();
  for (const PatchRecord& r : m.records) {
    json rec = {{"row", r.row},
                {"col", r.col},
                {"channel", std::string(to_string(r.channel))},
                {"path", r.path}};
    if (r.gt_path) rec["gt_path"] = *r.gt_path;
    j["records"].push_back(std::move(rec));
  }
  return j.dump(2);
}

PatchManifest manifest_from_json(std::string_view text) {
  PatchManifest m;
  try {
    const json j = json::parse(text);
    if (j.at("format").get<std::string>() != PatchManifest::kFormat) {
      throw StructuralError("unsupported manifest format '" +
                            j.at("format").get<std::string>() + "'");
    }
    m.source_id = j.at("source_id").get<std::string>();
    const json& g = j.at("geometry");
    m.geometry.patch_size = g.at("patch_size").get<int>();
    m.geometry.rows = g.at("rows").get<int>();
    m.geometry.cols = g.at("cols").get<int>();
    m.geometry.pad_right = g.at("pad_right").get<int>();
    m.geometry.pad_bottom = g.at("pad_bottom").get<int>();
    m.geometry.original_width = g.at("original_width").get<int>();
    m.geometry.original_height = g.at("original_height").get<int>();
    for (const json& rec : j.at("records")) {
      PatchRecord r;
      r.row = rec.at("row").get<int>();
      r.col = rec.at("col").get<int>();
      r.channel = parse_channel_tag(rec.at("channel").get<std::string>());
      r.path = rec.at("path").get<std::string>();
      if (rec.contains("gt_path")) r.gt_path = rec.at("gt_path").get<std::string>();
      m.records.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw StructuralError(std::string("malformed manifest: ") + e.what());
  }
  m.validate();
  return m;
}

void write_manifest(const std::filesystem::path& path, const PatchManifest& m) {
  m.validate();
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  // Write-then-rename so readers never observe a partial manifest.
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw IoError("cannot write manifest: " + path.string());
    out << manifest_to_json(m) << '\n';
  }
  std::filesystem::rename(tmp, path);
}

PatchManifest read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read manifest: " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return manifest_from_json(ss.str());
}

}  // namespace docbin
