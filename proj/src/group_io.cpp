#include "carnot/group_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace carnot {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) fail(ErrorCode::InvalidSpec, where + ": unknown field \"" + key + "\"");
}

const json& field(const json& obj, const std::string& key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) fail(ErrorCode::InvalidSpec, where + ": missing field \"" + key + "\"");
  return *it;
}

int as_int(const json& v, const std::string& what) {
  if (!v.is_number_integer()) fail(ErrorCode::InvalidSpec, what + " must be an integer");
  return v.get<int>();
}

double as_number(const json& v, const std::string& what) {
  if (!v.is_number()) fail(ErrorCode::InvalidSpec, what + " must be a number");
  return v.get<double>();
}

GroupSpec parse_graded(const json& doc) {
  reject_unknown(doc, {"type", "name", "layers", "brackets"}, "graded spec");
  const auto name = field(doc, "name", "graded spec").get<std::string>();
  const auto& layers_json = field(doc, "layers", "graded spec");
  if (!layers_json.is_array()) fail(ErrorCode::InvalidSpec, "layers must be an array");
  std::vector<int> layers;
  for (const auto& l : layers_json) layers.push_back(as_int(l, "layer dimension"));
  std::vector<BracketEntry> brackets;
  if (const auto it = doc.find("brackets"); it != doc.end()) {
    if (!it->is_array()) fail(ErrorCode::InvalidSpec, "brackets must be an array");
    for (const auto& b : *it) {
      if (!b.is_object()) fail(ErrorCode::InvalidSpec, "bracket entries must be objects");
      reject_unknown(b, {"i", "j", "k", "c"}, "bracket entry");
      brackets.push_back({as_int(field(b, "i", "bracket"), "i"), as_int(field(b, "j", "bracket"), "j"),
                          as_int(field(b, "k", "bracket"), "k"),
                          as_number(field(b, "c", "bracket"), "c")});
    }
  }
  return GroupSpec::graded(name, std::move(layers), brackets);
}

GroupSpec parse_htype(const json& doc) {
  reject_unknown(doc, {"type", "name", "n", "m", "J"}, "h-type spec");
  const auto name = field(doc, "name", "h-type spec").get<std::string>();
  HTypeSpec h;
  h.n = as_int(field(doc, "n", "h-type spec"), "n");
  h.m = as_int(field(doc, "m", "h-type spec"), "m");
  if (h.n < 1 || h.m < 1) fail(ErrorCode::InvalidSpec, "h-type: n and m must be positive");
  const auto& js = field(doc, "J", "h-type spec");
  if (!js.is_array()) fail(ErrorCode::InvalidSpec, "J must be an array of matrices");
  const int size = 2 * h.n;
  for (const auto& matrix : js) {
    if (!matrix.is_array() || static_cast<int>(matrix.size()) != size)
      fail(ErrorCode::InvalidSpec, "each J matrix must have 2n rows");
    std::vector<double> flat;
    for (const auto& row : matrix) {
      if (!row.is_array() || static_cast<int>(row.size()) != size)
        fail(ErrorCode::InvalidSpec, "each J row must have 2n entries");
      for (const auto& v : row) flat.push_back(as_number(v, "J entry"));
    }
    h.J.push_back(std::move(flat));
  }
  return GroupSpec::from_htype(name, h);
}

}  // namespace

GroupSpec parse_group_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail(ErrorCode::InvalidSpec, std::string("group spec is not valid JSON: ") + e.what());
  }
  if (!doc.is_object()) fail(ErrorCode::InvalidSpec, "group spec must be a JSON object");
  const auto& type = field(doc, "type", "group spec");
  if (!type.is_string()) fail(ErrorCode::InvalidSpec, "type must be a string");
  try {
    if (type == "graded") return parse_graded(doc);
    if (type == "h-type") return parse_htype(doc);
  } catch (const json::exception& e) {
    fail(ErrorCode::InvalidSpec, std::string("group spec has a malformed field: ") + e.what());
  }
  fail(ErrorCode::InvalidSpec, "unknown group type \"" + type.get<std::string>() + "\"");
}

GroupSpec load_group_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open group spec file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_group_json(ss.str());
}

GroupSpec resolve_group(const std::string& name_or_path) {
  if (auto preset = presets::by_name(name_or_path)) return *preset;
  std::ifstream probe(name_or_path);
  if (!probe)
    fail(ErrorCode::InvalidArgument, "\"" + name_or_path + "\" is neither a preset nor a readable spec file");
  return load_group_file(name_or_path);
}

}  // namespace carnot
