#include "moodtone/scheme.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <unordered_set>

namespace mood {

namespace {

using nlohmann::json;

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw SchemeError(where.empty() ? what : where + ": " + what);
}

void reject_unknown_keys(const json& obj,
                         std::initializer_list<const char*> allowed,
                         const std::string& where) {
  for (const auto& item : obj.items()) {
    if (std::find_if(allowed.begin(), allowed.end(), [&](const char* k) {
          return item.key() == k;
        }) == allowed.end()) {
      fail(where, "unknown key \"" + item.key() + "\"");
    }
  }
}

LabColor parse_color(const json& node, const std::string& where) {
  if (!node.is_object() || node.size() != 1)
    fail(where, "color must be an object with exactly one of lab/srgb/cmyk");
  if (node.contains("lab")) {
    const auto& v = node["lab"];
    if (!v.is_array() || v.size() != 3)
      fail(where, "lab value must be an array of 3 numbers");
    LabColor lab{v[0].get<double>(), v[1].get<double>(), v[2].get<double>()};
    if (!lab.allFinite() || (lab.array() < kLabMin.array()).any() ||
        (lab.array() > kLabMax.array()).any())
      fail(where, "lab value outside the Lab box");
    return lab;
  }
  if (node.contains("srgb")) {
    const auto& v = node["srgb"];
    if (!v.is_string()) fail(where, "srgb value must be a string");
    const std::string hex = v.get<std::string>();
    if (hex.size() != 7 || hex[0] != '#' ||
        !std::all_of(hex.begin() + 1, hex.end(), [](unsigned char c) {
          return std::isxdigit(c);
        }))
      fail(where, "srgb value must look like \"#RRGGBB\"");
    const auto byte = [&](int pos) {
      return static_cast<std::uint8_t>(
          std::stoi(hex.substr(pos, 2), nullptr, 16));
    };
    return srgb_to_lab(Rgb8{byte(1), byte(3), byte(5)});
  }
  if (node.contains("cmyk")) {
    const auto& v = node["cmyk"];
    if (!v.is_array() || v.size() != 4)
      fail(where, "cmyk value must be an array of 4 fractions");
    Eigen::Vector4d cmyk{v[0].get<double>(), v[1].get<double>(),
                         v[2].get<double>(), v[3].get<double>()};
    if ((cmyk.array() < 0.0).any() || (cmyk.array() > 1.0).any())
      fail(where, "cmyk components must be in [0,1]");
    return cmyk_to_lab(cmyk);
  }
  fail(where, "color encoding must be one of lab/srgb/cmyk");
}

}  // namespace

int SchemeLibrary::find(std::string_view name) const {
  const std::string key = lower(name);
  for (std::size_t i = 0; i < schemes.size(); ++i)
    if (lower(schemes[i].name) == key) return static_cast<int>(i);
  return -1;
}

std::size_t SchemeLibrary::combination_count() const {
  std::size_t n = 0;
  for (const auto& s : schemes) n += s.combinations.size();
  return n;
}

SchemeLibrary load_library(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemeError(std::string("parse error: ") + e.what());
  }

  if (!doc.is_object()) fail("", "top level must be an object");
  reject_unknown_keys(doc, {"source", "schemes"}, "top level");
  if (!doc.contains("schemes") || !doc["schemes"].is_array())
    fail("", "missing \"schemes\" array");

  SchemeLibrary lib;
  if (doc.contains("source")) {
    if (!doc["source"].is_string()) fail("", "\"source\" must be a string");
    lib.source = doc["source"].get<std::string>();
  }

  std::unordered_set<std::string> seen;
  for (const auto& snode : doc["schemes"]) {
    const std::string where =
        "scheme #" + std::to_string(lib.schemes.size() + 1);
    if (!snode.is_object()) fail(where, "must be an object");
    reject_unknown_keys(snode, {"name", "description", "combinations"}, where);
    if (!snode.contains("name") || !snode["name"].is_string())
      fail(where, "missing string \"name\"");

    EmotionScheme scheme;
    scheme.name = snode["name"].get<std::string>();
    if (scheme.name.empty()) fail(where, "name must be nonempty");
    if (!seen.insert(lower(scheme.name)).second)
      fail("", "duplicate scheme name \"" + scheme.name + "\"");
    if (snode.contains("description")) {
      if (!snode["description"].is_string())
        fail(scheme.name, "\"description\" must be a string");
      scheme.description = snode["description"].get<std::string>();
    }
    if (!snode.contains("combinations") || !snode["combinations"].is_array() ||
        snode["combinations"].empty())
      fail(scheme.name, "needs a nonempty \"combinations\" array");

    for (const auto& cnode : snode["combinations"]) {
      std::ostringstream cw;
      cw << "scheme \"" << scheme.name << "\" combination #"
         << scheme.combinations.size() + 1;
      if (!cnode.is_object()) fail(cw.str(), "must be an object");
      reject_unknown_keys(cnode, {"dominant", "subordinate", "accent"},
                          cw.str());
      ColorCombination combo;
      for (const char* key : {"dominant", "subordinate", "accent"}) {
        if (!cnode.contains(key))
          fail(cw.str(), std::string("missing \"") + key + "\"");
      }
      combo.dominant = parse_color(cnode["dominant"], cw.str() + " dominant");
      combo.subordinate =
          parse_color(cnode["subordinate"], cw.str() + " subordinate");
      combo.accent = parse_color(cnode["accent"], cw.str() + " accent");
      scheme.combinations.push_back(combo);
    }
    lib.schemes.push_back(std::move(scheme));
  }
  if (lib.schemes.empty()) fail("", "library needs at least one scheme");
  return lib;
}

SchemeLibrary load_library_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw SchemeError("cannot open scheme library: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_library(buf.str());
}

ClassifyResult classify_reference(const MainColors& main,
                                  const SchemeLibrary& lib) {
  ClassifyResult result;
  result.scores.resize(static_cast<Eigen::Index>(lib.schemes.size()));
  for (std::size_t i = 0; i < lib.schemes.size(); ++i) {
    double score = 0.0;
    for (const auto& combo : lib.schemes[i].combinations)
      for (int k = 0; k < 3; ++k)
        score += main.weights(k) *
                 (main.colors[k] - combo.color(k)).squaredNorm();
    result.scores(static_cast<Eigen::Index>(i)) = score;
  }
  result.scores.minCoeff(&result.scheme_index);
  return result;
}

}  // namespace mood
