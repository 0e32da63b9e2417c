#include "candist/core/label_space.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <set>

#include "candist/error.hpp"

namespace candist {

std::string fold(std::string_view text) {
  auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  auto last = text.find_last_not_of(" \t\r\n");
  std::string out(text.substr(first, last - first + 1));
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

LabelSpace::LabelSpace(std::vector<std::string> names, std::vector<std::string> descriptions,
                       std::vector<std::vector<std::string>> aliases)
    : names_(std::move(names)),
      descriptions_(std::move(descriptions)),
      aliases_(std::move(aliases)) {
  if (names_.size() < 2) throw InputError("label space needs at least 2 classes");
  if (descriptions_.empty()) descriptions_.resize(names_.size());
  if (aliases_.empty()) aliases_.resize(names_.size());
  if (descriptions_.size() != names_.size() || aliases_.size() != names_.size()) {
    throw InputError("label space descriptions/aliases must match the number of names");
  }
  std::set<std::string> seen;
  for (const auto& n : names_) {
    auto key = fold(n);
    if (key.empty()) throw InputError("label name is blank");
    if (!seen.insert(key).second) throw InputError("duplicate label name: " + n);
  }
  for (std::size_t c = 0; c < aliases_.size(); ++c) {
    for (const auto& a : aliases_[c]) {
      auto key = fold(a);
      if (key.empty()) throw InputError("label alias is blank");
      if (!seen.insert(key).second) throw InputError("alias collides with another label: " + a);
    }
  }
}

LabelSpace LabelSpace::numbered(std::size_t num_classes) {
  std::vector<std::string> names;
  for (std::size_t c = 0; c < num_classes; ++c) names.push_back("class_" + std::to_string(c));
  return LabelSpace(std::move(names));
}

LabelSpace LabelSpace::trec() {
  return LabelSpace(
      {"Abbreviation", "Description and abstract concepts", "Entities", "Human beings",
       "Locations", "Numeric values"},
      {"Abbreviation and expression abbreviated",
       "Definition of something, description of something, manner of an action and reason",
       "Animals, organs of body, colors, creative pieces, currencies, diseases, events, food, "
       "instruments, languages, letters, plants, products, religions, sports, substances, "
       "symbols, techniques, terms, vehicles and other entities",
       "Groups or organizations of persons, individuals, titles and descriptions of persons",
       "Cities, countries, mountains, states and other locations",
       "Codes, counts, dates, distances, prices, ranks, periods, percentages, speeds, "
       "temperatures, sizes, weights and other numbers"},
      {{"ABBR", "Abbreviations"},
       {"DESC", "Description", "Descriptions", "Description and abstract concept"},
       {"ENTY", "Entity"},
       {"HUM", "Human being", "Human"},
       {"LOC", "Location"},
       {"NUM", "Numeric value", "Numeric"}});
}

nlohmann::ordered_json LabelSpace::to_json() const {
  nlohmann::ordered_json j;
  j["names"] = names_;
  j["descriptions"] = descriptions_;
  j["aliases"] = aliases_;
  return j;
}

LabelSpace LabelSpace::from_json(const nlohmann::json& j) {
  try {
    auto names = j.at("names").get<std::vector<std::string>>();
    std::vector<std::string> descriptions;
    std::vector<std::vector<std::string>> aliases;
    if (j.contains("descriptions")) descriptions = j["descriptions"].get<std::vector<std::string>>();
    if (j.contains("aliases")) aliases = j["aliases"].get<std::vector<std::vector<std::string>>>();
    return LabelSpace(std::move(names), std::move(descriptions), std::move(aliases));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed label space: ") + e.what());
  }
}

LabelSpace LabelSpace::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open label space file " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InputError("malformed label space file " + path.string() + ": " + e.what());
  }
  return from_json(j);
}

LabelSpace LabelSpace::resolve(const std::string& spec) {
  if (spec == "trec") return trec();
  if (spec.rfind("numbered:", 0) == 0) {
    try {
      return numbered(std::stoul(spec.substr(9)));
    } catch (const std::logic_error&) {
      throw InputError("bad label space spec: " + spec);
    }
  }
  return load(spec);
}

std::optional<Label> LabelSpace::find(std::string_view term) const {
  const auto key = fold(term);
  for (Label c = 0; c < names_.size(); ++c) {
    if (fold(names_[c]) == key) return c;
    for (const auto& a : aliases_[c]) {
      if (fold(a) == key) return c;
    }
  }
  return std::nullopt;
}

}  // namespace candist
