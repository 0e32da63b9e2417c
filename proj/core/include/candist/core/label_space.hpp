#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "candist/core/types.hpp"

namespace candist {

/// Ordered category names, with optional prompt descriptions and parser
/// aliases. Names are unique after trimming and case-folding; C >= 2.
class LabelSpace {
 public:
  LabelSpace(std::vector<std::string> names,
             std::vector<std::string> descriptions = {},
             std::vector<std::vector<std::string>> aliases = {});

  /// "class_0" ... "class_{C-1}".
  static LabelSpace numbered(std::size_t num_classes);

  /// Six-way TREC question-type space. Names follow the prompt wording
  /// ("Abbreviation", ...); the short codes ("ABBR", ...) are aliases.
  static LabelSpace trec();

  /// Reads {"names": [...], "descriptions": [...]?, "aliases": [[...]]?}.
  static LabelSpace load(const std::filesystem::path& path);
  /// `spec` is "trec", "numbered:<C>" or a JSON file path.
  static LabelSpace resolve(const std::string& spec);

  std::size_t size() const noexcept { return names_.size(); }
  const std::string& name(Label label) const { return names_.at(label); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  /// Empty string when no description was configured.
  const std::string& description(Label label) const { return descriptions_.at(label); }
  const std::vector<std::string>& aliases(Label label) const { return aliases_.at(label); }

  /// Exact match against names and aliases after trimming and case-folding.
  std::optional<Label> find(std::string_view term) const;

  nlohmann::ordered_json to_json() const;
  static LabelSpace from_json(const nlohmann::json& j);

  friend bool operator==(const LabelSpace&, const LabelSpace&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<std::string> descriptions_;
  std::vector<std::vector<std::string>> aliases_;
};

/// Lower-cased copy with surrounding whitespace removed.
std::string fold(std::string_view text);

}  // namespace candist
