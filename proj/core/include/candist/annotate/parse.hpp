#pragma once

#include <string_view>
#include <vector>

#include "candist/core/label_space.hpp"
#include "candist/core/types.hpp"

namespace candist::annotate {

/// Labels mentioned in `response`, in order of first mention, without
/// duplicates. The response is split on commas, semicolons, newlines and
/// the word "or"; each piece is searched case-insensitively for whole-word
/// occurrences of category names and aliases (longest terms first).
std::vector<Label> parse_mentions(std::string_view response, const LabelSpace& label_space);

/// The mentioned labels as a set. Throws NoLabelFound when nothing matches.
CandidateSet parse_candidates(std::string_view response, const LabelSpace& label_space);

}  // namespace candist::annotate
