#include "candist/annotate/parse.hpp"

#include <algorithm>
#include <cctype>
#include <string>

#include "candist/error.hpp"

namespace candist::annotate {

namespace {

bool is_word_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_';
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::vector<std::string> split_segments(std::string_view text) {
  std::vector<std::string> pieces;
  std::string current;
  for (char c : text) {
    if (c == ',' || c == ';' || c == '\n' || c == '\r') {
      pieces.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  pieces.push_back(std::move(current));

  std::vector<std::string> out;
  for (auto& piece : pieces) {
    const auto low = lower(piece);
    std::size_t start = 0;
    std::size_t pos = 0;
    while ((pos = low.find("or", pos)) != std::string::npos) {
      const bool left = pos == 0 || !is_word_char(low[pos - 1]);
      const bool right = pos + 2 >= low.size() || !is_word_char(low[pos + 2]);
      if (left && right) {
        out.push_back(low.substr(start, pos - start));
        start = pos + 2;
      }
      pos += 2;
    }
    out.push_back(low.substr(start));
  }
  return out;
}

struct Term {
  std::string text;
  Label label;
};

std::vector<Term> terms_of(const LabelSpace& labels) {
  std::vector<Term> terms;
  for (Label c = 0; c < labels.size(); ++c) {
    terms.push_back({fold(labels.name(c)), c});
    for (const auto& a : labels.aliases(c)) terms.push_back({fold(a), c});
  }
  std::stable_sort(terms.begin(), terms.end(),
                   [](const Term& a, const Term& b) { return a.text.size() > b.text.size(); });
  return terms;
}

}  // namespace

std::vector<Label> parse_mentions(std::string_view response, const LabelSpace& label_space) {
  const auto terms = terms_of(label_space);
  std::vector<Label> mentions;
  for (const auto& segment : split_segments(response)) {
    std::vector<bool> used(segment.size(), false);
    std::vector<std::pair<std::size_t, Label>> found;
    for (const auto& term : terms) {
      std::size_t pos = 0;
      while ((pos = segment.find(term.text, pos)) != std::string::npos) {
        const auto end = pos + term.text.size();
        const bool bounded = (pos == 0 || !is_word_char(segment[pos - 1])) &&
                             (end >= segment.size() || !is_word_char(segment[end]));
        const bool free = std::none_of(used.begin() + static_cast<long>(pos),
                                       used.begin() + static_cast<long>(end),
                                       [](bool b) { return b; });
        if (bounded && free) {
          std::fill(used.begin() + static_cast<long>(pos), used.begin() + static_cast<long>(end),
                    true);
          found.emplace_back(pos, term.label);
        }
        pos = end;
      }
    }
    std::sort(found.begin(), found.end());
    for (const auto& [pos, label] : found) {
      if (std::find(mentions.begin(), mentions.end(), label) == mentions.end()) {
        mentions.push_back(label);
      }
    }
  }
  return mentions;
}

CandidateSet parse_candidates(std::string_view response, const LabelSpace& label_space) {
  auto mentions = parse_mentions(response, label_space);
  if (mentions.empty()) {
    std::string shown(response.substr(0, 80));
    throw NoLabelFound("no category named in response: \"" + shown + "\"");
  }
  return CandidateSet(std::move(mentions), label_space.size());
}

}  // namespace candist::annotate
