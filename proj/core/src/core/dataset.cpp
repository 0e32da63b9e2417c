#include "candist/core/dataset.hpp"

#include <algorithm>
#include <sstream>

#include "candist/core/io.hpp"
#include "candist/error.hpp"

namespace candist {

Dataset::Dataset(LabelSpace label_space, std::vector<Sample> samples,
                 std::vector<std::optional<CandidateSet>> candidates)
    : label_space_(std::move(label_space)),
      samples_(std::move(samples)),
      candidates_(std::move(candidates)) {
  if (candidates_.empty()) candidates_.resize(samples_.size());
  if (candidates_.size() != samples_.size()) {
    throw InputError("candidate column is not aligned with samples");
  }
  const std::size_t num_classes = label_space_.size();
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    const auto& s = samples_[i];
    if (s.id.empty()) throw InputError("sample " + std::to_string(i) + " has an empty id");
    if (!index_.emplace(s.id, i).second) throw InputError("duplicate id \"" + s.id + "\"");
    if (i == 0) dim_ = s.features.size();
    if (s.features.size() != dim_) {
      throw InputError("dimension mismatch for \"" + s.id + "\": expected " +
                       std::to_string(dim_) + ", got " + std::to_string(s.features.size()));
    }
    for (const auto& aug : s.aug_features) {
      if (aug.size() != dim_) {
        throw InputError("dimension mismatch in aug_features of \"" + s.id + "\"");
      }
    }
    if (s.gold && *s.gold >= num_classes) {
      throw InputError("label out of range: gold " + std::to_string(*s.gold) + " of \"" + s.id +
                       "\"");
    }
    if (candidates_[i] && candidates_[i]->labels().back() >= num_classes) {
      throw InputError("label out of range in candidates of \"" + s.id + "\"");
    }
  }
}

std::optional<std::size_t> Dataset::index_of(const std::string& id) const {
  auto it = index_.find(id);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool Dataset::has_gold() const noexcept {
  if (samples_.empty()) return false;
  for (const auto& s : samples_) {
    if (!s.gold) return false;
  }
  return true;
}

Dataset Dataset::with_candidates(
    const std::unordered_map<std::string, CandidateSet>& by_id) const {
  std::vector<std::optional<CandidateSet>> cands(samples_.size());
  for (const auto& [id, set] : by_id) {
    auto idx = index_of(id);
    if (!idx) throw InputError("candidate set for unknown sample id \"" + id + "\"");
    cands[*idx] = set;
  }
  return Dataset(label_space_, samples_, std::move(cands));
}

nlohmann::ordered_json sample_to_json(const Sample& s, const std::optional<CandidateSet>& cands) {
  nlohmann::ordered_json j;
  j["id"] = s.id;
  if (s.text) j["text"] = *s.text;
  j["features"] = s.features;
  if (!s.aug_features.empty()) j["aug_features"] = s.aug_features;
  if (s.gold) j["gold"] = *s.gold;
  if (cands) j["candidates"] = cands->labels();
  return j;
}

std::string dataset_to_jsonl(const Dataset& data) {
  std::ostringstream out;
  for (std::size_t i = 0; i < data.size(); ++i) {
    out << sample_to_json(data.sample(i), data.candidates(i)).dump() << '\n';
  }
  return out.str();
}

void save_dataset(const Dataset& data, const std::filesystem::path& path) {
  io::write_atomic(path, dataset_to_jsonl(data));
}

namespace {

std::vector<double> read_vector(const nlohmann::json& j, const char* field) {
  if (!j.is_array()) throw InputError(std::string(field) + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) {
    if (!v.is_number()) throw InputError(std::string(field) + " must be an array of numbers");
    out.push_back(v.get<double>());
  }
  return out;
}

Label read_label(const nlohmann::json& v, std::size_t num_classes) {
  if (!v.is_number_integer()) throw InputError("label must be an integer");
  auto raw = v.get<long long>();
  if (raw < 0 || static_cast<unsigned long long>(raw) >= num_classes) {
    throw InputError("label out of range: " + std::to_string(raw));
  }
  return static_cast<Label>(raw);
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& path, const LabelSpace& label_space) {
  std::vector<Sample> samples;
  std::vector<std::optional<CandidateSet>> cands;
  std::unordered_map<std::string, std::size_t> seen;
  std::size_t dim = 0;
  const std::size_t num_classes = label_space.size();

  io::for_each_line(path, [&](const std::string& line, std::size_t number) {
    try {
      auto j = nlohmann::json::parse(line);
      if (!j.is_object()) throw InputError("record is not an object");
      Sample s;
      if (!j.contains("id") || !j["id"].is_string()) throw InputError("missing string id");
      s.id = j["id"].get<std::string>();
      if (j.contains("text") && !j["text"].is_null()) s.text = j["text"].get<std::string>();
      if (!j.contains("features")) throw InputError("missing features");
      s.features = read_vector(j["features"], "features");
      if (j.contains("aug_features")) {
        for (const auto& view : j["aug_features"]) {
          s.aug_features.push_back(read_vector(view, "aug_features"));
        }
      }
      if (j.contains("gold") && !j["gold"].is_null()) s.gold = read_label(j["gold"], num_classes);
      std::optional<CandidateSet> set;
      if (j.contains("candidates") && !j["candidates"].is_null()) {
        std::vector<Label> labels;
        for (const auto& v : j["candidates"]) labels.push_back(read_label(v, num_classes));
        std::sort(labels.begin(), labels.end());
        if (std::adjacent_find(labels.begin(), labels.end()) != labels.end()) {
          throw InputError("duplicate label in candidates");
        }
        set = CandidateSet(std::move(labels), num_classes);
      }
      if (samples.empty()) dim = s.features.size();
      if (s.features.size() != dim) {
        throw InputError("dimension mismatch: expected " + std::to_string(dim) + ", got " +
                         std::to_string(s.features.size()));
      }
      for (const auto& view : s.aug_features) {
        if (view.size() != dim) throw InputError("dimension mismatch in aug_features");
      }
      if (!seen.emplace(s.id, number).second) throw InputError("duplicate id \"" + s.id + "\"");
      samples.push_back(std::move(s));
      cands.push_back(std::move(set));
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string(), number, std::string("malformed record: ") + e.what());
    } catch (const ParseError&) {
      throw;
    } catch (const InputError& e) {
      throw ParseError(path.string(), number, e.what());
    }
  });
  return Dataset(label_space, std::move(samples), std::move(cands));
}

}  // namespace candist
