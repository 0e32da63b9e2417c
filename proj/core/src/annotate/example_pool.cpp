#include "candist/annotate/example_pool.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <nlohmann/json.hpp>

#include "candist/core/io.hpp"
#include "candist/error.hpp"

namespace candist::annotate {

namespace {

double norm(std::span<const double> v) {
  return std::sqrt(std::inner_product(v.begin(), v.end(), v.begin(), 0.0));
}

}  // namespace

ExamplePool::ExamplePool(std::vector<PoolEntry> entries) : entries_(std::move(entries)) {
  for (const auto& e : entries_) {
    if (e.embedding.size() != entries_.front().embedding.size()) {
      throw InputError("example pool embeddings differ in dimension");
    }
    if (e.embedding.empty() || norm(e.embedding) == 0.0) {
      throw InputError("example pool entry \"" + e.id + "\" has a zero embedding");
    }
  }
}

ExamplePool ExamplePool::load(const std::filesystem::path& path, const LabelSpace& labels) {
  std::vector<PoolEntry> entries;
  io::for_each_line(path, [&](const std::string& line, std::size_t number) {
    try {
      auto j = nlohmann::json::parse(line);
      std::vector<Label> answer;
      if (j.contains("label")) {
        answer.push_back(j["label"].get<Label>());
      } else {
        answer = j.at("candidates").get<std::vector<Label>>();
      }
      entries.push_back(PoolEntry{j.at("id").get<std::string>(), j.at("text").get<std::string>(),
                                  CandidateSet(std::move(answer), labels.size()),
                                  j.at("embedding").get<std::vector<double>>()});
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(path.string(), number, e.what());
    } catch (const InputError& e) {
      throw ParseError(path.string(), number, e.what());
    }
  });
  return ExamplePool(std::move(entries));
}

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw InputError("cosine similarity: dimension mismatch");
  const double na = norm(a);
  const double nb = norm(b);
  if (na == 0.0 || nb == 0.0) throw InputError("cosine similarity of a zero vector");
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0) / (na * nb);
}

std::vector<FewShotExample> retrieve_few_shot(std::span<const double> query,
                                              const ExamplePool& pool, std::size_t k) {
  if (k > pool.size()) {
    throw InputError("requested " + std::to_string(k) + " few-shot examples from a pool of " +
                     std::to_string(pool.size()));
  }
  if (!pool.empty() && query.size() != pool.dim()) {
    throw InputError("query embedding dimension " + std::to_string(query.size()) +
                     " does not match pool dimension " + std::to_string(pool.dim()));
  }
  std::vector<double> sims(pool.size());
  for (std::size_t i = 0; i < pool.size(); ++i) {
    sims[i] = cosine_similarity(query, pool[i].embedding);
  }
  std::vector<std::size_t> order(pool.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return sims[a] > sims[b]; });
  std::vector<FewShotExample> out;
  out.reserve(k);
  for (std::size_t r = 0; r < k; ++r) {
    const auto& e = pool[order[r]];
    out.push_back(FewShotExample{e.id, e.text, e.answer, sims[order[r]]});
  }
  return out;
}

}  // namespace candist::annotate
