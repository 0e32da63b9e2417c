#include "candist/metrics/metrics.hpp"

#include <algorithm>
#include <sstream>

#include "candist/core/io.hpp"
#include "candist/error.hpp"

namespace candist::metrics {

double alpha_error(std::span<const CandidateSet> candidates, std::span<const Label> gold) {
  if (candidates.size() != gold.size()) {
    throw InputError("alpha_error: " + std::to_string(candidates.size()) + " sets vs " +
                     std::to_string(gold.size()) + " gold labels");
  }
  if (candidates.empty()) throw InputError("alpha_error: empty input");
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (candidates[i].contains(gold[i])) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(gold.size());
}

double beta_coverage(std::span<const CandidateSet> candidates, std::size_t num_classes) {
  if (num_classes < 2) throw InputError("beta_coverage: C must be at least 2");
  if (candidates.empty()) throw InputError("beta_coverage: empty input");
  const auto C = static_cast<double>(num_classes);
  double total = 0.0;
  for (const auto& s : candidates) {
    if (s.size() > num_classes) throw InputError("beta_coverage: set larger than label space");
    total += (C - static_cast<double>(s.size())) / (C - 1.0);
  }
  return total / static_cast<double>(candidates.size());
}

double f1_score(double one_minus_alpha, double beta) {
  const double denom = one_minus_alpha + beta;
  if (denom <= 0.0) return 0.0;
  return 2.0 * one_minus_alpha * beta / denom;
}

AssessmentReport assess(std::span<const CandidateSet> candidates, std::span<const Label> gold,
                        std::size_t num_classes) {
  if (candidates.empty()) throw InputError("assess: no annotated samples");
  AssessmentReport r;
  r.n = candidates.size();
  r.one_minus_alpha = alpha_error(candidates, gold);
  r.beta = beta_coverage(candidates, num_classes);
  r.f1 = f1_score(r.one_minus_alpha, r.beta);
  double sizes = 0.0;
  for (const auto& s : candidates) sizes += static_cast<double>(s.size());
  r.mean_set_size = sizes / static_cast<double>(r.n);
  const bool singletons =
      std::all_of(candidates.begin(), candidates.end(), [](const auto& s) { return s.size() == 1; });
  if (singletons) r.accuracy = r.one_minus_alpha;
  return r;
}

std::string csv_header() { return "dataset,strategy,n,one_minus_alpha,mean_set_size,beta,f1"; }

std::string csv_row(const std::string& dataset, const std::string& strategy,
                    const AssessmentReport& report) {
  std::ostringstream out;
  out << dataset << ',' << strategy << ',' << report.n << ','
      << io::format_double(report.one_minus_alpha) << ','
      << io::format_double(report.mean_set_size) << ',' << io::format_double(report.beta) << ','
      << io::format_double(report.f1);
  return out.str();
}

}  // namespace candist::metrics
