#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>

#include "candist/core/types.hpp"

namespace candist::metrics {

/// Gold-inclusion rate 1 - alpha: the fraction of sets containing gold.
double alpha_error(std::span<const CandidateSet> candidates, std::span<const Label> gold);

/// Mean of (C - |s|) / (C - 1): 1 when every set is a singleton, 0 when
/// every set is the whole label space.
double beta_coverage(std::span<const CandidateSet> candidates, std::size_t num_classes);

/// 2(1-alpha)beta / (1-alpha+beta); 0 when the denominator vanishes.
double f1_score(double one_minus_alpha, double beta);

struct AssessmentReport {
  double one_minus_alpha = 0.0;
  double beta = 0.0;
  double f1 = 0.0;
  double mean_set_size = 0.0;
  std::size_t n = 0;
  /// Present only when every set is a singleton.
  std::optional<double> accuracy;
};

AssessmentReport assess(std::span<const CandidateSet> candidates, std::span<const Label> gold,
                        std::size_t num_classes);

/// dataset,strategy,n,one_minus_alpha,mean_set_size,beta,f1
std::string csv_header();
std::string csv_row(const std::string& dataset, const std::string& strategy,
                    const AssessmentReport& report);

}  // namespace candist::metrics
