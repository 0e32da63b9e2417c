#pragma once

#include <filesystem>
#include <memory>
#include <string>

#include "candist/core/label_space.hpp"
#include "candist/refinery/classifier.hpp"
#include "candist/refinery/config.hpp"

namespace candist::refinery {

struct ModelFile {
  LabelSpace label_space;
  std::unique_ptr<Classifier> model;
  RefineryConfig config;
};

/// JSON text: kind, label space, dimensions, flat parameters, config echo
/// and seed. Deterministic for identical inputs.
std::string model_to_string(const Classifier& model, const LabelSpace& labels,
                            const RefineryConfig& config);
ModelFile model_from_string(const std::string& text);

void save_model(const std::filesystem::path& path, const Classifier& model,
                const LabelSpace& labels, const RefineryConfig& config);
ModelFile load_model(const std::filesystem::path& path);

}  // namespace candist::refinery
