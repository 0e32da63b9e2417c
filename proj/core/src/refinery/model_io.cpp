#include "candist/refinery/model_io.hpp"

#include <algorithm>

#include <nlohmann/json.hpp>

#include "candist/core/io.hpp"
#include "candist/error.hpp"

namespace candist::refinery {

std::string model_to_string(const Classifier& model, const LabelSpace& labels,
                            const RefineryConfig& config) {
  nlohmann::ordered_json j;
  j["format"] = "candist-model/1";
  j["kind"] = model.kind();
  j["label_space"] = labels.to_json();
  j["num_classes"] = model.num_classes();
  j["input_dim"] = model.input_dim();
  j["hidden"] = model.hidden();
  j["seed"] = config.seed;
  j["config"] = nlohmann::json(config);
  const auto p = model.parameters();
  j["parameters"] = std::vector<double>(p.begin(), p.end());
  return j.dump(1) + "\n";
}

ModelFile model_from_string(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("model file is not valid JSON: ") + e.what());
  }
  try {
    if (j.value("format", "") != "candist-model/1") throw InputError("unrecognised model format");
    auto labels = LabelSpace::from_json(j.at("label_space"));
    auto config = j.at("config").get<RefineryConfig>();
    const auto C = j.at("num_classes").get<std::size_t>();
    if (C != labels.size()) throw InputError("model class count disagrees with its label space");
    auto model = make_classifier(j.at("kind").get<std::string>(), C,
                                 j.at("input_dim").get<std::size_t>(),
                                 j.at("hidden").get<std::size_t>(), config.seed);
    const auto params = j.at("parameters").get<std::vector<double>>();
    auto dst = model->parameters();
    if (params.size() != dst.size()) throw InputError("model parameter count mismatch");
    std::copy(params.begin(), params.end(), dst.begin());
    return {std::move(labels), std::move(model), std::move(config)};
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed model file: ") + e.what());
  }
}

void save_model(const std::filesystem::path& path, const Classifier& model,
                const LabelSpace& labels, const RefineryConfig& config) {
  io::write_atomic(path, model_to_string(model, labels, config));
}

ModelFile load_model(const std::filesystem::path& path) {
  return model_from_string(io::read_file(path));
}

}  // namespace candist::refinery
