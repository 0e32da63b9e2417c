#include "fixtures.hpp"

#include <atomic>
#include <iostream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "candist/annotate/annotator.hpp"
#include "candist/core/dataset.hpp"
#include "candist/core/io.hpp"
#include "candist_cli.hpp"

namespace candist::testing {

namespace fs = std::filesystem;

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  std::random_device rd;
  path_ = fs::temp_directory_path() /
          ("candist-" + tag + "-" + std::to_string(rd()) + "-" + std::to_string(counter++));
  fs::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  fs::remove_all(path_, ec);
}

void write_metric_fixture(const fs::path& data, const fs::path& annotations, std::size_t n,
                          std::size_t inclusion_count, std::size_t pairs) {
  std::ostringstream d, a;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t gold = i % 6;
    const bool hit = i < inclusion_count;
    // Misses point at the next class; pairs add one more wrong class.
    const std::size_t first = hit ? gold : (gold + 1) % 6;
    nlohmann::json cands = nlohmann::json::array({first});
    if (i >= n - pairs) cands.push_back((gold + 2) % 6);
    const std::string id = "t" + std::to_string(i);
    d << nlohmann::json{{"id", id}, {"features", nlohmann::json::array({0.0})}, {"gold", gold}}.dump() << '\n';
    a << nlohmann::json{{"id", id}, {"strategy", "ca_all"}, {"candidates", cands}, {"raw", nlohmann::json::array()}}.dump()
      << '\n';
  }
  io::write_atomic(data, d.str());
  io::write_atomic(annotations, a.str());
}

namespace {

struct Question {
  const char* text;
  std::size_t gold;
  const char* reply;
};

// Replies alternate between confident and hedged answers.
constexpr Question kQuestions[] = {
    {"What does the abbreviation NATO stand for?", 0, "Abbreviation"},
    {"What is the full form of the letters DNA?", 0, "Abbreviation; Entities"},
    {"What instrument did the composer play first?", 2, "Entities"},
    {"Which gemstone is the hardest known?", 2, "Entities; Description and abstract concepts"},
    {"Why does the sky look blue at noon?", 1, "Description and abstract concepts"},
    {"What is the meaning of the word serendipity?", 1, "Description and abstract concepts; Abbreviation"},
    {"Who painted the ceiling of the chapel?", 3, "Human beings"},
    {"Which scientist first described gravity?", 3, "Human beings; Entities"},
    {"Where is the tallest mountain in Africa?", 4, "Locations"},
    {"In which country does the river end?", 4, "Locations; Human beings"},
    {"How many moons does the fifth planet have?", 5, "Numeric values"},
    {"When did the first transatlantic flight land?", 5, "Numeric values; Entities"},
};

}  // namespace

void write_trec_replay_fixture(const fs::path& data, const fs::path& replay) {
  std::vector<Sample> samples;
  std::size_t i = 0;
  for (const auto& q : kQuestions) {
    Sample s;
    s.id = "q" + std::to_string(i);
    s.text = q.text;
    s.features = {static_cast<double>(q.gold), static_cast<double>(i % 3)};
    s.gold = q.gold;
    samples.push_back(s);
    ++i;
  }
  const Dataset ds(LabelSpace::trec(), samples);
  save_dataset(ds, data);

  std::error_code ec;
  fs::remove(replay, ec);
  annotate::ReplayRecorder recorder(replay);
  annotate::AnnotateOptions opt;
  opt.task = annotate::TaskDescription::trec();
  opt.client.max_concurrency = 1;
  opt.recorder = &recorder;
  annotate::ScriptedClient client([&](const annotate::ChatRequest& req) {
    const auto idx = std::stoul(req.sample_id.substr(1));
    return std::vector<std::string>{kQuestions[idx].reply};
  });
  annotate::annotate(ds, client, opt);
}

int run_cli(const std::vector<std::string>& args, std::string* out) {
  std::ostringstream capture;
  auto* old = std::cout.rdbuf(capture.rdbuf());
  int code = 0;
  try {
    code = cli::run(args);
  } catch (...) {
    std::cout.rdbuf(old);
    throw;
  }
  std::cout.rdbuf(old);
  if (out) *out = capture.str();
  return code;
}

}  // namespace candist::testing
