#include <doctest.h>

#include <sstream>

#include <nlohmann/json.hpp>

#include "../support/fixtures.hpp"
#include "candist/core/io.hpp"

using namespace candist;
using candist::testing::run_cli;
using candist::testing::TempDir;

namespace {

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) out.push_back(l);
  return out;
}

std::vector<std::string> fields(const std::string& row) {
  std::vector<std::string> out;
  std::istringstream is(row);
  for (std::string f; std::getline(is, f, ',');) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("theory check separates the two conditions") {
  std::string out;
  REQUIRE(run_cli({"theory", "check", "--C", "2", "--m", "100", "--a", "0.8", "--b", "0.2", "--lambda", "0.01",
                   "--rho", "0.48"},
                  &out) == 0);
  CHECK(out.find("top1: FAIL") != std::string::npos);
  CHECK(out.find("top2: PASS") != std::string::npos);
  CHECK(out.find("teacher_accuracy 0.52") != std::string::npos);
  CHECK(out.find("top1_accuracy 0.52") != std::string::npos);
}

TEST_CASE("theory check reads a noise matrix file") {
  TempDir dir("cli-noise");
  io::write_atomic(dir / "R.json", "[[0.9, 0.1], [0.2, 0.8]]");
  std::string out;
  REQUIRE(run_cli({"theory", "check", "--noise", (dir / "R.json").string()}, &out) == 0);
  CHECK(out.find("top1: PASS") != std::string::npos);
  io::write_atomic(dir / "bad.json", "[[0.9, 0.2], [0.2, 0.8]]");
  CHECK(run_cli({"theory", "check", "--noise", (dir / "bad.json").string()}) == 1);
  io::write_atomic(dir / "broken.json", "[[0.9,");
  CHECK(run_cli({"theory", "check", "--noise", (dir / "broken.json").string()}) == 1);
}

TEST_CASE("theory sweep writes the grid") {
  TempDir dir("cli-sweep");
  std::string out;
  REQUIRE(run_cli({"theory", "sweep", "--out-dir", dir.path().string()}, &out) == 0);
  const auto rows = lines(io::read_file(dir / "sweep.csv"));
  REQUIRE(rows.size() == 51);
  CHECK(rows[0] == "rho,teacher_acc,top1_acc,top2_acc,cond_top1,cond_top2");
  CHECK(rows[8].rfind("0.07,", 0) == 0);
  CHECK(rows[45].find(",pass,") != std::string::npos);
  CHECK(rows[46].find(",fail,") != std::string::npos);
  CHECK(std::filesystem::exists(dir / "sweep.csv.manifest.json"));
}

TEST_CASE("assess reproduces the reference aggregates") {
  TempDir dir("cli-assess");
  testing::write_metric_fixture(dir / "d.jsonl", dir / "a.jsonl", 10000, 8909, 7000);
  std::string out;
  REQUIRE(run_cli({"assess", "--data", (dir / "d.jsonl").string(), "--annotations", (dir / "a.jsonl").string(),
                   "--name", "trec", "--out-dir", dir.path().string()},
                  &out) == 0);
  const auto rows = lines(out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "dataset,strategy,n,one_minus_alpha,mean_set_size,beta,f1");
  const auto f = fields(rows[1]);
  REQUIRE(f.size() == 7);
  CHECK(f[0] == "trec");
  CHECK(f[1] == "ca_all");
  CHECK(f[2] == "10000");
  CHECK(std::stod(f[3]) == doctest::Approx(0.8909));
  CHECK(std::stod(f[4]) == doctest::Approx(1.7));
  CHECK(std::stod(f[5]) == doctest::Approx(0.86));
  CHECK(std::stod(f[6]) == doctest::Approx(0.875).epsilon(1e-3));

  testing::write_metric_fixture(dir / "d.jsonl", dir / "a.jsonl", 10000, 7107, 0);
  REQUIRE(run_cli({"assess", "--data", (dir / "d.jsonl").string(), "--annotations", (dir / "a.jsonl").string(),
                   "--out-dir", dir.path().string()},
                  &out) == 0);
  CHECK(std::stod(out.substr(out.rfind(',') + 1)) == doctest::Approx(0.831).epsilon(1e-3));
}

TEST_CASE("annotate replays a log deterministically") {
  TempDir dir("cli-annotate");
  testing::write_trec_replay_fixture(dir / "trec.jsonl", dir / "replay.jsonl");
  REQUIRE(run_cli({"annotate", "--data", (dir / "trec.jsonl").string(), "--replay", (dir / "replay.jsonl").string(),
                   "--out-dir", dir.path().string()}) == 0);
  const auto first = io::read_file(dir / "annotations.jsonl");
  const auto recs = lines(first);
  REQUIRE(recs.size() == 12);
  const auto j = nlohmann::json::parse(recs[1]);
  CHECK(j["id"] == "q1");
  CHECK(j["candidates"] == nlohmann::json::array({0, 2}));
  REQUIRE(run_cli({"annotate", "--data", (dir / "trec.jsonl").string(), "--replay", (dir / "replay.jsonl").string(),
                   "--out-dir", dir.path().string()}) == 0);
  CHECK(io::read_file(dir / "annotations.jsonl") == first);

  std::string out;
  REQUIRE(run_cli({"assess", "--data", (dir / "trec.jsonl").string(), "--annotations",
                   (dir / "annotations.jsonl").string(), "--out-dir", dir.path().string()},
                  &out) == 0);
  const auto f = fields(lines(out)[1]);
  REQUIRE(f.size() == 7);
  CHECK(f[2] == "12");
  CHECK(f[3] == "1");
  CHECK(f[4] == "1.5");

  // A different strategy renders different prompts, which the log cannot serve.
  CHECK(run_cli({"annotate", "--data", (dir / "trec.jsonl").string(), "--replay", (dir / "replay.jsonl").string(),
                 "--strategy", "sa", "--retry", "0", "--out-dir", dir.path().string()}) == 2);
}

TEST_CASE("synth, distill and predict fit together") {
  TempDir dir("cli-distill");
  const auto d = dir.path().string();
  REQUIRE(run_cli({"synth", "--per-class", "50", "--sep", "6", "--inclusion", "0.9", "--mean-size", "1.5",
                   "--seed", "1", "--out-dir", d}) == 0);
  const auto synth = (dir / "synth.jsonl").string();
  CHECK(lines(io::read_file(dir / "synth.jsonl")).size() == 200);
  REQUIRE(run_cli({"distill", "--data", synth, "--labels", "numbered:4", "--epochs", "10", "--seed", "2", "--out-dir",
                   d}) == 0);
  const auto model = io::read_file(dir / "model.json");
  CHECK(nlohmann::json::parse(model)["format"] == "candist-model/1");
  REQUIRE(run_cli({"distill", "--data", synth, "--labels", "numbered:4", "--epochs", "10", "--seed", "2",
                   "--model-out", (dir / "again.json").string(), "--out-dir", d}) == 0);
  CHECK(io::read_file(dir / "again.json") == model);
  const auto history = lines(io::read_file(dir / "history.csv"));
  CHECK(history.size() == 11);
  const auto manifest = nlohmann::json::parse(io::read_file(dir / "model.json.manifest.json"));
  CHECK(manifest["command"] == "distill");
  CHECK(manifest["seed"] == 2);
  CHECK(manifest["config"]["epochs"] == 10);

  std::string out;
  REQUIRE(run_cli({"predict", "--data", synth, "--model", (dir / "model.json").string(), "--out",
                   (dir / "p2.jsonl").string()},
                  &out) == 0);
  CHECK(out.rfind("accuracy,", 0) == 0);
  CHECK(io::read_file(dir / "p2.jsonl") == io::read_file(dir / "predictions.jsonl"));
}

TEST_CASE("exit codes") {
  TempDir dir("cli-exit");
  CHECK(run_cli({}) == 1);
  CHECK(run_cli({"--help"}) == 0);
  CHECK(run_cli({"distill"}) == 1);
  CHECK(run_cli({"assess", "--data", (dir / "missing.jsonl").string()}) == 1);
  io::write_atomic(dir / "bad.jsonl", "{\"id\": \"a\", \"features\": [1]}\nnot json\n");
  CHECK(run_cli({"distill", "--data", (dir / "bad.jsonl").string(), "--labels", "numbered:2"}) == 1);
  io::write_atomic(dir / "nogold.jsonl", "{\"id\": \"a\", \"features\": [1], \"candidates\": [0]}\n");
  CHECK(run_cli({"assess", "--data", (dir / "nogold.jsonl").string(), "--labels", "numbered:2"}) == 1);
  CHECK(run_cli({"synth", "--inclusion", "0.5", "--mean-size", "1", "--C", "2", "--out-dir", dir.path().string()}) ==
        0);
  CHECK(run_cli({"synth", "--mean-size", "9", "--out-dir", dir.path().string()}) == 1);
  CHECK(run_cli({"distill", "--data", (dir / "synth.jsonl").string(), "--labels", "numbered:2", "--delta", "2",
                 "--out-dir", dir.path().string()}) == 1);
}
