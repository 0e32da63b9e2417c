#pragma once
// Builders shared by the CLI tests and the acceptance binary.

#include <filesystem>
#include <string>
#include <vector>

namespace candist::testing {

/// Temporary directory removed on destruction.
class TempDir {
 public:
  explicit TempDir(const std::string& tag);
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Writes a dataset with gold labels and an annotations file whose sets
/// hit `inclusion_count` of `n` gold labels with `pairs` sets of size two
/// (the rest singletons), over the six TREC classes.
void write_metric_fixture(const std::filesystem::path& data, const std::filesystem::path& annotations,
                          std::size_t n, std::size_t inclusion_count, std::size_t pairs);

/// Small TREC-style dataset (text, features, gold) plus a replay log for
/// the ca_all strategy recorded from a deterministic scripted endpoint.
void write_trec_replay_fixture(const std::filesystem::path& data, const std::filesystem::path& replay);

/// Runs the CLI with stdout captured.
int run_cli(const std::vector<std::string>& args, std::string* out = nullptr);

}  // namespace candist::testing
