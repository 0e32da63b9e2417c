#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace candist {

/// Root of every exception thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Bad caller input: malformed files, violated preconditions, invalid
/// parameters. The CLI maps these to exit code 1.
class InputError : public Error {
 public:
  using Error::Error;
};

/// Malformed record at a known line of a line-oriented file.
class ParseError : public InputError {
 public:
  ParseError(std::string path, std::size_t line, const std::string& what)
      : InputError(path + ":" + std::to_string(line) + ": " + what),
        path_(std::move(path)),
        line_(line) {}

  const std::string& path() const noexcept { return path_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

/// A response mentioned none of the label-space categories.
class NoLabelFound : public InputError {
 public:
  using InputError::InputError;
};

/// Failure while running: endpoint exhaustion, divergence, I/O.
/// The CLI maps these to exit code 2.
class RuntimeFailure : public Error {
 public:
  using Error::Error;
};

class DivergenceError : public RuntimeFailure {
 public:
  explicit DivergenceError(int epoch)
      : RuntimeFailure("training diverged (non-finite loss) at epoch " + std::to_string(epoch)),
        epoch_(epoch) {}
  int epoch() const noexcept { return epoch_; }

 private:
  int epoch_;
};

}  // namespace candist
