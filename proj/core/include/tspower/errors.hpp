#pragma once

#include <stdexcept>
#include <string>

namespace tspower {

/// Frequencies that share no common base frequency within tolerance.
class IncommensurateError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// The MNA matrix at some frequency has no usable pivot.
class SingularNetwork : public std::runtime_error {
 public:
  SingularNetwork(double omega, const std::string& what)
      : std::runtime_error(what), omega_(omega) {}

  double omega() const noexcept { return omega_; }

 private:
  double omega_;
};

/// Malformed netlist, config, or spectrum. `path()` is a JSON pointer into the
/// offending document ("" when the document itself failed to parse).
class ParseError : public std::runtime_error {
 public:
  ParseError(std::string path, std::string message)
      : std::runtime_error(path.empty() ? message : path + ": " + message),
        path_(std::move(path)),
        message_(std::move(message)) {}

  const std::string& path() const noexcept { return path_; }
  const std::string& message() const noexcept { return message_; }

 private:
  std::string path_;
  std::string message_;
};

/// Two independent computations of the same quantity disagree.
class ConsistencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tspower
