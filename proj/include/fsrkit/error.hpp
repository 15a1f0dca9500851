#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace fsrkit {

/// An exhaustive oracle was asked to sweep more than its configured bound.
class BoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed circuit, FSR or polynomial text.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Largest input/stage count the exhaustive sweeps accept. Defaults to 24;
/// the FSRKIT_MAX_STAGE environment variable overrides it (capped at 30).
std::size_t exhaustive_bound();

void require_within_bound(std::size_t n, const char* what);

}  // namespace fsrkit
