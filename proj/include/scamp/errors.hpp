#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace scamp {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or parameter outside the validity range of an engine.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// Postselection on an event whose probability is below the configured floor.
class NegligibleEventError : public Error {
 public:
  NegligibleEventError(const std::string& what, double probability)
      : Error(what), probability_(probability) {}
  double probability() const { return probability_; }

 private:
  double probability_;
};

/// Fock-space truncation too small for the requested state.
class TruncationError : public Error {
 public:
  TruncationError(const std::string& what, int suggested_dim)
      : Error(what), suggested_dim_(suggested_dim) {}
  int suggested_dim() const { return suggested_dim_; }

 private:
  int suggested_dim_;
};

/// The coarse scan of the gain optimizer found its best point on the edge of
/// the search interval. The scan is attached for diagnostics.
class BracketError : public Error {
 public:
  BracketError(const std::string& what, std::vector<std::pair<double, double>> scan)
      : Error(what), scan_(std::move(scan)) {}
  const std::vector<std::pair<double, double>>& scan() const { return scan_; }

 private:
  std::vector<std::pair<double, double>> scan_;
};

/// Malformed configuration file or command-line value.
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace scamp
