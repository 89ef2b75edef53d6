#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slowlight {

// Root of everything the library throws on bad input or failed numerics.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
 public:
  using Error::Error;
};

// Singular constrained steady-state system (degenerate configuration).
class RankDeficiencyError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// 1 + Re(chi) <= 0: refractive index root leaves the principal branch.
class BranchCutError : public Error {
 public:
  using Error::Error;
};

class BandwidthError : public Error {
 public:
  using Error::Error;
};

// A grid point of a scan failed; carries the point for the report.
class ScanError : public Error {
 public:
  ScanError(std::size_t index, double detuning, const std::string& cause)
      : Error("scan point " + std::to_string(index) + " (two-photon detuning " +
              std::to_string(detuning) + "): " + cause),
        index_(index),
        detuning_(detuning) {}
  std::size_t index() const noexcept { return index_; }
  double detuning() const noexcept { return detuning_; }

 private:
  std::size_t index_;
  double detuning_;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& what, int line)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class UnitError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace slowlight
