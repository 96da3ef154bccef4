#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qcell {

// All frequencies and couplings are linear frequencies (value/2pi) in MHz.
// Times are in ns.  The phase accumulated by a level at E MHz over t ns is
// 2*pi*E*t*1e-3, which is what kPhasePerMhzNs converts.
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;
inline constexpr double kPhasePerMhzNs = kTwoPi * 1e-3;

class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg) : Error("parse error: " + msg) {}
};

class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& msg)
      : Error("validation error: " + msg) {}
};

class CalibrationError : public Error {
 public:
  explicit CalibrationError(const std::string& msg) : Error(msg) {}
};

class SolverError : public Error {
 public:
  explicit SolverError(const std::string& msg) : Error(msg) {}
};

// splitmix64; used wherever a seeded deterministic stream is needed so that
// layouts and scans do not depend on library implementation details.
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform in [-1, 1]
  double next_symmetric() {
    return 2.0 * (static_cast<double>(next() >> 11) * 0x1.0p-53) - 1.0;
  }

 private:
  std::uint64_t state_;
};

}  // namespace qcell
