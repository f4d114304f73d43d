#pragma once

#include <stdexcept>
#include <string>

namespace margulis {

/// Failure categories surfaced by the library. Stable names; the CLI prints
/// them verbatim in diagnostics.
enum class Errc {
  NonConvergence,
  NotDivisible,
  NotLoxodromic,
  ComplexEigendata,
  Degenerate,
  LengthMismatch,
  ZeroInput,
  GenerationFailed,
  InvalidInput,
};

inline const char* to_string(Errc c) {
  switch (c) {
    case Errc::NonConvergence: return "NON_CONVERGENCE";
    case Errc::NotDivisible: return "NOT_DIVISIBLE";
    case Errc::NotLoxodromic: return "NOT_LOXODROMIC";
    case Errc::ComplexEigendata: return "COMPLEX_EIGENDATA";
    case Errc::Degenerate: return "DEGENERATE";
    case Errc::LengthMismatch: return "LENGTH_MISMATCH";
    case Errc::ZeroInput: return "ZERO_INPUT";
    case Errc::GenerationFailed: return "GENERATION_FAILED";
    case Errc::InvalidInput: return "INVALID_INPUT";
  }
  return "UNKNOWN";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace margulis
