#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace spectralmono {

enum class ErrorCode {
  NotSymmetric,
  NoConvergence,
  Reducible,
  ShapeMismatch,
  DimensionOverflow,
  PatternAsymmetric,
  CycleInconsistent,
  NotCommuting,
  NotJointlySymmetrizable,
  JointDiagonalizationFailed,
  NotSymmetrizable,
  SOSMismatch,
  OracleMismatch,
  StepTooLarge,
  EmptySpectrum,
  AbsorbingState,
  ComplexSpectrum,
  AlphaOutOfRange,
  NotStochastic,
  GenerationExhausted,
  InvalidInput,
};

const char* error_code_name(ErrorCode code);

class SpectralError : public std::runtime_error {
 public:
  SpectralError(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

  // Witness indices (0-based). For CycleInconsistent this is the closed walk
  // whose forward/backward products violate the Kolmogorov condition; for
  // PatternAsymmetric it is the offending (i, j) pair.
  std::vector<std::size_t> witness;

 private:
  ErrorCode code_;
};

[[noreturn]] void fail(ErrorCode code, const std::string& message);
[[noreturn]] void fail_with_witness(ErrorCode code, const std::string& message,
                                    std::vector<std::size_t> witness);

}  // namespace spectralmono
