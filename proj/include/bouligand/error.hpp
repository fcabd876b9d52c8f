#pragma once

#include <stdexcept>
#include <string>

namespace bouligand {

enum class ErrorCode {
  InvalidArgument,
  InvalidMesh,
  DimensionMismatch,
  NonFinite,
  NotConverged,
  Degenerate,
  Refused,
  Io,
  Internal,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Thrown by iterative solvers; carries the residual reached when giving up.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double residual, int iterations)
      : Error(ErrorCode::NotConverged, what), residual_(residual), iterations_(iterations) {}
  double residual() const noexcept { return residual_; }
  int iterations() const noexcept { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace bouligand
