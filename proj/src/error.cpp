#include "bouligand/error.hpp"

namespace bouligand {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "invalid argument";
    case ErrorCode::InvalidMesh: return "invalid mesh";
    case ErrorCode::DimensionMismatch: return "dimension mismatch";
    case ErrorCode::NonFinite: return "non-finite value";
    case ErrorCode::NotConverged: return "not converged";
    case ErrorCode::Degenerate: return "degenerate input";
    case ErrorCode::Refused: return "refused";
    case ErrorCode::Io: return "i/o error";
    case ErrorCode::Internal: return "internal error";
  }
  return "unknown";
}

}  // namespace bouligand
