#include "sparsekit/error.hpp"

#include <sstream>

namespace sparsekit {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "invalid_argument";
    case ErrorCode::kStructural: return "structural";
    case ErrorCode::kParse: return "parse";
    case ErrorCode::kDisconnected: return "disconnected";
    case ErrorCode::kBarrierViolation: return "barrier_violation";
    case ErrorCode::kSolverFailure: return "solver_failure";
    case ErrorCode::kMissingProvenance: return "missing_provenance";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

namespace {

std::string barrier_message(double eigenvalue, double lower, double upper,
                            std::int64_t iteration) {
  std::ostringstream os;
  os.precision(17);
  os << "barrier violation: eigenvalue " << eigenvalue
     << " is not strictly inside (" << lower << ", " << upper << ")";
  if (iteration >= 0) os << " at iteration " << iteration;
  return os.str();
}

}  // namespace

BarrierViolation::BarrierViolation(double eigenvalue, double lower,
                                   double upper, std::int64_t iteration)
    : Error(ErrorCode::kBarrierViolation,
            barrier_message(eigenvalue, lower, upper, iteration)),
      eigenvalue_(eigenvalue),
      lower_(lower),
      upper_(upper),
      iteration_(iteration) {}

}  // namespace sparsekit
