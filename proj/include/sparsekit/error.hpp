#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sparsekit {

/// Failure categories. The CLI maps each one to a stable exit code.
enum class ErrorCode {
  kInvalidArgument,
  kStructural,
  kParse,
  kDisconnected,
  kBarrierViolation,
  kSolverFailure,
  kMissingProvenance,
  kIo,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& message)
      : Error(ErrorCode::kParse,
              "line " + std::to_string(line) + ": " + message),
        line_(line) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

class DisconnectedGraphError : public Error {
 public:
  DisconnectedGraphError(int a, int b)
      : Error(ErrorCode::kDisconnected,
              "graph is disconnected: no path between vertex " +
                  std::to_string(a) + " and vertex " + std::to_string(b)),
        a_(a),
        b_(b) {}

  int first() const { return a_; }
  int second() const { return b_; }

 private:
  int a_;
  int b_;
};

/// An eigenvalue of A left the open interval (l, u) by less than the margin.
class BarrierViolation : public Error {
 public:
  BarrierViolation(double eigenvalue, double lower, double upper,
                   std::int64_t iteration = -1);

  double eigenvalue() const { return eigenvalue_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }
  std::int64_t iteration() const { return iteration_; }

  BarrierViolation at_iteration(std::int64_t iteration) const {
    return BarrierViolation(eigenvalue_, lower_, upper_, iteration);
  }

 private:
  double eigenvalue_;
  double lower_;
  double upper_;
  std::int64_t iteration_;
};

class SolverError : public Error {
 public:
  SolverError(double residual, int iterations)
      : Error(ErrorCode::kSolverFailure,
              "Laplacian solver did not converge: relative residual " +
                  std::to_string(residual) + " after " +
                  std::to_string(iterations) + " iterations"),
        residual_(residual),
        iterations_(iterations) {}

  double residual() const { return residual_; }
  int iterations() const { return iterations_; }

 private:
  double residual_;
  int iterations_;
};

}  // namespace sparsekit
