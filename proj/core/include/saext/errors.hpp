#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace saext {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that violate a documented precondition (bad mesh size, non-unitary
/// boundary matrix, shape mismatch, malformed configuration).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// One conditioning probe of the boundary matrix at resolution N.
struct ConditionAttempt {
  int resolution = 0;
  double kappa_estimate = 0.0;
  double spectrum_gap = 0.0;
};

/// The boundary matrix F is too ill-conditioned (or singular) to determine
/// the boundary functions at the requested resolution(s).
class ConditionFailure : public Error {
 public:
  ConditionFailure(const std::string& what, std::vector<ConditionAttempt> history)
      : Error(what), history_(std::move(history)) {}

  double kappa_estimate() const { return history_.empty() ? 0.0 : history_.back().kappa_estimate; }
  double spectrum_gap() const { return history_.empty() ? 0.0 : history_.back().spectrum_gap; }
  const std::vector<ConditionAttempt>& history() const { return history_; }

 private:
  std::vector<ConditionAttempt> history_;
};

/// Generalized eigensolver failure. `pivot()` is the Cholesky pivot at which B
/// stopped being positive definite, or -1 when the failure is of another kind.
class EigenFailure : public Error {
 public:
  EigenFailure(const std::string& what, int pivot) : Error(what), pivot_(pivot) {}
  int pivot() const { return pivot_; }

 private:
  int pivot_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace saext
