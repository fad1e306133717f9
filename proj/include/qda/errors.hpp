#pragma once

#include <stdexcept>
#include <string>

namespace qda {

/// Requested size or dimension exceeds what a generator or table supports.
class CapacityError : public std::length_error {
 public:
  using std::length_error::length_error;
};

/// Every support point received zero mass; the proposal has to be revised.
class NoMassError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The target returned NaN (or -inf) at some point.
class TargetEvaluationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Factorization or other numerical breakdown.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qda
