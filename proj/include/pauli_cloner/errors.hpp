#pragma once

#include <stdexcept>
#include <string>

namespace pauli_cloner {

/// Invalid caller input: out-of-range index, shape mismatch, bad probability.
class ArgumentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Valid request outside what the library implements (e.g. N > 3 classes).
class UnsupportedError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Internal consistency failure while classifying a Pauli action on a basis.
class ClassificationError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Optimizer hit a non-finite objective value.
class OptimizerDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pauli_cloner
