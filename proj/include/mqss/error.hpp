#pragma once

#include <stdexcept>

namespace mqss {

// A caller broke a documented precondition (bad index, size mismatch, ...).
class ContractViolation : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

// A linear combination of states collapsed to the zero vector.
class DegenerateSuperposition : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// Step 5 found no Case 2 / Case 3 round to check against.
class IndeterminateCheck : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Not enough sifted raw key for the requested operation.
class MoreRoundsNeeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace mqss
