// GHZ-state constructors and closed-form predictions of how a GHZ state looks
// after Hadamard gates on all or some of its particles. The closed forms are
// independent of the gate-by-gate engine in statevec and serve as oracles for it
// (and vice versa).

#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mqss/rng.hpp"
#include "mqss/statevec.hpp"

namespace mqss {

/// Descriptor (x, b) of the GHZ state (|x> + (-1)^b |x-bar>)/sqrt(2).
/// Not canonicalized: (x, b) and (complement(x), b) name the same physical
/// state up to phase and are both legal.
struct GhzSpec {
  BitVector x;
  std::uint8_t b = 0;

  std::size_t qubit_count() const { return x.size(); }
  friend bool operator==(const GhzSpec&, const GhzSpec&) = default;
};

// Throws ContractViolation unless q >= 2 and every bit is 0/1.
void validate(const GhzSpec& spec);

BitVector complement(std::span<const std::uint8_t> bits);

// Uniformly random x and b.
GhzSpec random_spec(std::size_t qubit_count, Rng& rng);

/// Split of particles 1..q into those receiving H and those left alone.
class HadamardPattern {
 public:
  // Positions are 1-based; duplicates and out-of-range entries are rejected.
  static HadamardPattern from_h_positions(std::size_t qubit_count,
                                          std::vector<std::size_t> h_positions);

  std::size_t qubit_count() const { return qubit_count_; }
  const std::vector<std::size_t>& h_positions() const { return h_positions_; }
  const std::vector<std::size_t>& i_positions() const { return i_positions_; }

 private:
  HadamardPattern() = default;
  std::size_t qubit_count_ = 0;
  std::vector<std::size_t> h_positions_;
  std::vector<std::size_t> i_positions_;
};

/// One term K of the partial-Hadamard expansion
///   sum_K (-1)^sign_bit |k_1..k_m>_H (x) (|lo> + (-1)^(parity + b) |hi>)/sqrt(2)
/// where lo is whichever of x_I, complement(x_I) starts with 0.
struct DecompositionTerm {
  std::size_t k;                  // decimal value of the H-position outcome
  BitVector k_bits;               // its binary form, one bit per H position
  std::uint8_t sign_bit;          // exponent of the leading (-1)
  std::uint8_t weight_parity;     // Hamming-weight parity of k_bits
  std::size_t identity_value;     // decimal value of x restricted to identity positions
};

std::vector<DecompositionTerm> decompose_partial_hadamard(const GhzSpec& spec,
                                                          const HadamardPattern& pattern);

PureState prepare(const GhzSpec& spec);

// H on every particle, in closed form.
PureState predict_full_hadamard(const GhzSpec& spec);

// H on pattern.h_positions() only; requires 1 <= |h_positions| <= q-1.
PureState predict_partial_hadamard(const GhzSpec& spec, const HadamardPattern& pattern);

// XOR of all Z results after H on every particle; always equals b.
std::uint8_t parity_oracle(const GhzSpec& spec);

/// Spec of the remaining q-1 particles after `measured_position` received H
/// and was measured in Z with `outcome`. Requires q >= 3.
GhzSpec residual_phase(const GhzSpec& spec, std::size_t measured_position, std::uint8_t outcome);

}  // namespace mqss
