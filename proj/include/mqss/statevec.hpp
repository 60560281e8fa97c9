// Dense state-vector engine for small multi-qubit systems.
//
// Basis-index convention: for a q-qubit state, amplitude index k has binary
// expansion k1 k2 ... kq with k1 the most significant bit, and k1 belongs to
// particle 1. Particle indices are 1-based in every public function.

#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mqss/rng.hpp"

namespace mqss {

using Amplitude = std::complex<double>;
using BitVector = std::vector<std::uint8_t>;

inline constexpr double kTolerance = 1e-9;
inline constexpr std::size_t kMaxQubits = 24;

class SingleQubitGate {
 public:
  // Row-major 2x2 matrix; throws ContractViolation unless U U^dagger = I.
  SingleQubitGate(Amplitude u00, Amplitude u01, Amplitude u10, Amplitude u11);

  static SingleQubitGate identity();
  static SingleQubitGate hadamard();
  static SingleQubitGate pauli_x();

  Amplitude operator()(std::size_t row, std::size_t col) const { return m_[row * 2 + col]; }

 private:
  std::array<Amplitude, 4> m_;
};

/// Normalized pure state over `qubit_count` qubits. Immutable once built; every
/// operation below returns a new state.
class PureState {
 public:
  // Throws ContractViolation on a size mismatch, non-finite amplitudes, a
  // qubit count outside [1, kMaxQubits], or a norm off by more than kTolerance.
  PureState(std::size_t qubit_count, std::vector<Amplitude> amplitudes);

  std::size_t qubit_count() const { return qubit_count_; }
  std::size_t dimension() const { return amplitudes_.size(); }
  std::span<const Amplitude> amplitudes() const { return amplitudes_; }
  Amplitude amplitude(std::size_t index) const { return amplitudes_.at(index); }

 private:
  std::size_t qubit_count_;
  std::vector<Amplitude> amplitudes_;
};

struct WeightedState {
  Amplitude weight;
  PureState state;
};

struct Measurement {
  std::uint8_t outcome;
  PureState collapsed;
  double probability;
};

struct JointMeasurement {
  BitVector outcomes;
  double probability;
};

// Index <-> bit-pattern conversion under the particle-1-is-MSB convention.
std::size_t basis_index(std::span<const std::uint8_t> bits);
BitVector index_bits(std::size_t index, std::size_t qubit_count);

// Bit mask selecting `particle` (1-based) inside a basis index.
std::size_t particle_mask(std::size_t qubit_count, std::size_t particle);

PureState basis_state(std::size_t qubit_count, std::span<const std::uint8_t> bits);

// Normalized linear combination; throws DegenerateSuperposition on a zero vector.
PureState superpose(std::span<const WeightedState> terms);

PureState apply_gate(const PureState& state, std::size_t target, const SingleQubitGate& gate);

// Born probability that measuring `target` in Z yields `outcome`.
double outcome_probability(const PureState& state, std::size_t target, std::uint8_t outcome);

Measurement measure_z(const PureState& state, std::size_t target, Rng& rng);

// Measures particles 1..q in order.
JointMeasurement measure_all(const PureState& state, Rng& rng);

// Tensor product; the register's particles are appended after the state's.
PureState attach_register(const PureState& state, const PureState& reg);

// |<a|b>|^2.
double fidelity(const PureState& a, const PureState& b);

/// Drops a particle that is already in a Z eigenstate (e.g. right after
/// measure_z), returning the state of the remaining particles in order.
PureState remove_particle(const PureState& state, std::size_t target);

// Basis indices whose probability exceeds `tolerance`.
std::vector<std::size_t> support(const PureState& state, double tolerance = kTolerance);

}  // namespace mqss
