#include "mqss/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mqss/error.hpp"

namespace mqss {

namespace {

void require_particle(const PureState& state, std::size_t target) {
  if (target < 1 || target > state.qubit_count()) {
    throw ContractViolation("particle index " + std::to_string(target) + " outside 1.." +
                            std::to_string(state.qubit_count()));
  }
}

double norm_squared(std::span<const Amplitude> amps) {
  double total = 0.0;
  for (const auto& a : amps) total += std::norm(a);
  return total;
}

}  // namespace

SingleQubitGate::SingleQubitGate(Amplitude u00, Amplitude u01, Amplitude u10, Amplitude u11)
    : m_{u00, u01, u10, u11} {
  for (std::size_t r = 0; r < 2; ++r) {
    for (std::size_t c = 0; c < 2; ++c) {
      Amplitude dot = m_[r * 2] * std::conj(m_[c * 2]) + m_[r * 2 + 1] * std::conj(m_[c * 2 + 1]);
      const Amplitude expected = r == c ? 1.0 : 0.0;
      if (std::abs(dot - expected) > kTolerance) {
        throw ContractViolation("gate matrix is not unitary");
      }
    }
  }
}

SingleQubitGate SingleQubitGate::identity() { return {1.0, 0.0, 0.0, 1.0}; }

SingleQubitGate SingleQubitGate::hadamard() {
  const double s = 1.0 / std::sqrt(2.0);
  return {s, s, s, -s};
}

SingleQubitGate SingleQubitGate::pauli_x() { return {0.0, 1.0, 1.0, 0.0}; }

PureState::PureState(std::size_t qubit_count, std::vector<Amplitude> amplitudes)
    : qubit_count_(qubit_count), amplitudes_(std::move(amplitudes)) {
  if (qubit_count_ < 1 || qubit_count_ > kMaxQubits) {
    throw ContractViolation("qubit count " + std::to_string(qubit_count_) + " outside 1.." +
                            std::to_string(kMaxQubits));
  }
  if (amplitudes_.size() != (std::size_t{1} << qubit_count_)) {
    throw ContractViolation("amplitude vector length does not match 2^qubit_count");
  }
  for (const auto& a : amplitudes_) {
    if (!std::isfinite(a.real()) || !std::isfinite(a.imag())) {
      throw ContractViolation("non-finite amplitude");
    }
  }
  if (std::abs(norm_squared(amplitudes_) - 1.0) > kTolerance) {
    throw ContractViolation("state is not normalized");
  }
}

std::size_t basis_index(std::span<const std::uint8_t> bits) {
  std::size_t index = 0;
  for (auto b : bits) {
    if (b > 1) throw ContractViolation("bit value must be 0 or 1");
    index = (index << 1) | b;
  }
  return index;
}

BitVector index_bits(std::size_t index, std::size_t qubit_count) {
  BitVector bits(qubit_count);
  for (std::size_t p = 0; p < qubit_count; ++p) {
    bits[p] = static_cast<std::uint8_t>((index >> (qubit_count - 1 - p)) & 1U);
  }
  return bits;
}

std::size_t particle_mask(std::size_t qubit_count, std::size_t particle) {
  return std::size_t{1} << (qubit_count - particle);
}

PureState basis_state(std::size_t qubit_count, std::span<const std::uint8_t> bits) {
  if (bits.size() != qubit_count) {
    throw ContractViolation("basis_state: bit-vector length " + std::to_string(bits.size()) +
                            " != qubit count " + std::to_string(qubit_count));
  }
  if (qubit_count < 1 || qubit_count > kMaxQubits) {
    throw ContractViolation("basis_state: qubit count out of range");
  }
  std::vector<Amplitude> amps(std::size_t{1} << qubit_count);
  amps[basis_index(bits)] = 1.0;
  return PureState(qubit_count, std::move(amps));
}

PureState superpose(std::span<const WeightedState> terms) {
  if (terms.empty()) throw DegenerateSuperposition("superpose: no terms");
  const std::size_t q = terms.front().state.qubit_count();
  std::vector<Amplitude> amps(std::size_t{1} << q);
  for (const auto& term : terms) {
    if (term.state.qubit_count() != q) {
      throw ContractViolation("superpose: states have different qubit counts");
    }
    const auto src = term.state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) amps[i] += term.weight * src[i];
  }
  const double norm = std::sqrt(norm_squared(amps));
  if (norm < kTolerance) throw DegenerateSuperposition("superpose: combination has zero norm");
  for (auto& a : amps) a /= norm;
  return PureState(q, std::move(amps));
}

PureState apply_gate(const PureState& state, std::size_t target, const SingleQubitGate& gate) {
  require_particle(state, target);
  const std::size_t mask = particle_mask(state.qubit_count(), target);
  const auto src = state.amplitudes();
  std::vector<Amplitude> out(src.size());
  for (std::size_t i0 = 0; i0 < src.size(); ++i0) {
    if (i0 & mask) continue;
    const std::size_t i1 = i0 | mask;
    out[i0] = gate(0, 0) * src[i0] + gate(0, 1) * src[i1];
    out[i1] = gate(1, 0) * src[i0] + gate(1, 1) * src[i1];
  }
  return PureState(state.qubit_count(), std::move(out));
}

double outcome_probability(const PureState& state, std::size_t target, std::uint8_t outcome) {
  require_particle(state, target);
  const std::size_t mask = particle_mask(state.qubit_count(), target);
  const std::size_t want = outcome ? mask : 0;
  const auto amps = state.amplitudes();
  double p = 0.0;
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if ((i & mask) == want) p += std::norm(amps[i]);
  }
  return p;
}

Measurement measure_z(const PureState& state, std::size_t target, Rng& rng) {
  const double p0 = outcome_probability(state, target, 0);
  const std::uint8_t outcome = rng.uniform() < p0 ? 0 : 1;
  const double p = outcome == 0 ? p0 : 1.0 - p0;

  const std::size_t mask = particle_mask(state.qubit_count(), target);
  const std::size_t want = outcome ? mask : 0;
  const auto src = state.amplitudes();
  const double scale = 1.0 / std::sqrt(p);
  std::vector<Amplitude> out(src.size());
  for (std::size_t i = 0; i < src.size(); ++i) {
    if ((i & mask) == want) out[i] = src[i] * scale;
  }
  return {outcome, PureState(state.qubit_count(), std::move(out)), p};
}

JointMeasurement measure_all(const PureState& state, Rng& rng) {
  JointMeasurement result{BitVector(state.qubit_count()), 1.0};
  PureState current = state;
  for (std::size_t p = 1; p <= state.qubit_count(); ++p) {
    auto m = measure_z(current, p, rng);
    result.outcomes[p - 1] = m.outcome;
    result.probability *= m.probability;
    current = std::move(m.collapsed);
  }
  return result;
}

PureState attach_register(const PureState& state, const PureState& reg) {
  const std::size_t q = state.qubit_count() + reg.qubit_count();
  if (q > kMaxQubits) throw ContractViolation("attach_register: too many qubits");
  const auto a = state.amplitudes();
  const auto b = reg.amplitudes();
  std::vector<Amplitude> out;
  out.reserve(a.size() * b.size());
  for (const auto& x : a) {
    for (const auto& y : b) out.push_back(x * y);
  }
  return PureState(q, std::move(out));
}

double fidelity(const PureState& a, const PureState& b) {
  if (a.qubit_count() != b.qubit_count()) {
    throw ContractViolation("fidelity: qubit counts differ");
  }
  Amplitude overlap = 0.0;
  const auto x = a.amplitudes();
  const auto y = b.amplitudes();
  for (std::size_t i = 0; i < x.size(); ++i) overlap += std::conj(x[i]) * y[i];
  return std::min(1.0, std::norm(overlap));
}

PureState remove_particle(const PureState& state, std::size_t target) {
  require_particle(state, target);
  if (state.qubit_count() < 2) throw ContractViolation("remove_particle: nothing would remain");
  const double p0 = outcome_probability(state, target, 0);
  std::uint8_t value;
  if (p0 > 1.0 - kTolerance) {
    value = 0;
  } else if (p0 < kTolerance) {
    value = 1;
  } else {
    throw ContractViolation("remove_particle: particle is not in a Z eigenstate");
  }

  const std::size_t q = state.qubit_count();
  const std::size_t low_bits = q - target;  // bits belonging to particles after target
  const std::size_t low_mask = (std::size_t{1} << low_bits) - 1;
  const auto src = state.amplitudes();
  std::vector<Amplitude> out(src.size() / 2);
  for (std::size_t j = 0; j < out.size(); ++j) {
    const std::size_t high = (j >> low_bits) << (low_bits + 1);
    const std::size_t i = high | (std::size_t{value} << low_bits) | (j & low_mask);
    out[j] = src[i];
  }
  return PureState(q - 1, std::move(out));
}

std::vector<std::size_t> support(const PureState& state, double tolerance) {
  std::vector<std::size_t> out;
  const auto amps = state.amplitudes();
  for (std::size_t i = 0; i < amps.size(); ++i) {
    if (std::norm(amps[i]) > tolerance) out.push_back(i);
  }
  return out;
}

}  // namespace mqss
