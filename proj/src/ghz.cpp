#include "mqss/ghz.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "mqss/error.hpp"

namespace mqss {

namespace {

std::uint8_t parity_of(std::size_t value) {
  return static_cast<std::uint8_t>(std::popcount(value) & 1);
}

double sign(unsigned exponent) { return (exponent & 1U) ? -1.0 : 1.0; }

}  // namespace

void validate(const GhzSpec& spec) {
  if (spec.qubit_count() < 2) throw ContractViolation("GHZ spec needs at least 2 particles");
  if (spec.qubit_count() > kMaxQubits) throw ContractViolation("GHZ spec too large");
  if (spec.b > 1) throw ContractViolation("GHZ phase bit must be 0 or 1");
  for (auto v : spec.x) {
    if (v > 1) throw ContractViolation("GHZ pattern bits must be 0 or 1");
  }
}

BitVector complement(std::span<const std::uint8_t> bits) {
  BitVector out(bits.size());
  std::transform(bits.begin(), bits.end(), out.begin(),
                 [](std::uint8_t v) { return static_cast<std::uint8_t>(v ^ 1U); });
  return out;
}

GhzSpec random_spec(std::size_t qubit_count, Rng& rng) {
  GhzSpec spec;
  spec.x.resize(qubit_count);
  for (auto& v : spec.x) v = rng.bit();
  spec.b = rng.bit();
  return spec;
}

HadamardPattern HadamardPattern::from_h_positions(std::size_t qubit_count,
                                                  std::vector<std::size_t> h_positions) {
  std::sort(h_positions.begin(), h_positions.end());
  if (std::adjacent_find(h_positions.begin(), h_positions.end()) != h_positions.end()) {
    throw ContractViolation("HadamardPattern: duplicate position");
  }
  for (auto p : h_positions) {
    if (p < 1 || p > qubit_count) {
      throw ContractViolation("HadamardPattern: position " + std::to_string(p) + " out of range");
    }
  }
  HadamardPattern pattern;
  pattern.qubit_count_ = qubit_count;
  pattern.h_positions_ = std::move(h_positions);
  for (std::size_t p = 1; p <= qubit_count; ++p) {
    if (!std::binary_search(pattern.h_positions_.begin(), pattern.h_positions_.end(), p)) {
      pattern.i_positions_.push_back(p);
    }
  }
  return pattern;
}

std::vector<DecompositionTerm> decompose_partial_hadamard(const GhzSpec& spec,
                                                          const HadamardPattern& pattern) {
  validate(spec);
  if (pattern.qubit_count() != spec.qubit_count()) {
    throw ContractViolation("pattern and spec disagree on particle count");
  }
  const auto& hp = pattern.h_positions();
  const auto& ip = pattern.i_positions();
  if (hp.empty() || ip.empty()) {
    throw ContractViolation(
        "partial Hadamard needs 1..q-1 H positions; use prepare or predict_full_hadamard");
  }
  const std::size_t m = hp.size();
  const std::size_t r = ip.size();

  std::size_t identity_value = 0;
  for (auto p : ip) identity_value = (identity_value << 1) | spec.x[p - 1];
  // When x_I starts with 1 the expansion is written around complement(x_I),
  // which swaps x for its complement on the H positions as well.
  const bool flipped = identity_value >= (std::size_t{1} << (r - 1));

  std::vector<DecompositionTerm> terms;
  terms.reserve(std::size_t{1} << m);
  for (std::size_t k = 0; k < (std::size_t{1} << m); ++k) {
    DecompositionTerm term{k, index_bits(k, m), 0, parity_of(k), identity_value};
    unsigned delta = 0;
    for (std::size_t i = 0; i < m; ++i) {
      const std::uint8_t xh = spec.x[hp[i] - 1];
      delta += term.k_bits[i] * (flipped ? (xh ^ 1U) : xh);
    }
    term.sign_bit = static_cast<std::uint8_t>(delta & 1U);
    terms.push_back(std::move(term));
  }
  return terms;
}

PureState prepare(const GhzSpec& spec) {
  validate(spec);
  const std::size_t q = spec.qubit_count();
  std::vector<Amplitude> amps(std::size_t{1} << q);
  const double s = 1.0 / std::sqrt(2.0);
  const std::size_t idx = basis_index(spec.x);
  const std::size_t cidx = (amps.size() - 1) ^ idx;
  amps[idx] = s;
  amps[cidx] = sign(spec.b) * s;
  return PureState(q, std::move(amps));
}

PureState predict_full_hadamard(const GhzSpec& spec) {
  validate(spec);
  const std::size_t q = spec.qubit_count();
  const std::size_t dim = std::size_t{1} << q;
  const std::size_t x = basis_index(spec.x);
  const double magnitude = 1.0 / std::sqrt(static_cast<double>(dim / 2));
  std::vector<Amplitude> amps(dim);
  for (std::size_t k = 0; k < dim; ++k) {
    if (parity_of(k) != spec.b) continue;
    // delta = sum_i k_i x_i
    amps[k] = sign(static_cast<unsigned>(std::popcount(k & x))) * magnitude;
  }
  return PureState(q, std::move(amps));
}

PureState predict_partial_hadamard(const GhzSpec& spec, const HadamardPattern& pattern) {
  const auto terms = decompose_partial_hadamard(spec, pattern);
  const auto& hp = pattern.h_positions();
  const auto& ip = pattern.i_positions();
  const std::size_t q = spec.qubit_count();

  BitVector lo(ip.size());
  for (std::size_t j = 0; j < ip.size(); ++j) lo[j] = spec.x[ip[j] - 1];
  if (lo.front() == 1) lo = complement(lo);
  const BitVector hi = complement(lo);

  const double scale =
      1.0 / std::sqrt(static_cast<double>(terms.size())) / std::sqrt(2.0);
  std::vector<Amplitude> amps(std::size_t{1} << q);
  BitVector bits(q);
  for (const auto& term : terms) {
    for (std::size_t i = 0; i < hp.size(); ++i) bits[hp[i] - 1] = term.k_bits[i];
    for (std::size_t j = 0; j < ip.size(); ++j) bits[ip[j] - 1] = lo[j];
    amps[basis_index(bits)] += sign(term.sign_bit) * scale;
    for (std::size_t j = 0; j < ip.size(); ++j) bits[ip[j] - 1] = hi[j];
    amps[basis_index(bits)] += sign(term.sign_bit + term.weight_parity + spec.b) * scale;
  }
  return PureState(q, std::move(amps));
}

std::uint8_t parity_oracle(const GhzSpec& spec) {
  validate(spec);
  return spec.b;
}

GhzSpec residual_phase(const GhzSpec& spec, std::size_t measured_position, std::uint8_t outcome) {
  validate(spec);
  if (spec.qubit_count() < 3) {
    throw ContractViolation("residual_phase: q < 3 leaves no entangled remainder");
  }
  if (measured_position < 1 || measured_position > spec.qubit_count()) {
    throw ContractViolation("residual_phase: position out of range");
  }
  if (outcome > 1) throw ContractViolation("residual_phase: outcome must be 0 or 1");
  GhzSpec rest;
  rest.x = spec.x;
  rest.x.erase(rest.x.begin() + static_cast<std::ptrdiff_t>(measured_position - 1));
  rest.b = static_cast<std::uint8_t>(spec.b ^ outcome);
  return rest;
}

}  // namespace mqss
