// Attacks by a dishonest third party: the collective attack with a probe
// qubit, measure-resend interception, and collusion with some agents. Each
// comes with an estimator that turns simulated sessions into detection and
// leakage statistics.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>

#include "mqss/attack_config.hpp"
#include "mqss/channel.hpp"
#include "mqss/ghz.hpp"
#include "mqss/protocol.hpp"
#include "mqss/rng.hpp"

namespace mqss {

struct LeakageEstimate {
  // Bits, between TP's probe readout and the victim's sifted (Case 1) key bit.
  double mutual_information = 0.0;
  // Bits, between the probe readout and which branch (x or x-bar) the victim's
  // Case 2 result fell on, given that TP knows x.
  double branch_information = 0.0;
  // Fraction of Case 1 rounds whose parity check fails.
  double detection_rate = 0.0;
  std::size_t sample_count = 0;         // Case 1 rounds
  std::size_t branch_sample_count = 0;  // Case 2 rounds
};

struct CollusionResult {
  std::size_t sessions = 0;
  std::size_t aborted_sessions = 0;
  std::size_t step5_aborts = 0;
  std::size_t step6_aborts = 0;
  std::size_t check_bits = 0;
  std::size_t failed_check_bits = 0;
  double detection_rate_overall = 0.0;  // aborted_sessions / sessions
  double per_bit_rate = 0.0;            // failed_check_bits / check_bits

  // Accumulate one single-attempt session; call finish() to refresh the rates.
  void add(const SessionOutcome& outcome);
  void finish();
};

// Plug-in mutual information (bits) of a 2x2 contingency table with add-one
// smoothing. counts[a][b] counts joint occurrences of (a, b).
double plug_in_mutual_information(const std::array<std::array<std::size_t, 2>, 2>& counts);

PureState prepare_attacked_state(const GhzSpec& spec, const CollectiveAttackConfig& config);

// Z-measures the probe (the particle after the first `system_qubits`).
std::uint8_t probe_readout(const PureState& post_round_state, std::size_t system_qubits, Rng& rng);

Interceptor measure_resend_interceptor(const MeasureResendConfig& config);

/// Runs attacked rounds (natural mode choices) until at least `trials` Case 1
/// and `trials` Case 2 rounds have been seen. `params` supplies n and epsilon;
/// its own attack field is ignored. Requires trials >= 1000.
LeakageEstimate estimate_leakage(const CollectiveAttackConfig& config, const SessionConfig& params,
                                 std::size_t trials, Rng& rng, std::size_t victim = 1);

// Aggregates single-attempt sessions into detection statistics.
CollusionResult summarize_collusion(std::span<const SessionOutcome> outcomes);

/// Runs `trials` single-attempt sessions under the coalition's inner attack
/// and reports how often Steps 5/6 catch it. Requires trials >= 1000.
CollusionResult run_collusion(const CollusionConfig& config, const SessionConfig& params,
                              std::size_t trials, Rng& rng);

}  // namespace mqss
