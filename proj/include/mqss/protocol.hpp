// The (n, n) mediated secret-sharing protocol: the third party (TP) sources GHZ
// states, the dealer and n agents each pick Check or Share per round, and the
// resulting records are sifted, checked and turned into XOR shadows.
//
// Participant order everywhere: index 0 is the dealer, index j is agent j.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "mqss/attack_config.hpp"
#include "mqss/channel.hpp"
#include "mqss/ghz.hpp"
#include "mqss/participant.hpp"
#include "mqss/rng.hpp"

namespace mqss {

enum class Classification { Case1, Case2, Case3, Discard };

struct RoundRecord {
  std::size_t round_index = 0;
  GhzSpec spec;
  std::vector<Mode> modes;                           // dealer, agent 1..n
  std::vector<std::optional<std::uint8_t>> results;  // same order
  std::optional<std::uint8_t> probe;                 // TP's probe readout, if attacked
  Classification classification = Classification::Discard;

  friend bool operator==(const RoundRecord&, const RoundRecord&) = default;
};

/// Abort threshold: a fixed override, or epsilon + 3 sqrt(epsilon (1 - epsilon) / N)
/// for N checked items (which is 0 when epsilon is 0, so any error aborts).
struct AbortRule {
  double epsilon = 0.0;
  std::optional<double> fixed;

  double threshold(std::size_t checked) const;
};

struct SessionConfig {
  std::size_t n_agents = 3;
  std::size_t m = 16;
  double epsilon = 0.0;
  std::optional<double> abort_threshold;
  std::uint64_t seed = 0;
  std::size_t rounds_per_batch = 0;  // 0 selects m * 2^(n+2)
  std::optional<AttackConfig> attack;
  std::optional<BitVector> secret;   // drawn from the session rng when absent
  std::size_t max_attempts = 3;
  std::size_t max_batches = 64;
  bool keep_rounds = true;

  std::size_t batch_size() const;
  std::size_t qubit_count() const { return n_agents + 1; }
  AbortRule abort_rule() const { return {epsilon, abort_threshold}; }
  void validate() const;
};

struct RawKeys {
  BitVector dealer;
  std::vector<BitVector> agents;  // agents[j - 1] belongs to agent j

  friend bool operator==(const RawKeys&, const RawKeys&) = default;
};

// Outcome of checking one Case 2 / Case 3 round.
struct RoundCheck {
  std::size_t checked_qubits = 0;
  std::size_t mismatched_qubits = 0;  // distance to the nearer of x, x-bar
  bool passed = true;
};

struct Step5Result {
  std::size_t checked_rounds = 0;
  std::size_t failed_rounds = 0;
  std::size_t checked_qubits = 0;
  std::size_t mismatched_qubits = 0;
  double error_rate = 0.0;  // mismatched_qubits / checked_qubits
  double threshold = 0.0;
  bool abort = false;
};

struct Step6Result {
  std::vector<std::size_t> positions;  // ascending raw-key positions sacrificed
  std::size_t failures = 0;
  double error_rate = 0.0;
  double threshold = 0.0;
  bool abort = false;
  RawKeys remaining;
};

struct SharedSecret {
  BitVector sk_dealer;
  std::vector<BitVector> sk_agents;
  BitVector ciphertext;
  BitVector reconstructed;
};

enum class Verdict { Completed, AbortedStep5, AbortedStep6 };

struct SessionStats {
  std::array<std::size_t, 4> case_counts{};  // indexed by Classification
  std::size_t rounds = 0;
  std::size_t batches = 0;
  Step5Result step5;
  std::size_t step6_checked = 0;
  std::size_t step6_failures = 0;
  double step6_error_rate = 0.0;
};

struct SessionOutcome {
  Verdict verdict = Verdict::Completed;
  std::vector<Verdict> attempt_verdicts;
  BitVector secret;
  RawKeys raw_keys;  // after sifting, before Step 6
  SharedSecret shared;
  SessionStats stats;  // of the final attempt
  std::vector<std::vector<RoundRecord>> attempt_rounds;
  ClassicalLog log;  // of the final attempt

  bool completed() const { return verdict == Verdict::Completed; }
};

// Per-participant links built from the config (noise plus any interceptor).
std::vector<QubitChannel> make_channels(const SessionConfig& config);

// The state TP hands out: honest GHZ, or the collective-attack substitute
// with a probe qubit appended.
PureState source_state(const SessionConfig& config, const GhzSpec& spec);

/// Steps 1-4 for one GHZ state. `forced_modes`, when given, replaces the
/// random mode choices (dealer first).
RoundRecord run_round(const SessionConfig& config, std::size_t round_index, const GhzSpec& spec,
                      Rng& rng, std::span<const QubitChannel> channels, ClassicalLog* log = nullptr,
                      const std::optional<std::vector<Mode>>& forced_modes = std::nullopt);

Classification classify_round(std::span<const Mode> modes);

RoundCheck check_round(const RoundRecord& record, const GhzSpec& spec);
bool check_case2(const RoundRecord& record, const GhzSpec& spec);
bool check_case3(const RoundRecord& record, const GhzSpec& spec);

// Case 1 raw key bits; the dealer's bit is mr_A XOR b of the announced spec.
RawKeys sift(std::span<const RoundRecord> records, std::span<const GhzSpec> announced_specs);

Step5Result verify_step5(std::span<const RoundRecord> records,
                         std::span<const GhzSpec> announced_specs, const AbortRule& rule);

Step6Result verify_step6(const RawKeys& raw_keys, std::size_t m, Rng& rng, const AbortRule& rule);

SharedSecret finalize_and_share(const RawKeys& raw_keys_after_check, std::size_t m,
                                std::span<const std::uint8_t> secret);

SessionOutcome run_session(const SessionConfig& config);

// Statistics mode: `count` rounds with random specs and modes, no key handling.
std::vector<RoundRecord> run_rounds(const SessionConfig& config, std::size_t count, Rng& rng);

const char* to_string(Classification c);
const char* to_string(Verdict v);
const char* to_string(Mode m);

}  // namespace mqss
