// Batch experiments behind the mqss command-line tool: option parsing,
// Monte-Carlo trial loops, aggregated reports and transcript output.

#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mqss/adversary.hpp"
#include "mqss/protocol.hpp"

namespace mqss {

enum class AttackKind { None, MeasureResend, Collective, Collusion };
enum class ReportKind { Full, Cases, Json };

struct ExperimentConfig {
  SessionConfig session;  // attack is filled in by build_session()
  std::size_t trials = 1;
  AttackKind attack = AttackKind::None;
  std::optional<std::size_t> victim;      // defaults to agent n
  std::vector<std::size_t> colluders;     // defaults to every agent but the victim
  double probe_overlap = 1.0;
  std::optional<std::string> transcript_path;
  std::optional<std::size_t> rounds_only;
  ReportKind report = ReportKind::Full;

  std::size_t victim_or_default() const;
  std::vector<std::size_t> colluders_or_default() const;
  // Session parameters with the selected attack attached; validates.
  SessionConfig build_session() const;
};

struct ParseOutcome {
  std::optional<ExperimentConfig> config;  // empty when the program should exit
  int exit_code = 0;
  std::string output;                      // help text or usage error
};

ParseOutcome parse_config(int argc, const char* const* argv);

struct Proportion {
  std::size_t hits = 0;
  std::size_t samples = 0;

  double rate() const;
  double sigma() const;  // binomial standard error of rate()
};

struct RunReport {
  ExperimentConfig config;
  std::size_t sessions = 0;
  std::size_t completed = 0;
  std::size_t aborted_step5 = 0;
  std::size_t aborted_step6 = 0;
  std::size_t out_of_rounds = 0;  // gave up for lack of Case 1 rounds
  std::size_t reconstruction_matches = 0;
  std::size_t rounds = 0;
  std::array<std::size_t, 4> case_counts{};
  Proportion step5;  // mismatched / checked qubits
  Proportion step6;  // failed / checked bits
  std::size_t raw_bits = 0;
  std::optional<LeakageEstimate> leakage;
  std::optional<CollusionResult> collusion;
  double duration_seconds = 0.0;

  std::size_t failed_sessions() const { return sessions - completed; }
  Proportion case_frequency(Classification c) const;
  double raw_bits_per_round() const;
  int exit_code() const;
};

// `transcript`, when non-null, receives one line per round in trial order.
RunReport run_experiment(const ExperimentConfig& config, std::ostream* transcript = nullptr);

void print_report(std::ostream& out, const RunReport& report);

const char* to_string(AttackKind a);

}  // namespace mqss
