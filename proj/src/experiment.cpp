#include "mqss/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "mqss/error.hpp"
#include "mqss/transcript.hpp"

namespace mqss {

namespace {

constexpr std::array kClassifications = {Classification::Case1, Classification::Case2,
                                         Classification::Case3, Classification::Discard};

const char* to_string(ReportKind r) {
  switch (r) {
    case ReportKind::Full: return "full";
    case ReportKind::Cases: return "cases";
    case ReportKind::Json: return "json";
  }
  return "?";
}

}  // namespace

const char* to_string(AttackKind a) {
  switch (a) {
    case AttackKind::None: return "none";
    case AttackKind::MeasureResend: return "measure-resend";
    case AttackKind::Collective: return "collective";
    case AttackKind::Collusion: return "collusion";
  }
  return "?";
}

std::size_t ExperimentConfig::victim_or_default() const {
  return victim.value_or(session.n_agents);
}

std::vector<std::size_t> ExperimentConfig::colluders_or_default() const {
  if (!colluders.empty()) return colluders;
  std::vector<std::size_t> out;
  const auto v = victim_or_default();
  for (std::size_t a = 1; a <= session.n_agents; ++a) {
    if (a != v) out.push_back(a);
  }
  return out;
}

SessionConfig ExperimentConfig::build_session() const {
  SessionConfig s = session;
  const auto v = victim_or_default();
  switch (attack) {
    case AttackKind::None:
      s.attack.reset();
      break;
    case AttackKind::MeasureResend:
      s.attack = MeasureResendConfig{v};
      break;
    case AttackKind::Collective:
      s.attack = CollectiveAttackConfig{probe_overlap};
      break;
    case AttackKind::Collusion: {
      CollusionConfig c;
      c.colluders = colluders_or_default();
      c.inner_attack = MeasureResendConfig{v};
      s.attack = c;
      break;
    }
  }
  if (victim && (*victim < 1 || *victim > s.n_agents)) {
    throw ContractViolation("victim must be an agent in 1.." + std::to_string(s.n_agents));
  }
  s.validate();
  return s;
}

ParseOutcome parse_config(int argc, const char* const* argv) {
  ExperimentConfig cfg;
  std::string attack = "none";
  std::string report = "full";
  std::optional<std::size_t> victim;
  std::optional<std::string> transcript;
  std::optional<std::size_t> rounds_only;
  std::optional<double> abort_threshold;

  CLI::App app{"Monte-Carlo runner for mediated GHZ secret sharing", "mqss"};
  app.option_defaults()->always_capture_default();
  app.add_option("--agents", cfg.session.n_agents, "number of agents n")
      ->check(CLI::Range(std::size_t{2}, kMaxQubits - 2));
  app.add_option("--secret-bits", cfg.session.m, "secret length m")
      ->check(CLI::PositiveNumber);
  app.add_option("--epsilon", cfg.session.epsilon, "bit-flip probability per transmitted qubit")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--abort-threshold", abort_threshold,
                 "fixed abort threshold for Steps 5 and 6 (default epsilon + 3 sigma)")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--seed", cfg.session.seed, "master seed")->envname("MQSS_SEED");
  app.add_option("--trials", cfg.trials, "number of sessions")->check(CLI::PositiveNumber);
  app.add_option("--attack", attack, "adversary model")
      ->check(CLI::IsMember({"none", "measure-resend", "collective", "collusion"}));
  app.add_option("--victim", victim, "attacked agent (default: agent n)");
  app.add_option("--colluders", cfg.colluders, "comma-separated dishonest agents")
      ->delimiter(',');
  app.add_option("--probe-overlap", cfg.probe_overlap, "collective-attack probe overlap")
      ->check(CLI::Range(0.0, 1.0));
  app.add_option("--transcript", transcript, "write per-round records to this file");
  app.add_option("--rounds-only", rounds_only, "run N bare rounds, no key handling")
      ->check(CLI::PositiveNumber);
  app.add_option("--report", report, "report format")
      ->check(CLI::IsMember({"full", "cases", "json"}));
  app.set_config("--config", "", "flat key = value file; flags take precedence");

  std::ostringstream out;
  std::ostringstream err;
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    app.exit(e, out, err);
    return {std::nullopt, 0, out.str() + err.str()};
  } catch (const CLI::CallForAllHelp& e) {
    app.exit(e, out, err);
    return {std::nullopt, 0, out.str() + err.str()};
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return {std::nullopt, 2, out.str() + err.str()};
  }

  if (attack == "measure-resend") cfg.attack = AttackKind::MeasureResend;
  if (attack == "collective") cfg.attack = AttackKind::Collective;
  if (attack == "collusion") cfg.attack = AttackKind::Collusion;
  if (report == "cases") cfg.report = ReportKind::Cases;
  if (report == "json") cfg.report = ReportKind::Json;
  cfg.victim = victim;
  cfg.transcript_path = transcript;
  cfg.rounds_only = rounds_only;
  cfg.session.abort_threshold = abort_threshold;
  cfg.session.keep_rounds = transcript.has_value();

  try {
    if (cfg.attack == AttackKind::Collusion && !rounds_only && cfg.trials < 1000) {
      throw ContractViolation("collusion experiments need --trials >= 1000");
    }
    (void)cfg.build_session();
  } catch (const ContractViolation& e) {
    return {std::nullopt, 2, std::string("error: ") + e.what() + "\nRun with --help for more information.\n"};
  }
  return {cfg, 0, {}};
}

double Proportion::rate() const {
  return samples ? static_cast<double>(hits) / static_cast<double>(samples) : 0.0;
}

double Proportion::sigma() const {
  if (!samples) return 0.0;
  const double p = rate();
  return std::sqrt(p * (1.0 - p) / static_cast<double>(samples));
}

Proportion RunReport::case_frequency(Classification c) const {
  return {case_counts[static_cast<std::size_t>(c)], rounds};
}

double RunReport::raw_bits_per_round() const {
  return rounds ? static_cast<double>(raw_bits) / static_cast<double>(rounds) : 0.0;
}

int RunReport::exit_code() const {
  if (config.rounds_only || config.attack == AttackKind::Collusion) return 0;
  return failed_sessions() ? 1 : 0;
}

RunReport run_experiment(const ExperimentConfig& config, std::ostream* transcript) {
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.config = config;
  SessionConfig session = config.build_session();
  session.keep_rounds = transcript != nullptr;

  auto tally = [&](const RoundRecord& r) {
    ++report.rounds;
    ++report.case_counts[static_cast<std::size_t>(r.classification)];
  };

  if (config.rounds_only) {
    Rng rng(session.seed);
    for (const auto& r : run_rounds(session, *config.rounds_only, rng)) {
      tally(r);
      if (transcript) *transcript << to_transcript_line({0, 0, r}) << '\n';
    }
  } else {
    if (config.attack == AttackKind::Collusion) {
      session.max_attempts = 1;
      report.collusion.emplace();
    }
    for (std::size_t trial = 0; trial < config.trials; ++trial) {
      SessionConfig s = session;
      s.seed = derive_seed(session.seed, trial);
      ++report.sessions;
      SessionOutcome outcome;
      try {
        outcome = run_session(s);
      } catch (const MoreRoundsNeeded&) {
        ++report.out_of_rounds;
        continue;
      }
      if (transcript) {
        for (std::size_t a = 0; a < outcome.attempt_rounds.size(); ++a) {
          for (const auto& r : outcome.attempt_rounds[a]) {
            *transcript << to_transcript_line({trial, a, r}) << '\n';
          }
        }
      }
      const auto& st = outcome.stats;
      report.rounds += st.rounds;
      for (std::size_t c = 0; c < 4; ++c) report.case_counts[c] += st.case_counts[c];
      report.step5.hits += st.step5.mismatched_qubits;
      report.step5.samples += st.step5.checked_qubits;
      report.step6.hits += st.step6_failures;
      report.step6.samples += st.step6_checked;
      report.raw_bits += st.case_counts[static_cast<std::size_t>(Classification::Case1)];
      switch (outcome.verdict) {
        case Verdict::Completed: ++report.completed; break;
        case Verdict::AbortedStep5: ++report.aborted_step5; break;
        case Verdict::AbortedStep6: ++report.aborted_step6; break;
      }
      if (outcome.completed() && outcome.shared.reconstructed == outcome.secret) {
        ++report.reconstruction_matches;
      }
      if (report.collusion) report.collusion->add(outcome);
    }
    if (report.collusion) report.collusion->finish();
  }

  if (config.attack == AttackKind::Collective) {
    Rng rng(derive_seed(session.seed, ~std::uint64_t{0}));
    const auto& attack = std::get<CollectiveAttackConfig>(*session.attack);
    report.leakage = estimate_leakage(attack, session, std::max<std::size_t>(1000, config.trials),
                                      rng, config.victim_or_default());
  }

  report.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

namespace {

std::string interval(const Proportion& p) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(6) << p.rate() << " +/- " << 3.0 * p.sigma() << " (n="
    << p.samples << ")";
  return s.str();
}

nlohmann::ordered_json proportion_json(const Proportion& p) {
  return {{"hits", p.hits}, {"samples", p.samples}, {"rate", p.rate()},
          {"three_sigma", 3.0 * p.sigma()}};
}

void print_json(std::ostream& out, const RunReport& r) {
  using json = nlohmann::ordered_json;
  const auto& c = r.config;
  json j;
  j["config"] = {{"agents", c.session.n_agents},
                 {"secret_bits", c.session.m},
                 {"epsilon", c.session.epsilon},
                 {"seed", c.session.seed},
                 {"trials", c.trials},
                 {"attack", to_string(c.attack)},
                 {"victim", c.victim_or_default()},
                 {"colluders", c.colluders_or_default()},
                 {"probe_overlap", c.probe_overlap},
                 {"rounds_only", c.rounds_only ? json(*c.rounds_only) : json(nullptr)},
                 {"report", to_string(c.report)}};
  j["sessions"] = {{"total", r.sessions},
                   {"completed", r.completed},
                   {"aborted_step5", r.aborted_step5},
                   {"aborted_step6", r.aborted_step6},
                   {"out_of_rounds", r.out_of_rounds},
                   {"reconstruction_matches", r.reconstruction_matches}};
  j["rounds"] = r.rounds;
  json cases = json::object();
  for (auto cl : kClassifications) cases[to_string(cl)] = proportion_json(r.case_frequency(cl));
  j["cases"] = cases;
  j["step5_error"] = proportion_json(r.step5);
  j["step6_error"] = proportion_json(r.step6);
  j["raw_bits_per_round"] = r.raw_bits_per_round();
  if (r.leakage) {
    j["leakage"] = {{"mutual_information", r.leakage->mutual_information},
                    {"branch_information", r.leakage->branch_information},
                    {"detection_rate", r.leakage->detection_rate},
                    {"case1_samples", r.leakage->sample_count},
                    {"case2_samples", r.leakage->branch_sample_count}};
  }
  if (r.collusion) {
    const auto& k = *r.collusion;
    j["collusion"] = {{"sessions", k.sessions},
                      {"aborted_sessions", k.aborted_sessions},
                      {"step5_aborts", k.step5_aborts},
                      {"step6_aborts", k.step6_aborts},
                      {"check_bits", k.check_bits},
                      {"failed_check_bits", k.failed_check_bits},
                      {"abort_rate", k.detection_rate_overall},
                      {"per_bit_rate", k.per_bit_rate}};
  }
  j["duration_seconds"] = r.duration_seconds;
  out << j.dump(2) << '\n';
}

void print_cases(std::ostream& out, const RunReport& r) {
  out << "rounds " << r.rounds << '\n';
  for (auto cl : kClassifications) {
    out << std::left << std::setw(8) << to_string(cl) << ' ' << r.case_counts[static_cast<std::size_t>(cl)]
        << ' ' << interval(r.case_frequency(cl)) << '\n';
  }
}

}  // namespace

void print_report(std::ostream& out, const RunReport& r) {
  if (r.config.report == ReportKind::Json) return print_json(out, r);
  if (r.config.report == ReportKind::Cases) return print_cases(out, r);

  const auto& c = r.config;
  out << "config: agents=" << c.session.n_agents << " secret_bits=" << c.session.m
      << " epsilon=" << c.session.epsilon << " seed=" << c.session.seed << " trials=" << c.trials
      << " attack=" << to_string(c.attack);
  if (c.attack == AttackKind::MeasureResend || c.attack == AttackKind::Collusion) {
    out << " victim=" << c.victim_or_default();
  }
  if (c.attack == AttackKind::Collusion) {
    out << " colluders=";
    const auto col = c.colluders_or_default();
    for (std::size_t i = 0; i < col.size(); ++i) out << (i ? "," : "") << col[i];
  }
  if (c.attack == AttackKind::Collective) out << " probe_overlap=" << c.probe_overlap;
  if (c.rounds_only) out << " rounds_only=" << *c.rounds_only;
  out << '\n';

  if (!c.rounds_only) {
    out << "sessions: " << r.sessions << " completed=" << r.completed
        << " aborted_step5=" << r.aborted_step5 << " aborted_step6=" << r.aborted_step6
        << " out_of_rounds=" << r.out_of_rounds << '\n';
    out << "reconstruction match: " << interval({r.reconstruction_matches, r.sessions}) << '\n';
  }
  out << "cases:\n";
  print_cases(out, r);
  if (!c.rounds_only) {
    out << "step5 error rate: " << interval(r.step5) << '\n';
    out << "step6 error rate: " << interval(r.step6) << '\n';
    out << "raw bits per round: " << r.raw_bits_per_round() << '\n';
  }
  if (r.leakage) {
    const auto& l = *r.leakage;
    out << "leakage: mutual_information=" << l.mutual_information
        << " branch_information=" << l.branch_information
        << " detection=" << interval({static_cast<std::size_t>(std::llround(l.detection_rate *
                                                                            l.sample_count)),
                                      l.sample_count})
        << '\n';
  }
  if (r.collusion) {
    const auto& k = *r.collusion;
    out << "collusion: abort rate " << interval({k.aborted_sessions, k.sessions})
        << " step5=" << k.step5_aborts << " step6=" << k.step6_aborts << '\n';
    out << "collusion: per check bit " << interval({k.failed_check_bits, k.check_bits}) << '\n';
  }
  out << "duration: " << std::fixed << std::setprecision(3) << r.duration_seconds << " s\n";
  out.unsetf(std::ios::floatfield);
}

}  // namespace mqss
