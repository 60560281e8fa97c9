#include "mqss/protocol.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mqss/adversary.hpp"
#include "mqss/error.hpp"

namespace mqss {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

const CollectiveAttackConfig* collective_attack(const SessionConfig& config) {
  if (!config.attack) return nullptr;
  if (auto* c = std::get_if<CollectiveAttackConfig>(&*config.attack)) return c;
  if (auto* coalition = std::get_if<CollusionConfig>(&*config.attack)) {
    if (!coalition->inner_attack) return nullptr;
    return std::get_if<CollectiveAttackConfig>(&*coalition->inner_attack);
  }
  return nullptr;
}

const MeasureResendConfig* measure_resend_attack(const SessionConfig& config) {
  if (!config.attack) return nullptr;
  if (auto* c = std::get_if<MeasureResendConfig>(&*config.attack)) return c;
  if (auto* coalition = std::get_if<CollusionConfig>(&*config.attack)) {
    if (!coalition->inner_attack) return nullptr;
    return std::get_if<MeasureResendConfig>(&*coalition->inner_attack);
  }
  return nullptr;
}

std::vector<std::size_t> check_positions(const RoundRecord& record) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < record.modes.size(); ++i) {
    if (record.modes[i] == Mode::Check) out.push_back(i);
  }
  return out;
}

std::uint8_t result_at(const RoundRecord& record, std::size_t i) {
  if (i >= record.results.size() || !record.results[i]) {
    throw ContractViolation("round " + std::to_string(record.round_index) +
                            " is missing a measurement result");
  }
  return *record.results[i];
}

std::uint8_t xor_agents(const RawKeys& keys, std::size_t pos) {
  std::uint8_t v = 0;
  for (const auto& k : keys.agents) v ^= k[pos];
  return v;
}

}  // namespace

double AbortRule::threshold(std::size_t checked) const {
  if (fixed) return *fixed;
  if (checked == 0) return epsilon;
  return epsilon + 3.0 * std::sqrt(epsilon * (1.0 - epsilon) / static_cast<double>(checked));
}

std::size_t SessionConfig::batch_size() const {
  return rounds_per_batch ? rounds_per_batch : m << (n_agents + 2);
}

void SessionConfig::validate() const {
  if (n_agents < 2) throw ContractViolation("need at least 2 agents");
  if (n_agents + 2 > kMaxQubits) throw ContractViolation("too many agents for the simulator");
  if (m < 1) throw ContractViolation("secret length m must be at least 1");
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) throw ContractViolation("epsilon must lie in [0, 1]");
  if (abort_threshold && !(*abort_threshold >= 0.0 && *abort_threshold <= 1.0)) {
    throw ContractViolation("abort threshold must lie in [0, 1]");
  }
  if (max_attempts < 1) throw ContractViolation("max_attempts must be at least 1");
  if (secret && secret->size() != m) throw ContractViolation("secret must have exactly m bits");
  if (secret) {
    for (auto v : *secret) {
      if (v > 1) throw ContractViolation("secret bits must be 0 or 1");
    }
  }
  if (attack) {
    std::visit(overloaded{[&](const MeasureResendConfig& c) { c.validate(n_agents); },
                          [&](const CollectiveAttackConfig& c) { c.validate(); },
                          [&](const CollusionConfig& c) { c.validate(n_agents); }},
               *attack);
  }
}

std::vector<QubitChannel> make_channels(const SessionConfig& config) {
  std::vector<QubitChannel> channels;
  channels.reserve(config.n_agents + 1);
  const auto* mr = measure_resend_attack(config);
  for (std::size_t i = 0; i <= config.n_agents; ++i) {
    Interceptor hook;
    if (mr && i == mr->target) hook = measure_resend_interceptor(*mr);
    channels.emplace_back(config.epsilon, std::move(hook));
  }
  return channels;
}

PureState source_state(const SessionConfig& config, const GhzSpec& spec) {
  if (const auto* c = collective_attack(config)) return prepare_attacked_state(spec, *c);
  return prepare(spec);
}

RoundRecord run_round(const SessionConfig& config, std::size_t round_index, const GhzSpec& spec,
                      Rng& rng, std::span<const QubitChannel> channels, ClassicalLog* log,
                      const std::optional<std::vector<Mode>>& forced_modes) {
  const std::size_t parties = config.n_agents + 1;
  validate(spec);
  if (spec.qubit_count() != parties) {
    throw ContractViolation("run_round: spec must have n_agents + 1 particles");
  }
  if (channels.size() != parties) throw ContractViolation("run_round: need one channel per party");
  if (forced_modes && forced_modes->size() != parties) {
    throw ContractViolation("run_round: forced modes must cover dealer and all agents");
  }

  RoundRecord record;
  record.round_index = round_index;
  record.spec = spec;
  record.modes.resize(parties);
  record.results.resize(parties);

  const auto hadamard = SingleQubitGate::hadamard();
  auto choose_mode = [&](std::size_t i) {
    if (forced_modes) return (*forced_modes)[i];
    return rng.bit() ? Mode::Share : Mode::Check;
  };
  auto measure_party = [&](PureState& state, std::size_t i) {
    const std::size_t particle = i + 1;
    record.modes[i] = choose_mode(i);
    if (record.modes[i] == Mode::Share) state = apply_gate(state, particle, hadamard);
    auto m = measure_z(state, particle, rng);
    record.results[i] = m.outcome;
    state = std::move(m.collapsed);
  };

  // Step 1: TP keeps particles 2..n+1 in memory while particle 1 travels.
  PureState state = source_state(config, spec);
  state = transmit(channels[0], state, 1, rng);
  // Step 2
  measure_party(state, 0);
  if (log) broadcast(*log, ParticipantId::dealer(), message::Ack{});
  // Steps 3-4
  for (std::size_t j = 1; j < parties; ++j) state = transmit(channels[j], state, j + 1, rng);
  for (std::size_t j = 1; j < parties; ++j) measure_party(state, j);

  if (state.qubit_count() > parties) record.probe = probe_readout(state, parties, rng);
  record.classification = classify_round(record.modes);
  return record;
}

Classification classify_round(std::span<const Mode> modes) {
  const auto checks =
      static_cast<std::size_t>(std::count(modes.begin(), modes.end(), Mode::Check));
  if (checks == 0) return Classification::Case1;
  if (checks == modes.size()) return Classification::Case2;
  if (checks >= 2) return Classification::Case3;
  return Classification::Discard;
}

RoundCheck check_round(const RoundRecord& record, const GhzSpec& spec) {
  if (spec.qubit_count() != record.modes.size()) {
    throw ContractViolation("check_round: spec does not match the round's party count");
  }
  const auto positions = check_positions(record);
  if (positions.size() < 2) throw ContractViolation("check_round: fewer than two Check parties");
  std::size_t against_x = 0;
  for (auto i : positions) against_x += result_at(record, i) != spec.x[i];
  RoundCheck check;
  check.checked_qubits = positions.size();
  check.mismatched_qubits = std::min(against_x, positions.size() - against_x);
  check.passed = check.mismatched_qubits == 0;
  return check;
}

bool check_case2(const RoundRecord& record, const GhzSpec& spec) {
  if (record.classification != Classification::Case2) {
    throw ContractViolation("check_case2 on a round that is not Case 2");
  }
  return check_round(record, spec).passed;
}

bool check_case3(const RoundRecord& record, const GhzSpec& spec) {
  if (record.classification != Classification::Case3) {
    throw ContractViolation("check_case3 on a round that is not Case 3");
  }
  return check_round(record, spec).passed;
}

RawKeys sift(std::span<const RoundRecord> records, std::span<const GhzSpec> announced_specs) {
  if (announced_specs.size() < records.size()) {
    throw ContractViolation("sift: fewer announced specs than rounds");
  }
  RawKeys keys;
  if (!records.empty()) keys.agents.resize(records.front().modes.size() - 1);
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.classification != Classification::Case1) continue;
    keys.dealer.push_back(static_cast<std::uint8_t>(result_at(rec, 0) ^ announced_specs[r].b));
    for (std::size_t j = 1; j < rec.modes.size(); ++j) {
      keys.agents[j - 1].push_back(result_at(rec, j));
    }
  }
  return keys;
}

Step5Result verify_step5(std::span<const RoundRecord> records,
                         std::span<const GhzSpec> announced_specs, const AbortRule& rule) {
  if (announced_specs.size() < records.size()) {
    throw ContractViolation("verify_step5: fewer announced specs than rounds");
  }
  Step5Result result;
  for (std::size_t r = 0; r < records.size(); ++r) {
    const auto c = records[r].classification;
    if (c != Classification::Case2 && c != Classification::Case3) continue;
    const auto check = check_round(records[r], announced_specs[r]);
    ++result.checked_rounds;
    result.failed_rounds += !check.passed;
    result.checked_qubits += check.checked_qubits;
    result.mismatched_qubits += check.mismatched_qubits;
  }
  if (result.checked_rounds == 0) {
    throw IndeterminateCheck("no Case 2 or Case 3 round to check");
  }
  result.error_rate = static_cast<double>(result.mismatched_qubits) /
                      static_cast<double>(result.checked_qubits);
  result.threshold = rule.threshold(result.checked_qubits);
  result.abort = result.error_rate > result.threshold;
  return result;
}

Step6Result verify_step6(const RawKeys& raw_keys, std::size_t m, Rng& rng, const AbortRule& rule) {
  const std::size_t length = raw_keys.dealer.size();
  for (const auto& k : raw_keys.agents) {
    if (k.size() != length) throw ContractViolation("verify_step6: raw keys differ in length");
  }
  if (m < 1) throw ContractViolation("verify_step6: m must be at least 1");
  if (length < 2 * m) {
    throw MoreRoundsNeeded("verify_step6: " + std::to_string(length) + " raw bits, need " +
                           std::to_string(2 * m));
  }

  // Partial Fisher-Yates: the first m slots become a uniform m-subset.
  std::vector<std::size_t> order(length);
  for (std::size_t i = 0; i < length; ++i) order[i] = i;
  for (std::size_t i = 0; i < m; ++i) std::swap(order[i], order[i + rng.below(length - i)]);

  Step6Result result;
  result.positions.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(m));
  std::sort(result.positions.begin(), result.positions.end());
  for (auto pos : result.positions) {
    result.failures += raw_keys.dealer[pos] != xor_agents(raw_keys, pos);
  }
  result.error_rate = static_cast<double>(result.failures) / static_cast<double>(m);
  result.threshold = rule.threshold(m);
  result.abort = result.error_rate > result.threshold;

  std::vector<bool> sacrificed(length, false);
  for (auto pos : result.positions) sacrificed[pos] = true;
  auto strip = [&](const BitVector& key) {
    BitVector out;
    out.reserve(length - m);
    for (std::size_t i = 0; i < length; ++i) {
      if (!sacrificed[i]) out.push_back(key[i]);
    }
    return out;
  };
  result.remaining.dealer = strip(raw_keys.dealer);
  for (const auto& k : raw_keys.agents) result.remaining.agents.push_back(strip(k));
  return result;
}

SharedSecret finalize_and_share(const RawKeys& raw_keys_after_check, std::size_t m,
                                std::span<const std::uint8_t> secret) {
  if (secret.size() != m) throw ContractViolation("finalize_and_share: secret must have m bits");
  auto take = [&](const BitVector& key) {
    if (key.size() < m) throw MoreRoundsNeeded("finalize_and_share: raw key shorter than m");
    return BitVector(key.begin(), key.begin() + static_cast<std::ptrdiff_t>(m));
  };
  SharedSecret out;
  out.sk_dealer = take(raw_keys_after_check.dealer);
  for (const auto& k : raw_keys_after_check.agents) out.sk_agents.push_back(take(k));
  out.ciphertext.resize(m);
  out.reconstructed.resize(m);
  for (std::size_t i = 0; i < m; ++i) {
    out.ciphertext[i] = secret[i] ^ out.sk_dealer[i];
    std::uint8_t v = out.ciphertext[i];
    for (const auto& sk : out.sk_agents) v ^= sk[i];
    out.reconstructed[i] = v;
  }
  return out;
}

SessionOutcome run_session(const SessionConfig& config) {
  config.validate();
  Rng rng(config.seed);
  const std::size_t parties = config.n_agents + 1;
  const auto rule = config.abort_rule();
  const auto channels = make_channels(config);

  SessionOutcome out;
  if (config.secret) {
    out.secret = *config.secret;
  } else {
    out.secret.resize(config.m);
    for (auto& v : out.secret) v = rng.bit();
  }

  for (std::size_t attempt = 0; attempt < config.max_attempts; ++attempt) {
    ClassicalLog log;
    std::vector<RoundRecord> records;
    std::vector<GhzSpec> specs;
    SessionStats stats;

    std::size_t case1 = 0;
    while (case1 < 2 * config.m) {
      if (stats.batches == config.max_batches) {
        throw MoreRoundsNeeded("session exceeded its batch budget without 2m raw bits");
      }
      for (std::size_t i = 0; i < config.batch_size(); ++i) {
        specs.push_back(random_spec(parties, rng));
        records.push_back(run_round(config, records.size(), specs.back(), rng, channels, &log));
        case1 += records.back().classification == Classification::Case1;
      }
      ++stats.batches;
    }
    stats.rounds = records.size();
    for (const auto& rec : records) ++stats.case_counts[static_cast<std::size_t>(rec.classification)];

    auto finish_attempt = [&](Verdict verdict) {
      out.attempt_verdicts.push_back(verdict);
      out.verdict = verdict;
      out.stats = stats;
      out.log = std::move(log);
      if (config.keep_rounds) out.attempt_rounds.push_back(std::move(records));
    };

    // Step 5: TP announces the states, everybody discloses modes and the
    // Check-mode results of Case 2 / Case 3 rounds.
    broadcast(log, ParticipantId::third_party(), message::SpecAnnouncement{specs});
    for (std::size_t i = 0; i < parties; ++i) {
      const auto who = i == 0 ? ParticipantId::dealer() : ParticipantId::agent_at(i);
      message::ModeDisclosure modes;
      message::ResultDisclosure results;
      for (const auto& rec : records) {
        modes.modes.push_back(rec.modes[i]);
        const bool checked = rec.classification == Classification::Case2 ||
                             rec.classification == Classification::Case3;
        if (checked && rec.modes[i] == Mode::Check) {
          results.rounds.push_back(rec.round_index);
          results.bits.push_back(result_at(rec, i));
        }
      }
      broadcast(log, who, std::move(modes));
      broadcast(log, who, std::move(results));
    }

    try {
      stats.step5 = verify_step5(records, specs, rule);
    } catch (const IndeterminateCheck&) {
      broadcast(log, ParticipantId::dealer(), message::Abort{"no checkable rounds"});
      finish_attempt(Verdict::AbortedStep5);
      continue;
    }
    if (stats.step5.abort) {
      broadcast(log, ParticipantId::dealer(), message::Abort{"Step 5 error rate above threshold"});
      finish_attempt(Verdict::AbortedStep5);
      continue;
    }

    out.raw_keys = sift(records, specs);

    // Step 6
    auto step6 = verify_step6(out.raw_keys, config.m, rng, rule);
    stats.step6_checked = config.m;
    stats.step6_failures = step6.failures;
    stats.step6_error_rate = step6.error_rate;
    broadcast(log, ParticipantId::dealer(), message::CheckPositions{step6.positions});
    auto disclose = [&](ParticipantId who, const BitVector& key) {
      message::CheckBits bits;
      for (auto pos : step6.positions) bits.bits.push_back(key[pos]);
      broadcast(log, who, std::move(bits));
    };
    disclose(ParticipantId::dealer(), out.raw_keys.dealer);
    for (std::size_t j = 1; j < parties; ++j) {
      disclose(ParticipantId::agent_at(j), out.raw_keys.agents[j - 1]);
    }
    if (step6.abort) {
      broadcast(log, ParticipantId::dealer(), message::Abort{"Step 6 error rate above threshold"});
      finish_attempt(Verdict::AbortedStep6);
      continue;
    }

    // Steps 7-8
    out.shared = finalize_and_share(step6.remaining, config.m, out.secret);
    broadcast(log, ParticipantId::dealer(), message::Ciphertext{out.shared.ciphertext});
    finish_attempt(Verdict::Completed);
    break;
  }
  return out;
}

std::vector<RoundRecord> run_rounds(const SessionConfig& config, std::size_t count, Rng& rng) {
  config.validate();
  const auto channels = make_channels(config);
  std::vector<RoundRecord> records;
  records.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto spec = random_spec(config.n_agents + 1, rng);
    records.push_back(run_round(config, i, spec, rng, channels));
  }
  return records;
}

const char* to_string(Classification c) {
  switch (c) {
    case Classification::Case1: return "case1";
    case Classification::Case2: return "case2";
    case Classification::Case3: return "case3";
    case Classification::Discard: return "discard";
  }
  return "?";
}

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::Completed: return "completed";
    case Verdict::AbortedStep5: return "aborted_step5";
    case Verdict::AbortedStep6: return "aborted_step6";
  }
  return "?";
}

const char* to_string(Mode m) { return m == Mode::Check ? "check" : "share"; }

}  // namespace mqss
