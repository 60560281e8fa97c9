#include "mqss/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "mqss/error.hpp"

namespace mqss {

void CollectiveAttackConfig::validate() const {
  if (!(probe_overlap >= 0.0 && probe_overlap <= 1.0)) {
    throw ContractViolation("probe overlap must lie in [0, 1]");
  }
  if (std::abs(std::norm(alpha0) + std::norm(alpha15) - 1.0) > kTolerance) {
    throw ContractViolation("|alpha0|^2 + |alpha15|^2 must equal 1");
  }
}

void MeasureResendConfig::validate(std::size_t n_agents) const {
  if (target < 1 || target > n_agents) {
    throw ContractViolation("measure-resend target must be an agent in 1.." +
                            std::to_string(n_agents));
  }
}

std::size_t CollusionConfig::victim(std::size_t n_agents) const {
  if (inner_attack) {
    if (const auto* mr = std::get_if<MeasureResendConfig>(&*inner_attack)) return mr->target;
  }
  for (std::size_t a = 1; a <= n_agents; ++a) {
    if (std::find(colluders.begin(), colluders.end(), a) == colluders.end()) return a;
  }
  return 0;
}

void CollusionConfig::validate(std::size_t n_agents) const {
  auto sorted = colluders;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw ContractViolation("colluders listed twice");
  }
  for (auto a : sorted) {
    if (a < 1 || a > n_agents) throw ContractViolation("colluder is not an agent");
  }
  if (sorted.size() >= n_agents) throw ContractViolation("colluders must be a proper subset");
  if (inner_attack) {
    std::visit([&](const auto& c) {
      if constexpr (std::is_same_v<std::decay_t<decltype(c)>, MeasureResendConfig>) {
        c.validate(n_agents);
      } else {
        c.validate();
      }
    }, *inner_attack);
    if (sorted.empty()) throw ContractViolation("an attacking coalition needs at least one agent");
  }
  const auto v = victim(n_agents);
  if (std::binary_search(sorted.begin(), sorted.end(), v)) {
    throw ContractViolation("victim cannot be one of the colluders");
  }
}

double plug_in_mutual_information(const std::array<std::array<std::size_t, 2>, 2>& counts) {
  double joint[2][2];
  double total = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      joint[a][b] = static_cast<double>(counts[a][b]) + 1.0;
      total += joint[a][b];
    }
  }
  double row[2] = {0.0, 0.0};
  double col[2] = {0.0, 0.0};
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) {
      joint[a][b] /= total;
      row[a] += joint[a][b];
      col[b] += joint[a][b];
    }
  }
  double mi = 0.0;
  for (int a = 0; a < 2; ++a) {
    for (int b = 0; b < 2; ++b) mi += joint[a][b] * std::log2(joint[a][b] / (row[a] * col[b]));
  }
  return std::max(0.0, mi);
}

PureState prepare_attacked_state(const GhzSpec& spec, const CollectiveAttackConfig& config) {
  validate(spec);
  config.validate();
  const std::size_t q = spec.qubit_count();
  if (q + 1 > kMaxQubits) throw ContractViolation("attacked state too large");
  const std::size_t dim = std::size_t{2} << q;
  const std::size_t x = basis_index(spec.x);
  const std::size_t xbar = ((std::size_t{1} << q) - 1) ^ x;
  const double cos_t = config.probe_overlap;
  const double sin_t = std::sqrt(std::max(0.0, 1.0 - cos_t * cos_t));
  const Amplitude branch = (spec.b ? -1.0 : 1.0) * config.alpha15;

  // Probe is the last (least significant) particle.
  std::vector<Amplitude> amps(dim);
  amps[x << 1] = config.alpha0;
  amps[xbar << 1] = branch * cos_t;
  amps[(xbar << 1) | 1U] = branch * sin_t;
  return PureState(q + 1, std::move(amps));
}

std::uint8_t probe_readout(const PureState& post_round_state, std::size_t system_qubits, Rng& rng) {
  if (post_round_state.qubit_count() != system_qubits + 1) {
    throw ContractViolation("probe_readout: state carries no probe register");
  }
  return measure_z(post_round_state, system_qubits + 1, rng).outcome;
}

Interceptor measure_resend_interceptor(const MeasureResendConfig& config) {
  const std::size_t victim_particle = config.target + 1;
  return [victim_particle](const PureState& state, std::size_t particle, Rng& rng) {
    if (particle != victim_particle) return state;
    return measure_z(state, particle, rng).collapsed;
  };
}

LeakageEstimate estimate_leakage(const CollectiveAttackConfig& config, const SessionConfig& params,
                                 std::size_t trials, Rng& rng, std::size_t victim) {
  if (trials < 1000) throw ContractViolation("estimate_leakage needs at least 1000 trials");
  SessionConfig attacked = params;
  attacked.attack = config;
  attacked.validate();
  if (victim < 1 || victim > attacked.n_agents) {
    throw ContractViolation("estimate_leakage: victim must be an agent");
  }
  const auto channels = make_channels(attacked);
  const std::size_t parties = attacked.n_agents + 1;

  std::array<std::array<std::size_t, 2>, 2> sifted{};
  std::array<std::array<std::size_t, 2>, 2> branch{};
  std::size_t case1 = 0;
  std::size_t case2 = 0;
  std::size_t failures = 0;
  for (std::size_t round = 0; case1 < trials || case2 < trials; ++round) {
    const auto spec = random_spec(parties, rng);
    const auto rec = run_round(attacked, round, spec, rng, channels);
    const std::uint8_t probe = *rec.probe;
    const std::uint8_t victim_bit = *rec.results[victim];
    if (rec.classification == Classification::Case1) {
      ++case1;
      ++sifted[probe][victim_bit];
      std::uint8_t parity = spec.b;
      for (const auto& r : rec.results) parity ^= *r;
      failures += parity != 0;
    } else if (rec.classification == Classification::Case2) {
      ++case2;
      ++branch[probe][victim_bit ^ spec.x[victim]];
    }
  }

  LeakageEstimate estimate;
  estimate.sample_count = case1;
  estimate.branch_sample_count = case2;
  estimate.detection_rate = static_cast<double>(failures) / static_cast<double>(case1);
  estimate.mutual_information = plug_in_mutual_information(sifted);
  estimate.branch_information = plug_in_mutual_information(branch);
  return estimate;
}

void CollusionResult::add(const SessionOutcome& o) {
  CollusionResult& result = *this;
  ++result.sessions;
  if (o.verdict == Verdict::AbortedStep5) ++result.step5_aborts;
  if (o.verdict == Verdict::AbortedStep6) ++result.step6_aborts;
  if (o.verdict != Verdict::AbortedStep5) {
    result.check_bits += o.stats.step6_checked;
    result.failed_check_bits += o.stats.step6_failures;
  }
}

void CollusionResult::finish() {
  CollusionResult& result = *this;
  result.aborted_sessions = result.step5_aborts + result.step6_aborts;
  if (result.sessions) {
    result.detection_rate_overall =
        static_cast<double>(result.aborted_sessions) / static_cast<double>(result.sessions);
  }
  if (result.check_bits) {
    result.per_bit_rate =
        static_cast<double>(result.failed_check_bits) / static_cast<double>(result.check_bits);
  }
}

CollusionResult summarize_collusion(std::span<const SessionOutcome> outcomes) {
  CollusionResult result;
  for (const auto& o : outcomes) result.add(o);
  result.finish();
  return result;
}

CollusionResult run_collusion(const CollusionConfig& config, const SessionConfig& params,
                              std::size_t trials, Rng& rng) {
  if (trials < 1000) throw ContractViolation("run_collusion needs at least 1000 trials");
  SessionConfig session = params;
  session.attack = config;
  session.max_attempts = 1;
  session.keep_rounds = false;
  session.validate();

  CollusionResult result;
  for (std::size_t i = 0; i < trials; ++i) {
    session.seed = rng.next();
    result.add(run_session(session));
  }
  result.finish();
  return result;
}

}  // namespace mqss
