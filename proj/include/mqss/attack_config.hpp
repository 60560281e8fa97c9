#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <variant>
#include <vector>

#include "mqss/statevec.hpp"

namespace mqss {

/// The third party prepares alpha0 |x>|e0> + alpha15 (-1)^b |x-bar>|e15> with a
/// one-qubit probe, |e0> = |0> and |e15> = cos t |0> + sin t |1>, where
/// cos t = probe_overlap.
struct CollectiveAttackConfig {
  double probe_overlap = 1.0;
  Amplitude alpha0 = 1.0 / std::sqrt(2.0);
  Amplitude alpha15 = 1.0 / std::sqrt(2.0);

  void validate() const;
};

// Z-measures the particle addressed to agent `target` in transit and forwards it.
struct MeasureResendConfig {
  std::size_t target = 1;

  void validate(std::size_t n_agents) const;
};

/// Third party plus the listed agents act against one victim. The victim is
/// the measure-resend target, or otherwise the lowest-numbered agent outside
/// the coalition. An empty inner attack means the coalition stays passive.
struct CollusionConfig {
  std::vector<std::size_t> colluders;
  std::optional<std::variant<MeasureResendConfig, CollectiveAttackConfig>> inner_attack;

  std::size_t victim(std::size_t n_agents) const;
  void validate(std::size_t n_agents) const;
};

using AttackConfig = std::variant<MeasureResendConfig, CollectiveAttackConfig, CollusionConfig>;

}  // namespace mqss
