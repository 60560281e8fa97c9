#include "mqss/channel.hpp"

#include <cmath>

#include "mqss/error.hpp"

namespace mqss {

QubitChannel::QubitChannel(double epsilon, Interceptor interceptor)
    : epsilon_(epsilon), interceptor_(std::move(interceptor)) {
  if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
    throw ContractViolation("channel noise rate must lie in [0, 1]");
  }
}

PureState transmit(const QubitChannel& channel, const PureState& state, std::size_t particle,
                   Rng& rng) {
  if (particle < 1 || particle > state.qubit_count()) {
    throw ContractViolation("transmit: particle index out of range");
  }
  const bool flip = rng.uniform() < channel.epsilon();
  PureState out = flip ? apply_gate(state, particle, SingleQubitGate::pauli_x()) : state;
  if (channel.interceptor()) out = channel.interceptor()(out, particle, rng);
  return out;
}

}  // namespace mqss
