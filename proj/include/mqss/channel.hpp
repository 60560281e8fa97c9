// Quantum links from the third party to each participant, and the
// authenticated classical broadcast log shared by everybody.
//
// Links are one-way: there is no operation that carries a particle back to the
// third party.

#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "mqss/ghz.hpp"
#include "mqss/participant.hpp"
#include "mqss/rng.hpp"
#include "mqss/statevec.hpp"

namespace mqss {

// Transforms the joint state while `particle` is in flight.
using Interceptor = std::function<PureState(const PureState& state, std::size_t particle, Rng& rng)>;

class QubitChannel {
 public:
  QubitChannel() = default;
  explicit QubitChannel(double epsilon, Interceptor interceptor = {});

  double epsilon() const { return epsilon_; }
  const Interceptor& interceptor() const { return interceptor_; }

 private:
  double epsilon_ = 0.0;
  Interceptor interceptor_;
};

/// Sends `particle` over the channel: a bit flip with probability epsilon,
/// then the interceptor, if any. One uniform draw is consumed per call.
PureState transmit(const QubitChannel& channel, const PureState& state, std::size_t particle,
                   Rng& rng);

namespace message {

struct Ack {};
struct SpecAnnouncement {
  std::vector<GhzSpec> specs;
};
struct ModeDisclosure {
  std::vector<Mode> modes;
};
struct ResultDisclosure {
  std::vector<std::size_t> rounds;
  BitVector bits;
};
struct CheckPositions {
  std::vector<std::size_t> positions;
};
struct CheckBits {
  BitVector bits;
};
struct Ciphertext {
  BitVector bits;
};
struct Abort {
  std::string reason;
};

}  // namespace message

using Message = std::variant<message::Ack, message::SpecAnnouncement, message::ModeDisclosure,
                             message::ResultDisclosure, message::CheckPositions,
                             message::CheckBits, message::Ciphertext, message::Abort>;

struct LogEntry {
  ParticipantId sender;
  Message message;
};

/// Append-only. Anyone, the adversary included, may read every entry.
class ClassicalLog {
 public:
  void append(ParticipantId sender, Message message) {
    entries_.push_back({sender, std::move(message)});
  }
  std::span<const LogEntry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<LogEntry> entries_;
};

inline void broadcast(ClassicalLog& log, ParticipantId sender, Message message) {
  log.append(sender, std::move(message));
}

}  // namespace mqss
