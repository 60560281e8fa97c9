#pragma once

#include <cstddef>
#include <string>

namespace mqss {

struct ParticipantId {
  enum class Role { ThirdParty, Dealer, Agent };

  Role role = Role::Dealer;
  std::size_t agent = 0;  // 1-based, only meaningful for Role::Agent

  static ParticipantId third_party() { return {Role::ThirdParty, 0}; }
  static ParticipantId dealer() { return {Role::Dealer, 0}; }
  static ParticipantId agent_at(std::size_t index) { return {Role::Agent, index}; }

  // Particle this participant receives from the third party (dealer = 1).
  std::size_t particle() const { return role == Role::Agent ? agent + 1 : 1; }

  std::string label() const {
    switch (role) {
      case Role::ThirdParty: return "TP";
      case Role::Dealer: return "dealer";
      case Role::Agent: return "agent" + std::to_string(agent);
    }
    return "?";
  }

  friend bool operator==(const ParticipantId&, const ParticipantId&) = default;
};

enum class Mode { Check, Share };

}  // namespace mqss
