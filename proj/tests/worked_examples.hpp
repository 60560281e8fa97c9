// Four-particle worked examples written out term by term, used as fixed
// expectations for the closed-form predictors.

#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "oracles.hpp"

namespace examples {

struct WorkedExample {
  std::string name;
  std::vector<std::uint8_t> x;
  std::uint8_t b;
  std::vector<std::size_t> h_positions;  // all four means full Hadamard
  mqss::PureState expected;
};

inline std::vector<std::uint8_t> bits(const std::string& s) {
  std::vector<std::uint8_t> out;
  for (char c : s) out.push_back(c == '1');
  return out;
}

inline std::vector<WorkedExample> worked_examples() {
  using oracle::expand;
  using oracle::from_terms;
  const double r8 = 1.0 / (2.0 * std::sqrt(2.0));
  std::vector<WorkedExample> out;

  out.push_back({"HHHH 0011 b=0", bits("0011"), 0, {1, 2, 3, 4},
                 from_terms(4, {{"0000", r8}, {"0011", r8}, {"0101", -r8}, {"0110", -r8},
                                {"1001", -r8}, {"1010", -r8}, {"1100", r8}, {"1111", r8}})});
  out.push_back({"HHHH 0011 b=1", bits("0011"), 1, {1, 2, 3, 4},
                 from_terms(4, {{"0001", -r8}, {"0010", -r8}, {"0100", r8}, {"0111", r8},
                                {"1000", r8}, {"1011", r8}, {"1101", -r8}, {"1110", -r8}})});

  // |+> and |-> on particle 4.
  out.push_back({"HHHI 0010 b=0", bits("0010"), 0, {1, 2, 3},
                 from_terms(4, expand(r8, "0", "1",
                                      {{"000", 1, 1}, {"001", -1, -1}, {"010", 1, -1},
                                       {"011", -1, 1}, {"100", 1, -1}, {"101", -1, 1},
                                       {"110", 1, 1}, {"111", -1, -1}}))});
  out.push_back({"HHHI 0001 b=0", bits("0001"), 0, {1, 2, 3},
                 from_terms(4, expand(r8, "0", "1",
                                      {{"000", 1, 1}, {"001", -1, -1}, {"010", -1, -1},
                                       {"011", 1, 1}, {"100", -1, -1}, {"101", 1, 1},
                                       {"110", 1, 1}, {"111", -1, -1}}))});

  // Two Hadamards: the written state is (|0010> + |1101>)/sqrt2.
  out.push_back({"HHII 0010 b=0", bits("0010"), 0, {1, 2},
                 from_terms(4, expand(0.5, "01", "10",
                                      {{"00", 1, 1}, {"01", -1, -1}, {"10", -1, -1},
                                       {"11", 1, 1}}))});
  out.push_back({"HHII 0000 b=0", bits("0000"), 0, {1, 2},
                 from_terms(4, expand(0.5, "00", "11",
                                      {{"00", 1, 1}, {"01", 1, -1}, {"10", 1, -1},
                                       {"11", 1, 1}}))});

  const double r2 = 1.0 / std::sqrt(2.0);
  out.push_back({"HIII 0010 b=0", bits("0010"), 0, {1},
                 from_terms(4, expand(r2, "010", "101", {{"0", 1, 1}, {"1", 1, -1}}))});
  out.push_back({"HIII 0000 b=0", bits("0000"), 0, {1},
                 from_terms(4, expand(r2, "000", "111", {{"0", 1, 1}, {"1", 1, -1}}))});
  return out;
}

}  // namespace examples
