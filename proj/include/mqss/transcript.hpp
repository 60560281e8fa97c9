// Line-delimited JSON transcripts: one round per line, grouped by trial and
// attempt, e.g.
//
//   {"trial":0,"attempt":0,"round_index":5,"spec":{"x":"0110","b":1},
//    "modes":["share","check","check","share"],"results":[1,0,0,1],
//    "probe":null,"classification":"case3"}

#pragma once

#include <cstddef>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "mqss/protocol.hpp"

namespace mqss {

class TranscriptError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct TranscriptEntry {
  std::size_t trial = 0;
  std::size_t attempt = 0;
  RoundRecord record;

  friend bool operator==(const TranscriptEntry&, const TranscriptEntry&) = default;
};

std::string to_transcript_line(const TranscriptEntry& entry);
TranscriptEntry parse_transcript_line(std::string_view line);

void write_transcript(std::ostream& out, std::span<const TranscriptEntry> entries);
// Skips blank lines; throws TranscriptError on malformed input.
std::vector<TranscriptEntry> read_transcript(std::istream& in);

}  // namespace mqss
