#include "mqss/transcript.hpp"

#include <istream>
#include <ostream>

#include "json.hpp"

namespace mqss {

using json = nlohmann::ordered_json;

namespace {

Classification classification_from(const std::string& s) {
  if (s == "case1") return Classification::Case1;
  if (s == "case2") return Classification::Case2;
  if (s == "case3") return Classification::Case3;
  if (s == "discard") return Classification::Discard;
  throw TranscriptError("unknown classification '" + s + "'");
}

Mode mode_from(const std::string& s) {
  if (s == "check") return Mode::Check;
  if (s == "share") return Mode::Share;
  throw TranscriptError("unknown mode '" + s + "'");
}

std::uint8_t bit_from(const json& j) {
  const auto v = j.get<int>();
  if (v != 0 && v != 1) throw TranscriptError("bit value must be 0 or 1");
  return static_cast<std::uint8_t>(v);
}

json optional_bit(const std::optional<std::uint8_t>& v) {
  return v ? json(static_cast<int>(*v)) : json(nullptr);
}

}  // namespace

std::string to_transcript_line(const TranscriptEntry& entry) {
  const auto& r = entry.record;
  std::string x;
  for (auto v : r.spec.x) x.push_back(v ? '1' : '0');

  json j;
  j["trial"] = entry.trial;
  j["attempt"] = entry.attempt;
  j["round_index"] = r.round_index;
  j["spec"] = {{"x", x}, {"b", static_cast<int>(r.spec.b)}};
  j["modes"] = json::array();
  for (auto m : r.modes) j["modes"].push_back(to_string(m));
  j["results"] = json::array();
  for (const auto& v : r.results) j["results"].push_back(optional_bit(v));
  j["probe"] = optional_bit(r.probe);
  j["classification"] = to_string(r.classification);
  return j.dump();
}

TranscriptEntry parse_transcript_line(std::string_view line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::parse_error& e) {
    throw TranscriptError(std::string("malformed transcript line: ") + e.what());
  }
  try {
    TranscriptEntry entry;
    entry.trial = j.at("trial").get<std::size_t>();
    entry.attempt = j.at("attempt").get<std::size_t>();
    auto& r = entry.record;
    r.round_index = j.at("round_index").get<std::size_t>();
    for (char c : j.at("spec").at("x").get<std::string>()) {
      if (c != '0' && c != '1') throw TranscriptError("spec pattern must be a bit string");
      r.spec.x.push_back(c == '1');
    }
    r.spec.b = bit_from(j.at("spec").at("b"));
    for (const auto& m : j.at("modes")) r.modes.push_back(mode_from(m.get<std::string>()));
    for (const auto& v : j.at("results")) {
      r.results.push_back(v.is_null() ? std::nullopt : std::optional<std::uint8_t>(bit_from(v)));
    }
    const auto& probe = j.at("probe");
    if (!probe.is_null()) r.probe = bit_from(probe);
    r.classification = classification_from(j.at("classification").get<std::string>());
    if (r.results.size() != r.modes.size() || r.spec.x.size() != r.modes.size()) {
      throw TranscriptError("modes, results and spec disagree on the party count");
    }
    return entry;
  } catch (const json::exception& e) {
    throw TranscriptError(std::string("bad transcript record: ") + e.what());
  }
}

void write_transcript(std::ostream& out, std::span<const TranscriptEntry> entries) {
  for (const auto& e : entries) out << to_transcript_line(e) << '\n';
}

std::vector<TranscriptEntry> read_transcript(std::istream& in) {
  std::vector<TranscriptEntry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    entries.push_back(parse_transcript_line(line));
  }
  return entries;
}

}  // namespace mqss
