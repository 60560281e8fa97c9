#include <fstream>
#include <iostream>

#include "mqss/error.hpp"
#include "mqss/experiment.hpp"

int main(int argc, char** argv) {
  auto parsed = mqss::parse_config(argc, argv);
  if (!parsed.config) {
    (parsed.exit_code == 0 ? std::cout : std::cerr) << parsed.output;
    return parsed.exit_code;
  }
  const auto& config = *parsed.config;

  std::ofstream transcript;
  if (config.transcript_path) {
    transcript.open(*config.transcript_path, std::ios::out | std::ios::trunc);
    if (!transcript) {
      std::cerr << "error: cannot open transcript file " << *config.transcript_path << '\n';
      return 2;
    }
  }

  try {
    const auto report = mqss::run_experiment(config, transcript.is_open() ? &transcript : nullptr);
    mqss::print_report(std::cout, report);
    return report.exit_code();
  } catch (const mqss::ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
