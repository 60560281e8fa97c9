// Acceptance suite: one PASS/FAIL line per criterion.
//
//   acceptance                 run everything
//   acceptance --criterion 4   run one criterion

#include <cmath>
#include <iomanip>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mqss/adversary.hpp"
#include "mqss/experiment.hpp"
#include "mqss/ghz.hpp"
#include "mqss/protocol.hpp"
#include "oracles.hpp"
#include "worked_examples.hpp"

using namespace mqss;

namespace {

struct Check {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " FAILED[" << what << "]";
    }
  }
};

std::vector<std::size_t> positions_of(std::size_t q, std::size_t mask) {
  std::vector<std::size_t> out;
  for (std::size_t p = 1; p <= q; ++p) {
    if (mask & particle_mask(q, p)) out.push_back(p);
  }
  return out;
}

PureState evolve(const GhzSpec& spec, const std::vector<std::size_t>& h) {
  auto s = prepare(spec);
  for (auto p : h) s = apply_gate(s, p, SingleQubitGate::hadamard());
  return s;
}

double sigma(double p, double n) { return std::sqrt(p * (1.0 - p) / n); }

void closed_forms(Check& v) {
  double worst = 0.0;
  for (const auto& ex : examples::worked_examples()) {
    const GhzSpec spec{ex.x, ex.b};
    const auto predicted =
        ex.h_positions.size() == 4
            ? predict_full_hadamard(spec)
            : predict_partial_hadamard(spec, HadamardPattern::from_h_positions(4, ex.h_positions));
    const double d = oracle::max_deviation_up_to_phase(ex.expected, predicted);
    worst = std::max(worst, d);
    v.require(d <= 1e-9, ex.name);
  }
  v.detail << "8 worked examples, max amplitude deviation " << worst;
}

void oracle_equivalence(Check& v) {
  double worst = 1.0;
  std::size_t cases = 0;
  auto compare = [&](const GhzSpec& spec, std::size_t hmask) {
    const std::size_t q = spec.qubit_count();
    const auto h = positions_of(q, hmask);
    const bool full = hmask == (std::size_t{1} << q) - 1;
    const auto predicted = full ? predict_full_hadamard(spec)
                                : predict_partial_hadamard(spec, HadamardPattern::from_h_positions(q, h));
    const double f = fidelity(predicted, evolve(spec, h));
    worst = std::min(worst, f);
    ++cases;
    if (f < 1 - 1e-9) v.require(false, "q=" + std::to_string(q) + " mask=" + std::to_string(hmask));
  };
  for (std::size_t q = 2; q <= 5; ++q) {
    for (std::size_t x = 0; x < (std::size_t{1} << q); ++x) {
      for (std::uint8_t b = 0; b < 2; ++b) {
        const GhzSpec spec{index_bits(x, q), b};
        for (std::size_t hm = 1; hm < (std::size_t{1} << q); ++hm) compare(spec, hm);
      }
    }
  }
  Rng rng(2024);
  for (std::size_t q = 6; q <= 8; ++q) {
    for (int t = 0; t < 200; ++t) {
      const auto spec = random_spec(q, rng);
      compare(spec, 1 + rng.below((std::size_t{1} << q) - 1));
    }
  }
  v.detail << cases << " spec/pattern pairs, min fidelity " << std::setprecision(15) << worst;
}

void parity_law(Check& v) {
  std::size_t outcomes = 0;
  for (std::size_t q = 2; q <= 8; ++q) {
    std::vector<std::size_t> all;
    for (std::size_t p = 1; p <= q; ++p) all.push_back(p);
    for (std::size_t x = 0; x < (std::size_t{1} << q); ++x) {
      for (std::uint8_t b = 0; b < 2; ++b) {
        const GhzSpec spec{index_bits(x, q), b};
        for (const auto& state : {predict_full_hadamard(spec), evolve(spec, all)}) {
          for (auto k : support(state)) {
            ++outcomes;
            if (static_cast<std::uint8_t>(__builtin_popcountll(k) & 1) != b) {
              v.require(false, "q=" + std::to_string(q) + " x=" + std::to_string(x));
            }
          }
        }
      }
    }
  }
  v.detail << outcomes << " support outcomes checked for q = 2..8";
}

void honest_end_to_end(Check& v) {
  std::size_t completed = 0, matches = 0, mism5 = 0, fail6 = 0;
  for (std::size_t i = 0; i < 100; ++i) {
    SessionConfig cfg;
    cfg.n_agents = 3;
    cfg.m = 16;
    cfg.seed = derive_seed(4, i);
    cfg.keep_rounds = false;
    const auto out = run_session(cfg);
    completed += out.completed();
    matches += out.completed() && out.shared.reconstructed == out.secret;
    mism5 += out.stats.step5.mismatched_qubits;
    fail6 += out.stats.step6_failures;
  }
  v.require(completed == 100, "completed");
  v.require(matches == 100, "reconstruction");
  v.require(mism5 == 0 && fail6 == 0, "error rates");
  v.detail << completed << "/100 completed, " << matches << " reconstructions, step5 mismatches "
           << mism5 << ", step6 failures " << fail6;
}

void qubit_efficiency(Check& v) {
  const std::size_t n = 200000;
  SessionConfig cfg;
  cfg.n_agents = 3;
  Rng rng(55);
  std::array<std::size_t, 4> counts{};
  for (const auto& r : run_rounds(cfg, n, rng)) ++counts[static_cast<std::size_t>(r.classification)];

  const double p1 = oracle::prob_checkers(4, 0);
  const double pd = oracle::prob_checkers(4, 1);
  v.require(std::abs(p1 - 0.0625) < 1e-12 && std::abs(pd - 0.25) < 1e-12, "binomial oracle");
  const double f1 = static_cast<double>(counts[0]) / n;
  const double fd = static_cast<double>(counts[3]) / n;
  v.require(std::abs(f1 - p1) <= 3 * sigma(p1, n), "case1");
  v.require(std::abs(fd - pd) <= 3 * sigma(pd, n), "discard");
  v.detail << n << " rounds, case1 " << f1 << " (expect " << p1 << " +/- " << 3 * sigma(p1, n)
           << "), discard " << fd << " (expect " << pd << " +/- " << 3 * sigma(pd, n) << ")";
}

void collusion_law(Check& v) {
  const double per_bit = 0.25;
  Rng rng(606);
  for (std::size_t m : {1, 4, 16}) {
    SessionConfig params;
    params.n_agents = 3;
    params.m = m;
    const std::size_t trials = std::max<std::size_t>(1000, (10000 + m - 1) / m);
    const auto r = run_collusion(CollusionConfig{{1, 2}, MeasureResendConfig{3}}, params, trials, rng);
    const double expect_abort = 1.0 - std::pow(1.0 - per_bit, static_cast<double>(m));
    const double s_abort = sigma(expect_abort, static_cast<double>(r.sessions));
    const double s_bit = sigma(per_bit, static_cast<double>(r.check_bits));
    v.require(std::abs(r.per_bit_rate - per_bit) <= 3 * s_bit, "per-bit m=" + std::to_string(m));
    v.require(std::abs(r.detection_rate_overall - expect_abort) <= 3 * s_abort,
              "abort m=" + std::to_string(m));
    v.detail << " m=" << m << ": per-bit " << r.per_bit_rate << " over " << r.check_bits
             << " bits (expect 0.25 +/- " << 3 * s_bit << "), abort " << r.detection_rate_overall
             << " over " << r.sessions << " sessions (expect " << expect_abort << " +/- "
             << 3 * s_abort << ");";
  }
}

// Probability that the all-Share parity check fails, from an explicitly built
// four-particle-plus-probe state averaged over every (x, b).
double detection_oracle(double overlap) {
  const std::size_t q = 4;
  const double c = overlap;
  const double s = std::sqrt(1.0 - c * c);
  double total = 0.0;
  for (std::size_t x = 0; x < 16; ++x) {
    for (int b = 0; b < 2; ++b) {
      std::vector<Amplitude> amps(32);
      const std::size_t xbar = 15 ^ x;
      const double sign = b ? -1.0 : 1.0;
      amps[x * 2] += 1.0 / std::sqrt(2.0);
      amps[xbar * 2] += sign * c / std::sqrt(2.0);
      amps[xbar * 2 + 1] += sign * s / std::sqrt(2.0);
      PureState st(q + 1, std::move(amps));
      for (std::size_t p = 1; p <= q; ++p) st = apply_gate(st, p, SingleQubitGate::hadamard());
      for (std::size_t k = 0; k < 32; ++k) {
        const int parity = __builtin_popcountll(k >> 1) & 1;
        if (parity != b) total += std::norm(st.amplitude(k));
      }
    }
  }
  return total / 32.0;
}

void collective_tradeoff(Check& v) {
  const std::vector<double> overlaps{0.0, 0.25, 0.5, 0.75, 1.0};
  SessionConfig params;
  params.n_agents = 3;
  std::vector<LeakageEstimate> est;
  for (std::size_t i = 0; i < overlaps.size(); ++i) {
    Rng rng(derive_seed(707, i));
    est.push_back(estimate_leakage(CollectiveAttackConfig{overlaps[i]}, params, 2000, rng));
  }
  const double at_zero = detection_oracle(0.0);
  v.require(std::abs(at_zero - 0.5) < 1e-9, "statevector oracle at overlap 0");

  const auto& full = est.back();
  v.require(full.detection_rate == 0.0, "overlap 1 detection");
  v.require(full.mutual_information < 0.01, "overlap 1 information");
  const auto& orth = est.front();
  v.require(std::abs(orth.detection_rate - at_zero) <= 3 * sigma(at_zero, orth.sample_count),
            "overlap 0 detection");
  for (std::size_t i = 0; i < overlaps.size(); ++i) {
    const double expect = detection_oracle(overlaps[i]);
    v.require(std::abs(est[i].detection_rate - expect) <=
                  3 * sigma(expect, est[i].sample_count) + 1e-12,
              "detection at overlap " + std::to_string(overlaps[i]));
    if (i + 1 < overlaps.size()) {
      v.require(est[i].detection_rate > est[i + 1].detection_rate, "detection monotone");
      v.require(est[i].branch_information > est[i + 1].branch_information, "information monotone");
    }
    v.detail << " overlap " << overlaps[i] << ": detection " << est[i].detection_rate
             << " (oracle " << expect << ", n=" << est[i].sample_count << "), sifted MI "
             << est[i].mutual_information << ", branch MI " << est[i].branch_information << ";";
  }
}

void threshold_property(Check& v) {
  const std::size_t n = 3, m = 4, sessions = 10000;
  const std::size_t subsets = (std::size_t{1} << n) - 1;  // masks 1..subsets-1 are proper
  std::vector<std::vector<std::size_t>> hits(subsets, std::vector<std::size_t>(m, 0));
  std::size_t full_hits = 0, completed = 0;
  for (std::size_t i = 0; i < sessions; ++i) {
    SessionConfig cfg;
    cfg.n_agents = n;
    cfg.m = m;
    cfg.seed = derive_seed(808, i);
    cfg.keep_rounds = false;
    const auto out = run_session(cfg);
    if (!out.completed()) continue;
    ++completed;
    const auto& sh = out.shared;
    for (std::size_t mask = 1; mask < subsets; ++mask) {
      for (std::size_t bit = 0; bit < m; ++bit) {
        std::uint8_t guess = sh.ciphertext[bit];
        for (std::size_t a = 0; a < n; ++a) {
          if (mask & (std::size_t{1} << a)) guess ^= sh.sk_agents[a][bit];
        }
        hits[mask][bit] += guess == out.secret[bit];
      }
    }
    full_hits += sh.reconstructed == out.secret;
  }
  v.require(completed == sessions, "sessions completed");
  v.require(full_hits == completed, "full set");
  const double band = 3 * sigma(0.5, static_cast<double>(completed));
  double worst = 0.0;
  for (std::size_t mask = 1; mask < subsets; ++mask) {
    for (std::size_t bit = 0; bit < m; ++bit) {
      const double f = static_cast<double>(hits[mask][bit]) / static_cast<double>(completed);
      worst = std::max(worst, std::abs(f - 0.5));
      v.require(std::abs(f - 0.5) <= band,
                "subset " + std::to_string(mask) + " bit " + std::to_string(bit));
    }
  }
  v.detail << completed << " sessions, " << (subsets - 1) << " proper subsets x " << m
           << " bits, max |freq - 0.5| " << worst << " (3 sigma " << band << "), full set "
           << full_hits << "/" << completed;
}

void noise_calibration(Check& v) {
  const double eps = 0.05;
  const std::size_t sessions = 1000;
  std::size_t aborted = 0, rounds = 0, checked = 0, mismatched = 0;
  for (std::size_t i = 0; i < sessions; ++i) {
    SessionConfig cfg;
    cfg.n_agents = 3;
    cfg.m = 16;
    cfg.epsilon = eps;
    cfg.max_attempts = 1;
    cfg.seed = derive_seed(909, i);
    const auto out = run_session(cfg);
    aborted += !out.completed();
    for (const auto& r : out.attempt_rounds.front()) {
      if (r.classification != Classification::Case2) continue;
      const auto c = check_round(r, r.spec);
      ++rounds;
      checked += c.checked_qubits;
      mismatched += c.mismatched_qubits;
    }
  }
  const std::size_t q = 4;
  const double expect = oracle::expected_check_mismatch(q, eps);
  // Mismatches within one round are dependent; use the per-round variance.
  double mean = 0.0, second = 0.0;
  for (std::size_t w = 0; w <= q; ++w) {
    const double k = static_cast<double>(std::min(w, q - w));
    mean += oracle::binomial_pmf(q, w, eps) * k;
    second += oracle::binomial_pmf(q, w, eps) * k * k;
  }
  const double s = std::sqrt((second - mean * mean) / static_cast<double>(rounds)) / q;
  const double observed = static_cast<double>(mismatched) / static_cast<double>(checked);
  const double abort_rate = static_cast<double>(aborted) / sessions;
  v.require(std::abs(observed - expect) <= 3 * s, "case2 mismatch rate");
  v.require(abort_rate < 0.01, "abort rate");
  v.detail << "case2 per-qubit mismatch " << observed << " over " << checked << " qubits (expect "
           << expect << " +/- " << 3 * s << "), abort rate " << abort_rate << " over " << sessions
           << " sessions";
}

void determinism(Check& v) {
  ExperimentConfig cfg;
  cfg.session.m = 8;
  cfg.session.epsilon = 0.03;
  cfg.session.seed = 1234;
  cfg.trials = 3;
  cfg.attack = AttackKind::Collective;
  cfg.probe_overlap = 0.6;
  auto transcript = [&](const ExperimentConfig& c) {
    std::ostringstream out;
    (void)run_experiment(c, &out);
    return out.str();
  };
  const auto a = transcript(cfg);
  const auto b = transcript(cfg);
  auto other = cfg;
  other.session.seed = 1235;
  const auto c = transcript(other);
  v.require(!a.empty(), "non-empty");
  v.require(a == b, "identical");
  v.require(a != c, "seed sensitivity");
  v.detail << a.size() << " transcript bytes, identical=" << (a == b);
}

struct Criterion {
  int id;
  const char* name;
  std::function<void(Check&)> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance checks"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {1, "closed-form reproduction", closed_forms},
      {2, "oracle equivalence", oracle_equivalence},
      {3, "parity law", parity_law},
      {4, "honest end-to-end", honest_end_to_end},
      {5, "qubit efficiency", qubit_efficiency},
      {6, "collusion detection law", collusion_law},
      {7, "collective-attack trade-off", collective_tradeoff},
      {8, "threshold property", threshold_property},
      {9, "noise calibration", noise_calibration},
      {10, "determinism", determinism},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    if (only && c.id != only) continue;
    Check v;
    v.detail << std::setprecision(6);
    try {
      c.run(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << " threw: " << e.what();
    }
    failures += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.name << "): "
              << v.detail.str() << std::endl;
  }
  return failures ? 1 : 0;
}
