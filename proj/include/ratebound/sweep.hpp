#pragma once

// Seeded sweeps of verify_thm3 / verify_thm2 over generated systems.
// System j of a sweep uses seed first_seed + j; results are keyed by that
// index, so the aggregate does not depend on how work is split over threads.

#include <atomic>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "ratebound/random_systems.hpp"
#include "ratebound/verifier.hpp"

namespace ratebound {

struct SweepConfig {
  int theorem = 3;  // 3: closed loop, 2: four-block
  GeneratorConfig generator;
  FourBlockMode four_block_mode = FourBlockMode::memoryless;
  unsigned jobs = 1;
};

struct SweepEntry {
  std::uint64_t seed = 0;
  std::optional<VerificationReport> report;
  std::string error;
};

struct LinkExtreme {
  double min_slack = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;
};

struct SweepReport {
  int theorem = 3;
  std::uint64_t first_seed = 0;
  std::size_t count = 0;
  std::size_t asserted = 0;              // hypotheses met
  std::size_t passed = 0;                // asserted and every link holds
  std::size_t failed = 0;                // asserted and some link fails
  std::size_t unasserted_violations = 0; // hypotheses unmet and some link fails (finding, not error)
  std::size_t errors = 0;
  std::map<std::string, LinkExtreme> extremes;  // over asserted systems
  std::vector<SweepEntry> entries;

  bool all_passed() const { return failed == 0 && errors == 0; }
  /// Seed of the asserted system with the smallest headline slack.
  std::optional<std::uint64_t> extremal_seed() const {
    auto it = extremes.find(theorem == 3 ? "overall" : "dpi");
    if (it == extremes.end()) return std::nullopt;
    return it->second.seed;
  }
};

inline SweepEntry run_sweep_item(const SweepConfig& config, std::uint64_t seed) {
  SweepEntry entry;
  entry.seed = seed;
  try {
    if (config.theorem == 3) entry.report = verify_thm3(random_system(seed, config.generator), config.generator.cap);
    else entry.report = verify_thm2(random_four_block(seed, config.generator, config.four_block_mode), config.generator.cap);
  } catch (const std::exception& e) {
    entry.error = e.what();
  }
  return entry;
}

inline SweepReport sweep(std::uint64_t first_seed, const SweepConfig& config, std::size_t n) {
  if (n < 1) throw std::invalid_argument("sweep count must be at least 1");
  if (config.theorem != 2 && config.theorem != 3) throw std::invalid_argument("sweep theorem must be 2 or 3");
  SweepReport rep;
  rep.theorem = config.theorem;
  rep.first_seed = first_seed;
  rep.count = n;
  rep.entries.resize(n);

  const unsigned jobs = std::max(1U, std::min<unsigned>(config.jobs, static_cast<unsigned>(n)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t j = next++; j < n; j = next++) rep.entries[j] = run_sweep_item(config, first_seed + j);
  };
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < jobs; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }

  for (const auto& e : rep.entries) {
    if (!e.report) {
      ++rep.errors;
      continue;
    }
    const auto& r = *e.report;
    if (!r.asserted()) {
      if (!r.verdict()) ++rep.unasserted_violations;
      continue;
    }
    ++rep.asserted;
    ++(r.verdict() ? rep.passed : rep.failed);
    for (const auto* group : {&r.links, &r.prefix_links, &r.rate_links})
      for (const auto& l : *group) {
        auto& x = rep.extremes[l.label];
        if (l.slack < x.min_slack) x = {l.slack, e.seed};
      }
  }
  return rep;
}

}  // namespace ratebound
