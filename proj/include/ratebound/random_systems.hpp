#pragma once

// Seeded generators for random joint tables and random systems.
//
// Everything here is a deterministic function of the seed: the engine is
// std::mt19937_64 and all draws go through Rng::below, which avoids the
// implementation-defined standard distributions.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratebound/system_model.hpp"

namespace ratebound {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform integer in [0, n).
  std::uint64_t below(std::uint64_t n) {
    if (n <= 1) return 0;
    const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
    std::uint64_t v;
    do v = engine_();
    while (v >= limit);
    return v % n;
  }
  /// Uniform integer in [lo, hi].
  int between(int lo, int hi) { return lo + static_cast<int>(below(static_cast<std::uint64_t>(hi - lo + 1))); }
  /// True with probability percent/100.
  bool chance(int percent) { return static_cast<int>(below(100)) < percent; }

 private:
  std::mt19937_64 engine_;
};

/// Probabilities on the grid {0, 1/grid, ..., 1}: grid units split at
/// uniformly drawn cut points.
inline std::vector<Rational> random_grid_pmf(Rng& rng, std::size_t size, int grid) {
  if (grid < 1) throw std::invalid_argument("pmf grid must be at least 1");
  std::vector<int> cuts{0, grid};
  for (std::size_t i = 1; i < size; ++i) cuts.push_back(static_cast<int>(rng.below(static_cast<std::uint64_t>(grid) + 1)));
  std::sort(cuts.begin(), cuts.end());
  std::vector<Rational> p;
  for (std::size_t i = 0; i < size; ++i) p.emplace_back(cuts[i + 1] - cuts[i], grid);
  return p;
}

/// Random table with 1..max_vars variables v0, v1, ... over alphabets of
/// size 1..max_alphabet; each cell gets an integer weight in [0, grid].
inline JointTable random_joint_table(Rng& rng, int max_vars = 4, int max_alphabet = 3, int grid = 8) {
  int n = rng.between(1, max_vars);
  std::vector<Variable> vars;
  std::size_t cells = 1;
  for (int i = 0; i < n; ++i) {
    std::size_t a = static_cast<std::size_t>(rng.between(1, max_alphabet));
    vars.push_back({VariableId("v" + std::to_string(i)), Alphabet(a)});
    cells *= a;
  }
  std::vector<std::pair<Outcome, Weight>> rows;
  Weight total = 0;
  for (std::size_t c = 0; c < cells; ++c) {
    Outcome o(vars.size());
    std::size_t rest = c;
    for (std::size_t v = vars.size(); v-- > 0;) {
      o[v] = static_cast<Symbol>(rest % vars[v].alphabet.size());
      rest /= vars[v].alphabet.size();
    }
    Weight w = rng.below(static_cast<std::uint64_t>(grid) + 1);
    total += w;
    rows.emplace_back(std::move(o), w);
  }
  if (total == 0) {
    rows[rng.below(rows.size())].second = 1;
    total = 1;
  }
  return JointTable::from_weights(std::move(vars), std::move(rows), total);
}

namespace detail {

/// Conditional probability table: one grid pmf per parent configuration.
struct RandomNode {
  Variable var;
  VarSet parents;
};

/// Joint law of a Bayesian network whose CPT rows are random grid pmfs.
/// Nodes must be listed parents-first.
inline JointTable sample_network(Rng& rng, const std::vector<RandomNode>& nodes, int grid) {
  std::vector<Variable> vars;
  std::vector<std::pair<Outcome, Weight>> rows{{Outcome{}, 1}};
  Weight den = 1;
  for (const auto& node : nodes) {
    std::vector<std::size_t> parent_cols;
    std::size_t configs = 1;
    for (const auto& p : node.parents) {
      auto it = std::find_if(vars.begin(), vars.end(), [&p](const Variable& v) { return v.id == p; });
      if (it == vars.end()) throw std::logic_error("parent listed after child: " + p.str());
      parent_cols.push_back(static_cast<std::size_t>(it - vars.begin()));
      configs *= it->alphabet.size();
    }
    std::vector<std::vector<Rational>> cpt;
    for (std::size_t c = 0; c < configs; ++c) cpt.push_back(random_grid_pmf(rng, node.var.alphabet.size(), grid));
    std::vector<std::pair<Outcome, Weight>> next;
    for (auto& [o, w] : rows) {
      std::size_t config = 0;
      for (auto c : parent_cols) config = config * vars[c].alphabet.size() + o[c];
      for (std::size_t s = 0; s < node.var.alphabet.size(); ++s) {
        const Rational& pr = cpt[config][s];
        if (pr.is_zero()) continue;
        Outcome extended = o;
        extended.push_back(static_cast<Symbol>(s));
        // pr has denominator dividing grid
        next.emplace_back(std::move(extended), checked_mul(w, static_cast<UInt128>(pr.num() * (grid / pr.den()))));
      }
    }
    rows = std::move(next);
    den = checked_mul(den, static_cast<UInt128>(grid));
    vars.push_back(node.var);
  }
  return JointTable::from_weights(std::move(vars), std::move(rows), den);
}

/// Picks candidate inputs (each with its own inclusion chance), drops
/// singletons, caps the count, then fills the table uniformly.
inline DeterministicMap random_map(Rng& rng, std::string name, const std::vector<std::pair<Variable, int>>& candidates,
                                   const Alphabet& output, int max_inputs) {
  std::vector<Variable> inputs;
  for (const auto& [var, percent] : candidates)
    if (rng.chance(percent) && var.alphabet.size() > 1 && static_cast<int>(inputs.size()) < max_inputs) inputs.push_back(var);
  DeterministicMap m(std::move(name), std::move(inputs), output);
  for (std::size_t r = 0; r < m.rows(); ++r) m.set_row(r, static_cast<Symbol>(rng.below(output.size())));
  return m;
}

}  // namespace detail

struct GeneratorConfig {
  int min_horizon = 0;
  int max_horizon = 3;
  int max_alphabet = 3;       // y, s, u, x_o, d and four-block signals
  int max_side_alphabet = 2;  // S_E, S_D, S_EC
  /// Unset: cycle none / common-only / independent-private by seed.
  std::optional<SideInfoMode> mode;
  int grid = 8;
  std::size_t cap = kDefaultEnumerationCap;
  /// Alphabets shrink until the exogenous outcome space is at most this.
  std::size_t atom_budget = 4096;
  int max_map_inputs = 4;
  int rejection_retries = 500;
};

namespace detail {

inline void check_config(const GeneratorConfig& c) {
  if (c.min_horizon < 0 || c.max_horizon < c.min_horizon) throw std::invalid_argument("invalid horizon range");
  if (c.max_alphabet < 1 || c.max_side_alphabet < 1) throw std::invalid_argument("alphabet sizes must be positive");
  if (c.grid < 1) throw std::invalid_argument("pmf grid must be positive");
  if (c.atom_budget > c.cap) throw std::invalid_argument("atom budget exceeds the enumeration cap");
}

/// Shrinks sizes (each raised to its multiplicity) until the product fits.
inline void fit_budget(std::vector<std::size_t*> sizes, const std::vector<int>& multiplicity, std::size_t budget) {
  auto space = [&] {
    long double p = 1;
    for (std::size_t i = 0; i < sizes.size(); ++i) p *= std::pow(static_cast<long double>(*sizes[i]), multiplicity[i]);
    return p;
  };
  while (space() > static_cast<long double>(budget)) {
    std::size_t best = sizes.size();
    long double best_weight = 1;
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      long double w = std::pow(static_cast<long double>(*sizes[i]), multiplicity[i]);
      if (*sizes[i] > 1 && w > best_weight) {
        best = i;
        best_weight = w;
      }
    }
    if (best == sizes.size()) break;
    --*sizes[best];
  }
}

}  // namespace detail

inline SideInfoMode mode_for_seed(const GeneratorConfig& config, std::uint64_t seed) {
  if (config.mode) return *config.mode;
  static constexpr SideInfoMode cycle[] = {SideInfoMode::none, SideInfoMode::common_only, SideInfoMode::independent_private};
  return cycle[seed % 3];
}

/// Random closed-loop system. Modes none, common-only and
/// independent-private satisfy the theorem hypotheses by construction;
/// rejection-sampled-general draws a random side-information network that
/// may also depend on (x_o, d) and keeps the first draw passing the exact
/// hypothesis check.
inline ClosedLoopSystem random_system(std::uint64_t seed, const GeneratorConfig& config) {
  using namespace names;
  detail::check_config(config);
  Rng rng(seed);
  const SideInfoMode mode = mode_for_seed(config, seed);
  if (mode == SideInfoMode::custom) throw std::invalid_argument("custom is not a generator mode");

  ClosedLoopSystem sys;
  sys.mode = mode;
  const int k = rng.between(config.min_horizon, config.max_horizon);
  sys.horizon = k;
  sys.y_alphabet = Alphabet(static_cast<std::size_t>(rng.between(2, std::max(2, config.max_alphabet))));
  sys.s_alphabet = Alphabet(static_cast<std::size_t>(rng.between(2, std::max(2, config.max_alphabet))));
  sys.u_alphabet = Alphabet(static_cast<std::size_t>(rng.between(2, std::max(2, config.max_alphabet))));
  std::size_t n_xo = static_cast<std::size_t>(rng.between(1, config.max_alphabet));
  std::size_t n_d = static_cast<std::size_t>(rng.between(1, config.max_alphabet));
  auto side_size = [&] { return static_cast<std::size_t>(rng.between(std::min(2, config.max_side_alphabet), config.max_side_alphabet)); };
  std::size_t n_se = 1, n_sd = 1, n_sec = 1;
  switch (mode) {
    case SideInfoMode::none: break;
    case SideInfoMode::common_only: n_sec = side_size(); break;
    default:
      n_se = side_size();
      n_sd = side_size();
      n_sec = side_size();
  }
  const int steps = k + 1;
  detail::fit_budget({&n_xo, &n_d, &n_se, &n_sd, &n_sec}, {1, steps, steps, steps, steps}, config.atom_budget);

  auto var = [](const std::string& name, int t, std::size_t size) {
    return t < 0 ? Variable{VariableId(name), Alphabet(size)} : Variable{VariableId(name, t), Alphabet(size)};
  };

  for (int attempt = 0;; ++attempt) {
    if (attempt >= std::max(1, config.rejection_retries))
      throw std::runtime_error("rejection sampling exceeded " + std::to_string(config.rejection_retries) + " retries");

    std::vector<detail::RandomNode> nodes;
    nodes.push_back({var(x_o, -1, n_xo), {}});
    for (int t = 0; t <= k; ++t) nodes.push_back({var(d, t, n_d), {}});
    for (int t = 0; t <= k; ++t) {
      if (mode == SideInfoMode::rejection_sampled_general) {
        // Random parents among earlier side information and, rarely, the
        // plant's exogenous signals.
        auto pick = [&](std::vector<std::pair<VariableId, int>> cands) {
          VarSet parents;
          for (auto& [id, pct] : cands)
            if (parents.size() < 2 && rng.chance(pct)) parents.push_back(id);
          return parents;
        };
        std::vector<std::pair<VariableId, int>> ec_c, sd_c, se_c;
        if (t > 0) {
          ec_c = {{VariableId(side_ec, t - 1), 30}, {VariableId(side_d, t - 1), 20}, {VariableId(side_e, t - 1), 10}};
          sd_c = {{VariableId(side_d, t - 1), 30}, {VariableId(side_e, t - 1), 20}};
          se_c = {{VariableId(side_e, t - 1), 30}};
        }
        ec_c.push_back({VariableId(d, t), 5});
        sd_c.push_back({VariableId(side_ec, t), 30});
        sd_c.push_back({VariableId(x_o), 5});
        se_c.push_back({VariableId(side_d, t), 35});
        se_c.push_back({VariableId(side_ec, t), 25});
        se_c.push_back({VariableId(d, t), 5});
        nodes.push_back({var(side_ec, t, n_sec), pick(ec_c)});
        nodes.push_back({var(side_d, t, n_sd), pick(sd_c)});
        nodes.push_back({var(side_e, t, n_se), pick(se_c)});
      } else {
        nodes.push_back({var(side_ec, t, n_sec), {}});
        nodes.push_back({var(side_d, t, n_sd), {}});
        nodes.push_back({var(side_e, t, n_se), {}});
      }
    }
    sys.exogenous = detail::sample_network(rng, nodes, config.grid);
    if (mode != SideInfoMode::rejection_sampled_general) break;
    // Maps are irrelevant to the hypotheses; check the law alone.
    ClosedLoopSystem probe = sys;
    probe.plant.assign(k + 1, DeterministicMap("probe", {}, sys.y_alphabet));
    probe.encoder.assign(k + 1, DeterministicMap("probe", {}, sys.s_alphabet));
    probe.decoder.assign(k + 1, DeterministicMap("probe", {}, sys.u_alphabet));
    if (check_hypotheses_thm3(probe).all()) break;
  }
  if (sys.exogenous.size() > config.cap)
    throw std::length_error("generated exogenous support exceeds the enumeration cap");

  const int m = config.max_map_inputs;
  auto ex = [&](const VariableId& id) { return Variable{id, sys.exogenous.alphabet_of(id)}; };
  for (int i = 0; i <= k; ++i) {
    std::vector<std::pair<Variable, int>> pc{{ex(VariableId(d, i)), 90}};
    if (i > 0) pc.push_back({{VariableId(u, i - 1), sys.u_alphabet}, 85});
    pc.push_back({ex(VariableId(x_o)), i == 0 ? 60 : 25});
    if (i > 0) pc.push_back({ex(VariableId(d, i - 1)), 25});
    if (i > 1) pc.push_back({{VariableId(u, i - 2), sys.u_alphabet}, 20});
    sys.plant.push_back(detail::random_map(rng, "plant(" + std::to_string(i) + ")", pc, sys.y_alphabet, m));

    std::vector<std::pair<Variable, int>> ec{{{VariableId(y, i), sys.y_alphabet}, 95},
                                             {ex(VariableId(side_e, i)), 60},
                                             {ex(VariableId(side_ec, i)), 60}};
    if (i > 0) {
      ec.push_back({{VariableId(y, i - 1), sys.y_alphabet}, 30});
      ec.push_back({ex(VariableId(side_e, i - 1)), 15});
      ec.push_back({ex(VariableId(side_ec, i - 1)), 15});
    }
    sys.encoder.push_back(detail::random_map(rng, "encoder(" + std::to_string(i) + ")", ec, sys.s_alphabet, m));

    std::vector<std::pair<Variable, int>> dc{{{VariableId(s, i), sys.s_alphabet}, 95},
                                             {ex(VariableId(side_d, i)), 60},
                                             {ex(VariableId(side_ec, i)), 60}};
    if (i > 0) {
      dc.push_back({{VariableId(s, i - 1), sys.s_alphabet}, 40});
      dc.push_back({ex(VariableId(side_d, i - 1)), 15});
    }
    sys.decoder.push_back(detail::random_map(rng, "decoder(" + std::to_string(i) + ")", dc, sys.u_alphabet, m));
  }
  validate(sys);
  return sys;
}

enum class FourBlockMode { memoryless, rejection_sampled_general };

/// Random four-block loop. (q, s) are drawn independently of (r, p); in
/// memoryless mode each (q(t), s(t)) pair is independent across time, which
/// gives the Markov condition by construction. The general mode draws a
/// random network over q and s (possibly touching r) and keeps the first
/// draw that passes the exact hypothesis check.
inline FourBlockSystem random_four_block(std::uint64_t seed, const GeneratorConfig& config,
                                         FourBlockMode mode = FourBlockMode::memoryless) {
  using namespace names;
  detail::check_config(config);
  Rng rng(seed);
  FourBlockSystem sys;
  const int k = rng.between(config.min_horizon, config.max_horizon);
  sys.horizon = k;
  auto alpha = [&] { return Alphabet(static_cast<std::size_t>(rng.between(2, std::max(2, config.max_alphabet)))); };
  sys.e_alphabet = alpha();
  sys.x_alphabet = alpha();
  sys.y_alphabet = alpha();
  sys.u_alphabet = alpha();
  std::size_t n_r = static_cast<std::size_t>(rng.between(1, config.max_alphabet));
  std::size_t n_p = static_cast<std::size_t>(rng.between(1, config.max_alphabet));
  std::size_t n_s = static_cast<std::size_t>(rng.between(1, config.max_side_alphabet));
  std::size_t n_q = static_cast<std::size_t>(rng.between(1, config.max_side_alphabet));
  const int steps = k + 1;
  detail::fit_budget({&n_r, &n_p, &n_s, &n_q}, {steps, steps, steps, steps}, config.atom_budget);

  for (int attempt = 0;; ++attempt) {
    if (attempt >= std::max(1, config.rejection_retries))
      throw std::runtime_error("rejection sampling exceeded " + std::to_string(config.rejection_retries) + " retries");
    std::vector<detail::RandomNode> nodes;
    for (int t = 0; t <= k; ++t) {
      nodes.push_back({{VariableId(r, t), Alphabet(n_r)}, {}});
      nodes.push_back({{VariableId(p, t), Alphabet(n_p)}, {VariableId(r, t)}});
    }
    for (int t = 0; t <= k; ++t) {
      VarSet q_parents, s_parents{VariableId(q, t)};
      if (mode == FourBlockMode::rejection_sampled_general) {
        if (t > 0 && rng.chance(40)) q_parents.push_back(VariableId(q, t - 1));
        if (t > 0 && rng.chance(25)) q_parents.push_back(VariableId(s, t - 1));
        if (t > 0 && rng.chance(30)) s_parents.push_back(VariableId(s, t - 1));
        if (rng.chance(5)) s_parents.push_back(VariableId(r, t));
      }
      nodes.push_back({{VariableId(q, t), Alphabet(n_q)}, q_parents});
      nodes.push_back({{VariableId(s, t), Alphabet(n_s)}, s_parents});
    }
    sys.exogenous = detail::sample_network(rng, nodes, config.grid);
    if (mode == FourBlockMode::memoryless) break;
    FourBlockSystem probe = sys;
    probe.s1.assign(k + 1, DeterministicMap("probe", {}, sys.e_alphabet));
    probe.s2.assign(k + 1, DeterministicMap("probe", {}, sys.x_alphabet));
    probe.s3.assign(k + 1, DeterministicMap("probe", {}, sys.y_alphabet));
    probe.s4.assign(k + 1, DeterministicMap("probe", {}, sys.u_alphabet));
    if (check_hypotheses_thm2(probe).all()) break;
  }
  if (sys.exogenous.size() > config.cap)
    throw std::length_error("generated exogenous support exceeds the enumeration cap");

  const int m = config.max_map_inputs;
  auto ex = [&](const VariableId& id) { return Variable{id, sys.exogenous.alphabet_of(id)}; };
  for (int i = 0; i <= k; ++i) {
    std::vector<std::pair<Variable, int>> c1{{ex(VariableId(r, i)), 80}};
    if (i > 0) c1.push_back({{VariableId(u, i - 1), sys.u_alphabet}, 90});
    if (i > 0) c1.push_back({ex(VariableId(r, i - 1)), 20});
    if (i > 1) c1.push_back({{VariableId(u, i - 2), sys.u_alphabet}, 20});
    sys.s1.push_back(detail::random_map(rng, "S1(" + std::to_string(i) + ")", c1, sys.e_alphabet, m));

    std::vector<std::pair<Variable, int>> c2{{{VariableId(e, i), sys.e_alphabet}, 95}, {ex(VariableId(p, i)), 70}};
    if (i > 0) c2.push_back({{VariableId(e, i - 1), sys.e_alphabet}, 30});
    sys.s2.push_back(detail::random_map(rng, "S2(" + std::to_string(i) + ")", c2, sys.x_alphabet, m));

    std::vector<std::pair<Variable, int>> c3{{{VariableId(x, i), sys.x_alphabet}, 95}, {ex(VariableId(s, i)), 70}};
    if (i > 0) c3.push_back({{VariableId(x, i - 1), sys.x_alphabet}, 30});
    sys.s3.push_back(detail::random_map(rng, "S3(" + std::to_string(i) + ")", c3, sys.y_alphabet, m));

    std::vector<std::pair<Variable, int>> c4{{{VariableId(y, i), sys.y_alphabet}, 95}, {ex(VariableId(q, i)), 70}};
    if (i > 0) {
      c4.push_back({{VariableId(y, i - 1), sys.y_alphabet}, 30});
      c4.push_back({ex(VariableId(q, i - 1)), 20});
    }
    sys.s4.push_back(detail::random_map(rng, "S4(" + std::to_string(i) + ")", c4, sys.u_alphabet, m));
  }
  validate(sys);
  return sys;
}

}  // namespace ratebound
