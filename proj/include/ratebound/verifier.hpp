#pragma once

// Machine checks of the closed-loop rate lower bound and of the conditional
// closed-loop directed data-processing inequality on enumerable systems.
//
// Closed-loop chain at horizon k (S_D below is the decoder set (S_D, S_EC)):
//   sum R(i) >= sum H(s(i) | s^{i-1}, S_D^k)                          L1
//            >= sum [H(s(i) | s^{i-1}, S_D^i) - H(s(i) | s^{i-1}, S_D^i, y^i)]   L2
//             = sum I(s(i); y^i | s^{i-1}, S_D^i)                     L3
//             = I(y^k -> s^k || S_D^k)                                L4
//            >= I(y^k -> u^k)                                         L5
// All directed information terms use zero forward delay.

#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "ratebound/directed_info.hpp"
#include "ratebound/random_systems.hpp"
#include "ratebound/rate.hpp"
#include "ratebound/system_model.hpp"

namespace ratebound {

struct ChainLink {
  enum class Kind { at_least, equal, below_plus_one };

  std::string label;
  Kind kind = Kind::at_least;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // lhs - rhs
  bool holds = true;
  std::optional<Rational> lhs_exact;

  static ChainLink at_least(std::string label, double lhs, double rhs) {
    ChainLink l{std::move(label), Kind::at_least, lhs, rhs, lhs - rhs, true, std::nullopt};
    l.holds = l.slack >= -kEpsilon;
    return l;
  }
  static ChainLink at_least(std::string label, const Rational& lhs, double rhs) {
    ChainLink l = at_least(std::move(label), lhs.to_double(), rhs);
    l.lhs_exact = lhs;
    return l;
  }
  static ChainLink equal(std::string label, double lhs, double rhs) {
    ChainLink l{std::move(label), Kind::equal, lhs, rhs, lhs - rhs, true, std::nullopt};
    l.holds = std::abs(l.slack) <= kEpsilon;
    return l;
  }
  /// rhs < lhs + 1, reported with slack = lhs + 1 - rhs.
  static ChainLink below_plus_one(std::string label, double lhs, const Rational& rhs) {
    ChainLink l{std::move(label), Kind::below_plus_one, lhs, rhs.to_double(), lhs + 1.0 - rhs.to_double(), true, std::nullopt};
    l.holds = l.slack > -kEpsilon;
    return l;
  }
};

struct VerificationReport {
  std::string theorem;
  int horizon = 0;
  HypothesisReport hypotheses;
  std::vector<ChainLink> links;         // chain at the full horizon, overall link last
  std::vector<ChainLink> prefix_links;  // headline inequality at every shorter horizon
  std::vector<ChainLink> rate_links;    // per-step coding bounds (closed loop only)
  std::vector<double> side_di_terms;    // per-term causally conditioned DI
  std::vector<double> loop_di_terms;    // per-term I(. -> u)

  /// The inequality is only asserted when the hypotheses hold.
  bool asserted() const { return hypotheses.all(); }

  bool verdict() const {
    for (const auto* group : {&links, &prefix_links, &rate_links})
      for (const auto& l : *group)
        if (!l.holds) return false;
    return true;
  }

  /// True unless an asserted check failed.
  bool passed() const { return !asserted() || verdict(); }

  const ChainLink& link(const std::string& label) const {
    for (const auto* group : {&links, &prefix_links, &rate_links})
      for (const auto& l : *group)
        if (l.label == label) return l;
    throw std::out_of_range("no link labelled " + label);
  }
};

inline VerificationReport verify_thm3(const ClosedLoopSystem& sys, std::size_t cap = kDefaultEnumerationCap) {
  using namespace names;
  const JointTable joint = enumerate_closed_loop(sys, cap);
  Measurer m(joint);
  VerificationReport rep;
  rep.theorem = "thm3";
  const int k = sys.horizon;
  rep.horizon = k;
  rep.hypotheses = check_hypotheses_thm3(sys);

  const RateReport rates = expected_rate_sequence(m, k);
  for (const auto& step : rates.steps) {
    const std::string at = "@" + std::to_string(step.time);
    rep.rate_links.push_back(ChainLink::at_least("rate>=entropy" + at, step.rate, step.entropy));
    rep.rate_links.push_back(ChainLink::below_plus_one("rate<entropy+1" + at, step.entropy, step.rate));
  }

  const SequenceSpec y_seq{y, k}, s_seq{s, k}, u_seq{u, k};
  const DelayProfile zero = DelayProfile::zero(k);
  const auto side_di = causal_cond_directed_info(m, y_seq, s_seq, CausalSide{{side_d, side_ec}, {}}, zero);
  const auto loop_di = directed_info(m, y_seq, u_seq, zero);
  rep.side_di_terms = side_di.terms;
  rep.loop_di_terms = loop_di.terms;

  double a1 = 0, a2 = 0, a3 = 0;
  const VarSet side_k = sys.decoder_side(k);
  for (int i = 0; i <= k; ++i) {
    const VarSet target{VariableId(s, i)};
    const VarSet past_s = prefix(s, i - 1);
    const VarSet side_i = sys.decoder_side(i);
    a1 += m.cond_entropy(target, set_union(past_s, side_k));
    a2 += m.cond_entropy(target, set_union(past_s, side_i)) -
          m.cond_entropy(target, set_union(set_union(past_s, side_i), prefix(y, i)));
    a3 += m.cond_mutual_info(target, prefix(y, i), set_union(past_s, side_i));
  }
  const Rational sum_r = rates.total(k);
  rep.links.push_back(ChainLink::at_least("L1", sum_r, a1));
  rep.links.push_back(ChainLink::at_least("L2", a1, a2));
  rep.links.push_back(ChainLink::equal("L3", a2, a3));
  rep.links.push_back(ChainLink::equal("L4", a3, side_di.total));
  rep.links.push_back(ChainLink::at_least("L5", side_di.total, loop_di.total));
  rep.links.push_back(ChainLink::at_least("overall", sum_r, loop_di.total));

  double di_prefix = 0;
  for (int kp = 0; kp < k; ++kp) {
    di_prefix += loop_di.terms[kp];
    rep.prefix_links.push_back(ChainLink::at_least("overall@" + std::to_string(kp), rates.total(kp), di_prefix));
  }
  return rep;
}

/// I(x^k -> y^k || q^k) >= I(e^k -> u^k), zero forward delays.
inline VerificationReport verify_thm2(const FourBlockSystem& sys, std::size_t cap = kDefaultEnumerationCap) {
  using namespace names;
  const JointTable joint = enumerate_four_block(sys, cap);
  Measurer m(joint);
  VerificationReport rep;
  rep.theorem = "thm2";
  const int k = sys.horizon;
  rep.horizon = k;
  rep.hypotheses = check_hypotheses_thm2(sys);
  const DelayProfile zero = DelayProfile::zero(k);
  const auto side_di = causal_cond_directed_info(m, SequenceSpec{x, k}, SequenceSpec{y, k}, CausalSide{{q}, {}}, zero);
  const auto loop_di = directed_info(m, SequenceSpec{e, k}, SequenceSpec{u, k}, zero);
  rep.side_di_terms = side_di.terms;
  rep.loop_di_terms = loop_di.terms;
  rep.links.push_back(ChainLink::at_least("dpi", side_di.total, loop_di.total));
  double lhs = 0, rhs = 0;
  for (int kp = 0; kp < k; ++kp) {
    lhs += side_di.terms[kp];
    rhs += loop_di.terms[kp];
    rep.prefix_links.push_back(ChainLink::at_least("dpi@" + std::to_string(kp), lhs, rhs));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Counterexample search for the Markov chain S_D^i <-> u^{i-1} <-> y^i.

struct CounterexampleCertificate {
  ClosedLoopSystem system;
  std::string origin;  // "grid:<index>" or "seed:<seed>"
  int time = 0;
  double cmi = 0.0;  // I(S_D^i; y^i | u^{i-1})
  bool independent = false;  // S_D^k independent of (x_o, d^k), exact
};

struct MarkovProbe {
  bool independent = false;
  int time = 0;
  double cmi = 0.0;  // largest over i
};

/// Exact independence of the decoder side information from (x_o, d^k) and
/// the largest I(S_D^i; y^i | u^{i-1}) over i = 0..k.
inline MarkovProbe probe_markov_chain(const ClosedLoopSystem& sys, std::size_t cap = kDefaultEnumerationCap) {
  using namespace names;
  const JointTable joint = enumerate_closed_loop(sys, cap);
  Measurer m(joint);
  MarkovProbe probe;
  probe.independent = m.is_independent(sys.decoder_side(sys.horizon), sys.plant_exogenous(), {});
  probe.cmi = -1.0;
  for (int i = 0; i <= sys.horizon; ++i) {
    double v = m.cond_mutual_info(sys.decoder_side(i), prefix(y, i), prefix(u, i - 1));
    if (v > probe.cmi) {
      probe.cmi = v;
      probe.time = i;
    }
  }
  return probe;
}

namespace detail {

/// Small exhaustive family: binary y = d, s = y, uniform iid S_D (singleton
/// in side-info mode none); decoder(0) ranges over all 16 binary tables of
/// (s(0), S_D(0)); later decoders pass s through.
inline ClosedLoopSystem grid_system(std::size_t index, int horizon, bool side_info) {
  using namespace names;
  ClosedLoopSystem sys;
  sys.horizon = horizon;
  sys.mode = side_info ? SideInfoMode::independent_private : SideInfoMode::none;
  const Alphabet bin(2), one(1);
  sys.y_alphabet = sys.s_alphabet = sys.u_alphabet = bin;
  const Alphabet sd = side_info ? bin : one;
  JointTable law = JointTable::point_mass({{VariableId(x_o), one}}, {0});
  const Pmf uniform(std::vector<Rational>{Rational(1, 2), Rational(1, 2)});
  for (int t = 0; t <= horizon; ++t) law = JointTable::product(law, JointTable::from_pmf(VariableId(d, t), uniform));
  for (int t = 0; t <= horizon; ++t) {
    law = JointTable::product(law, JointTable::point_mass({{VariableId(side_e, t), one}}, {0}));
    law = JointTable::product(law, side_info ? JointTable::from_pmf(VariableId(side_d, t), uniform)
                                             : JointTable::point_mass({{VariableId(side_d, t), one}}, {0}));
    law = JointTable::product(law, JointTable::point_mass({{VariableId(side_ec, t), one}}, {0}));
  }
  sys.exogenous = std::move(law);
  for (int t = 0; t <= horizon; ++t) {
    const std::string at = "(" + std::to_string(t) + ")";
    DeterministicMap plant("plant" + at, {{VariableId(d, t), bin}}, bin);
    plant.set_row(0, 0);
    plant.set_row(1, 1);
    DeterministicMap enc("encoder" + at, {{VariableId(y, t), bin}}, bin);
    enc.set_row(0, 0);
    enc.set_row(1, 1);
    sys.plant.push_back(std::move(plant));
    sys.encoder.push_back(std::move(enc));
    if (t == 0 && side_info) {
      DeterministicMap dec("decoder" + at, {{VariableId(s, t), bin}, {VariableId(side_d, t), sd}}, bin);
      for (std::size_t row = 0; row < 4; ++row) dec.set_row(row, static_cast<Symbol>((index >> row) & 1U));
      sys.decoder.push_back(std::move(dec));
    } else {
      DeterministicMap dec("decoder" + at, {{VariableId(s, t), bin}}, bin);
      for (std::size_t row = 0; row < 2; ++row) dec.set_row(row, static_cast<Symbol>(t == 0 ? (index >> (row * 2)) & 1U : row));
      sys.decoder.push_back(std::move(dec));
    }
  }
  return sys;
}

}  // namespace detail

/// Searches for a system whose decoder side information is exactly
/// independent of (x_o, d^k) while I(S_D^i; y^i | u^{i-1}) exceeds the
/// threshold. The small exhaustive grid runs first, then random systems with
/// seeds seed, seed + 1, ...; every candidate costs one unit of budget.
inline std::optional<CounterexampleCertificate> find_markov_counterexample(std::uint64_t seed, const GeneratorConfig& config,
                                                                           std::size_t budget, double threshold = 0.01) {
  std::size_t spent = 0;
  auto accept = [&](const ClosedLoopSystem& sys, std::string origin) -> std::optional<CounterexampleCertificate> {
    ++spent;
    auto probe = probe_markov_chain(sys, config.cap);
    if (probe.independent && probe.cmi > threshold) return CounterexampleCertificate{sys, std::move(origin), probe.time, probe.cmi, true};
    return std::nullopt;
  };
  const bool side_info = !(config.mode && *config.mode == SideInfoMode::none);
  const int grid_horizon = std::clamp(1, config.min_horizon, config.max_horizon);
  for (std::size_t g = 0; g < 16 && spent < budget; ++g)
    if (auto c = accept(detail::grid_system(g, grid_horizon, side_info), "grid:" + std::to_string(g))) return c;
  for (std::uint64_t s = seed; spent < budget; ++s)
    if (auto c = accept(random_system(s, config), "seed:" + std::to_string(s))) return c;
  return std::nullopt;
}

}  // namespace ratebound
