#pragma once

// Closed-loop source-coding systems and the general four-block feedback
// loop, realized as per-time deterministic maps plus an exogenous joint law.
//
// Closed loop, for i = 0..k:
//   y(i) = plant_i(u^{i-1}, d^i, x_o)
//   s(i) = encoder_i(y^i, S_E^i, S_EC^i)
//   u(i) = decoder_i(s^i, S_D^i, S_EC^i)
// The entropy coder sees (s^i, S_EC^i) and lives in rate.hpp.
//
// Four-block loop, for i = 0..k:
//   e(i) = S1_i(r^i, u^{i-1}),  x(i) = S2_i(p^i, e^i),
//   y(i) = S3_i(s^i, x^i),      u(i) = S4_i(q^i, y^i)
// Maps may read any subset of the listed prefixes.

#include <string>
#include <string_view>
#include <vector>

#include "ratebound/measures.hpp"
#include "ratebound/network.hpp"

namespace ratebound {

namespace names {
inline const std::string x_o = "x_o";
inline const std::string d = "d";
inline const std::string side_e = "S_E";
inline const std::string side_d = "S_D";
inline const std::string side_ec = "S_EC";
inline const std::string y = "y";
inline const std::string s = "s";
inline const std::string u = "u";

inline const std::string e = "e";
inline const std::string x = "x";
inline const std::string r = "r";
inline const std::string p = "p";
inline const std::string q = "q";
}  // namespace names

enum class SideInfoMode { none, common_only, independent_private, rejection_sampled_general, custom };

inline std::string_view to_string(SideInfoMode m) {
  switch (m) {
    case SideInfoMode::none: return "none";
    case SideInfoMode::common_only: return "common-only";
    case SideInfoMode::independent_private: return "independent-private";
    case SideInfoMode::rejection_sampled_general: return "rejection-sampled-general";
    case SideInfoMode::custom: return "custom";
  }
  return "custom";
}

inline SideInfoMode parse_side_info_mode(std::string_view s) {
  for (auto m : {SideInfoMode::none, SideInfoMode::common_only, SideInfoMode::independent_private,
                 SideInfoMode::rejection_sampled_general, SideInfoMode::custom})
    if (to_string(m) == s) return m;
  throw std::invalid_argument("unknown side-info mode '" + std::string(s) + "'");
}

/// True for the generator modes that satisfy the theorem hypotheses by construction.
inline bool guarantees_hypotheses(SideInfoMode m) {
  return m == SideInfoMode::none || m == SideInfoMode::common_only || m == SideInfoMode::independent_private;
}

struct ClosedLoopSystem {
  int horizon = 0;
  Alphabet y_alphabet;
  Alphabet s_alphabet;
  Alphabet u_alphabet;
  std::vector<DeterministicMap> plant;    // F_0..F_k
  std::vector<DeterministicMap> encoder;  // E_0..E_k
  std::vector<DeterministicMap> decoder;  // D_0..D_k
  /// Law of x_o, d(0..k), S_E(0..k), S_D(0..k), S_EC(0..k).
  JointTable exogenous;
  SideInfoMode mode = SideInfoMode::custom;

  /// Decoder side information S_D-set^i = (S_D^i, S_EC^i).
  VarSet decoder_side(int i) const { return set_union(prefix(names::side_d, i), prefix(names::side_ec, i)); }
  /// Encoder side information S_E-set^i = (S_E^i, S_EC^i).
  VarSet encoder_side(int i) const { return set_union(prefix(names::side_e, i), prefix(names::side_ec, i)); }
  VarSet plant_exogenous() const { return set_union({VariableId(names::x_o)}, prefix(names::d, horizon)); }
};

struct FourBlockSystem {
  int horizon = 0;
  Alphabet e_alphabet;
  Alphabet x_alphabet;
  Alphabet y_alphabet;
  Alphabet u_alphabet;
  std::vector<DeterministicMap> s1, s2, s3, s4;
  /// Law of r(0..k), p(0..k), s(0..k), q(0..k).
  JointTable exogenous;
};

/// One checked hypothesis: exact verdict plus the matching conditional
/// mutual information as a diagnostic.
struct ConditionCheck {
  std::string label;
  bool holds = true;
  double cmi = 0.0;
};

struct HypothesisReport {
  bool independence = true;
  bool markov = true;
  std::vector<ConditionCheck> conditions;

  bool all() const { return independence && markov; }
};

namespace detail {

inline void require_exogenous(const JointTable& exo, const std::vector<std::string>& sequences,
                              const std::vector<std::string>& scalars, int horizon) {
  std::size_t expected = scalars.size() + sequences.size() * static_cast<std::size_t>(horizon + 1);
  for (const auto& s : scalars)
    if (!exo.find(VariableId(s))) throw std::invalid_argument("exogenous law lacks variable " + s);
  for (const auto& s : sequences)
    for (int t = 0; t <= horizon; ++t)
      if (!exo.find(VariableId(s, t))) throw std::invalid_argument("exogenous law lacks variable " + VariableId(s, t).str());
  if (exo.width() != expected) throw std::invalid_argument("exogenous law has unexpected variables");
}

inline void require_map_count(const std::vector<DeterministicMap>& maps, int horizon, const std::string& role) {
  if (maps.size() != static_cast<std::size_t>(horizon + 1))
    throw std::invalid_argument(role + " has " + std::to_string(maps.size()) + " maps, expected " + std::to_string(horizon + 1));
}

}  // namespace detail

/// Structural checks: variable sets, map counts, alphabets and causality.
/// Totality is checked at enumeration time.
inline void validate(const ClosedLoopSystem& sys) {
  using namespace names;
  const int k = sys.horizon;
  if (k < 0) throw std::invalid_argument("horizon must be nonnegative");
  detail::require_exogenous(sys.exogenous, {d, side_e, side_d, side_ec}, {x_o}, k);
  detail::require_map_count(sys.plant, k, "plant");
  detail::require_map_count(sys.encoder, k, "encoder");
  detail::require_map_count(sys.decoder, k, "decoder");
  auto alphabet_of = [&sys](const VariableId& v) -> const Alphabet* {
    if (auto c = sys.exogenous.find(v)) return &sys.exogenous.variables()[*c].alphabet;
    if (v.name == y) return &sys.y_alphabet;
    if (v.name == s) return &sys.s_alphabet;
    if (v.name == u) return &sys.u_alphabet;
    return nullptr;
  };
  for (int i = 0; i <= k; ++i) {
    detail::check_inputs(sys.plant[i], [&](const VariableId& v) {
      return v == VariableId(x_o) || detail::is_at_or_before(v, d, i) || detail::is_at_or_before(v, u, i - 1);
    }, alphabet_of);
    detail::check_inputs(sys.encoder[i], [&](const VariableId& v) {
      return detail::is_at_or_before(v, y, i) || detail::is_at_or_before(v, side_e, i) || detail::is_at_or_before(v, side_ec, i);
    }, alphabet_of);
    detail::check_inputs(sys.decoder[i], [&](const VariableId& v) {
      return detail::is_at_or_before(v, s, i) || detail::is_at_or_before(v, side_d, i) || detail::is_at_or_before(v, side_ec, i);
    }, alphabet_of);
    if (!(sys.plant[i].output() == sys.y_alphabet)) throw std::invalid_argument("plant map " + std::to_string(i) + " output alphabet differs from y");
    if (!(sys.encoder[i].output() == sys.s_alphabet)) throw std::invalid_argument("encoder map " + std::to_string(i) + " output alphabet differs from s");
    if (!(sys.decoder[i].output() == sys.u_alphabet)) throw std::invalid_argument("decoder map " + std::to_string(i) + " output alphabet differs from u");
  }
}

inline void validate(const FourBlockSystem& sys) {
  using namespace names;
  const int k = sys.horizon;
  if (k < 0) throw std::invalid_argument("horizon must be nonnegative");
  detail::require_exogenous(sys.exogenous, {r, p, s, q}, {}, k);
  detail::require_map_count(sys.s1, k, "S1");
  detail::require_map_count(sys.s2, k, "S2");
  detail::require_map_count(sys.s3, k, "S3");
  detail::require_map_count(sys.s4, k, "S4");
  auto alphabet_of = [&sys](const VariableId& v) -> const Alphabet* {
    if (auto c = sys.exogenous.find(v)) return &sys.exogenous.variables()[*c].alphabet;
    if (v.name == e) return &sys.e_alphabet;
    if (v.name == x) return &sys.x_alphabet;
    if (v.name == y) return &sys.y_alphabet;
    if (v.name == u) return &sys.u_alphabet;
    return nullptr;
  };
  for (int i = 0; i <= k; ++i) {
    detail::check_inputs(sys.s1[i], [&](const VariableId& v) {
      return detail::is_at_or_before(v, r, i) || detail::is_at_or_before(v, u, i - 1);
    }, alphabet_of);
    detail::check_inputs(sys.s2[i], [&](const VariableId& v) {
      return detail::is_at_or_before(v, p, i) || detail::is_at_or_before(v, e, i);
    }, alphabet_of);
    detail::check_inputs(sys.s3[i], [&](const VariableId& v) {
      return detail::is_at_or_before(v, s, i) || detail::is_at_or_before(v, x, i);
    }, alphabet_of);
    detail::check_inputs(sys.s4[i], [&](const VariableId& v) {
      return detail::is_at_or_before(v, q, i) || detail::is_at_or_before(v, y, i);
    }, alphabet_of);
    if (!(sys.s1[i].output() == sys.e_alphabet)) throw std::invalid_argument("S1 map " + std::to_string(i) + " output alphabet differs from e");
    if (!(sys.s2[i].output() == sys.x_alphabet)) throw std::invalid_argument("S2 map " + std::to_string(i) + " output alphabet differs from x");
    if (!(sys.s3[i].output() == sys.y_alphabet)) throw std::invalid_argument("S3 map " + std::to_string(i) + " output alphabet differs from y");
    if (!(sys.s4[i].output() == sys.u_alphabet)) throw std::invalid_argument("S4 map " + std::to_string(i) + " output alphabet differs from u");
  }
}

/// Joint law of all exogenous and derived variables: exogenous columns first,
/// then y(0..k), s(0..k), u(0..k).
inline JointTable enumerate_closed_loop(const ClosedLoopSystem& sys, std::size_t cap = kDefaultEnumerationCap) {
  validate(sys);
  std::vector<Variable> derived;
  for (const auto& [name, alphabet] : {std::pair{names::y, &sys.y_alphabet}, {names::s, &sys.s_alphabet}, {names::u, &sys.u_alphabet}})
    for (int t = 0; t <= sys.horizon; ++t) derived.push_back({VariableId(name, t), *alphabet});
  std::vector<Stage> stages;
  for (int t = 0; t <= sys.horizon; ++t) {
    stages.push_back({VariableId(names::y, t), &sys.plant[t]});
    stages.push_back({VariableId(names::s, t), &sys.encoder[t]});
    stages.push_back({VariableId(names::u, t), &sys.decoder[t]});
  }
  return enumerate_network(sys.exogenous, derived, stages, cap);
}

/// Joint law over r, p, s, q followed by e, x, y, u (each over 0..k).
inline JointTable enumerate_four_block(const FourBlockSystem& sys, std::size_t cap = kDefaultEnumerationCap) {
  validate(sys);
  std::vector<Variable> derived;
  for (const auto& [name, alphabet] : {std::pair{names::e, &sys.e_alphabet}, {names::x, &sys.x_alphabet},
                                       {names::y, &sys.y_alphabet}, {names::u, &sys.u_alphabet}})
    for (int t = 0; t <= sys.horizon; ++t) derived.push_back({VariableId(name, t), *alphabet});
  std::vector<Stage> stages;
  for (int t = 0; t <= sys.horizon; ++t) {
    stages.push_back({VariableId(names::e, t), &sys.s1[t]});
    stages.push_back({VariableId(names::x, t), &sys.s2[t]});
    stages.push_back({VariableId(names::y, t), &sys.s3[t]});
    stages.push_back({VariableId(names::u, t), &sys.s4[t]});
  }
  return enumerate_network(sys.exogenous, derived, stages, cap);
}

namespace detail {

inline ConditionCheck check_condition(Measurer& m, std::string label, const VarSet& a, const VarSet& b, const VarSet& given) {
  return {std::move(label), m.is_independent(a, b, given), m.cond_mutual_info(a, b, given)};
}

/// Shared shape of both theorems' hypotheses: (side_a, side_b) independent of
/// the loop's other exogenous signals, and side_b's future independent of
/// side_a's past given side_b's past.
inline HypothesisReport check_side_hypotheses(const JointTable& exo, const VarSet& side_all, const VarSet& others,
                                              const std::function<VarSet(int)>& b_past,
                                              const std::function<VarSet(int)>& b_future,
                                              const std::function<VarSet(int)>& a_past, int horizon) {
  Measurer m(exo);
  HypothesisReport rep;
  auto ind = check_condition(m, "independence", side_all, others, {});
  rep.independence = ind.holds;
  rep.conditions.push_back(std::move(ind));
  for (int i = 0; i < horizon; ++i) {
    VarSet given = b_past(i);
    auto c = check_condition(m, "markov@" + std::to_string(i), b_future(i), set_difference(a_past(i), given), given);
    rep.markov = rep.markov && c.holds;
    rep.conditions.push_back(std::move(c));
  }
  return rep;
}

}  // namespace detail

/// (S_E-set^k, S_D-set^k) independent of (x_o, d^k), and for i < k
/// S_D-set(i+1..k) <-> S_D-set^i <-> S_E-set^i.
inline HypothesisReport check_hypotheses_thm3(const ClosedLoopSystem& sys) {
  validate(sys);
  const int k = sys.horizon;
  VarSet side = set_union(sys.encoder_side(k), sys.decoder_side(k));
  return detail::check_side_hypotheses(
      sys.exogenous, side, sys.plant_exogenous(), [&](int i) { return sys.decoder_side(i); },
      [&](int i) { return set_union(sequence(names::side_d, i + 1, k), sequence(names::side_ec, i + 1, k)); },
      [&](int i) { return sys.encoder_side(i); }, k);
}

/// (q^k, s^k) independent of (r^k, p^k), and for i < k q(i+1..k) <-> q^i <-> s^i.
inline HypothesisReport check_hypotheses_thm2(const FourBlockSystem& sys) {
  validate(sys);
  const int k = sys.horizon;
  return detail::check_side_hypotheses(
      sys.exogenous, set_union(prefix(names::q, k), prefix(names::s, k)), set_union(prefix(names::r, k), prefix(names::p, k)),
      [](int i) { return prefix(names::q, i); }, [&](int i) { return sequence(names::q, i + 1, k); },
      [](int i) { return prefix(names::s, i); }, k);
}

}  // namespace ratebound
