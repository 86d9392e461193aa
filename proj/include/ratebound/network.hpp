#pragma once

// Exact enumeration of a causal network of deterministic maps driven by an
// exogenous joint law: every exogenous outcome is rolled forward once, and
// the derived signals inherit its probability.

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratebound/deterministic_map.hpp"
#include "ratebound/joint_table.hpp"

namespace ratebound {

inline constexpr std::size_t kDefaultEnumerationCap = 1'000'000;

/// One derived variable and the map producing it, in evaluation order.
struct Stage {
  VariableId output;
  const DeterministicMap* map;
};

/// Table over the exogenous variables followed by `derived`, where each
/// derived variable is computed by its stage. Stages run in the given order
/// and may only read exogenous variables or earlier stages.
inline JointTable enumerate_network(const JointTable& exogenous, const std::vector<Variable>& derived,
                                    const std::vector<Stage>& stages, std::size_t cap) {
  if (exogenous.size() > cap)
    throw std::length_error("exogenous support has " + std::to_string(exogenous.size()) +
                            " outcomes, exceeding the enumeration cap of " + std::to_string(cap));
  const std::size_t n_exo = exogenous.width();
  std::vector<Variable> vars = exogenous.variables();
  vars.insert(vars.end(), derived.begin(), derived.end());

  auto slot_of = [&](const VariableId& id) -> std::size_t {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if (vars[i].id == id) return i;
    throw std::invalid_argument("unknown variable " + id.str());
  };

  struct Plan {
    std::size_t target;
    std::vector<std::size_t> inputs;
    std::vector<std::size_t> radix;
    const DeterministicMap* map;
  };
  std::vector<Plan> plan;
  std::vector<bool> ready(vars.size(), false);
  for (std::size_t i = 0; i < n_exo; ++i) ready[i] = true;
  for (const auto& st : stages) {
    st.map->require_total();
    Plan p{slot_of(st.output), {}, {}, st.map};
    if (ready[p.target]) throw std::invalid_argument("variable " + st.output.str() + " is produced twice");
    if (!(vars[p.target].alphabet == st.map->output()))
      throw std::invalid_argument("map " + st.map->name() + " output alphabet does not match " + st.output.str());
    for (const auto& in : st.map->inputs()) {
      std::size_t slot = slot_of(in.id);
      if (!ready[slot]) throw std::invalid_argument("map " + st.map->name() + " reads " + in.id.str() + " before it is produced");
      if (!(vars[slot].alphabet == in.alphabet))
        throw std::invalid_argument("map " + st.map->name() + " input " + in.id.str() + " has a mismatched alphabet");
      p.inputs.push_back(slot);
      p.radix.push_back(in.alphabet.size());
    }
    ready[p.target] = true;
    plan.push_back(std::move(p));
  }
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (!ready[i]) throw std::invalid_argument("no stage produces " + vars[i].id.str());

  std::vector<std::pair<Outcome, Weight>> rows;
  rows.reserve(exogenous.size());
  Outcome values(vars.size());
  for (std::size_t r = 0; r < exogenous.size(); ++r) {
    auto exo = exogenous.outcome(r);
    std::copy(exo.begin(), exo.end(), values.begin());
    for (const auto& p : plan) {
      std::size_t row = 0;
      for (std::size_t k = 0; k < p.inputs.size(); ++k) row = row * p.radix[k] + values[p.inputs[k]];
      values[p.target] = p.map->lookup(row);
    }
    rows.emplace_back(values, exogenous.weight(r));
  }
  return JointTable::from_weights(std::move(vars), std::move(rows), exogenous.denominator());
}

namespace detail {

/// Checks that every input of `map` satisfies `allowed` and that every input
/// alphabet matches the alphabet the system declares for it.
inline void check_inputs(const DeterministicMap& map, const std::function<bool(const VariableId&)>& allowed,
                         const std::function<const Alphabet*(const VariableId&)>& alphabet_of) {
  for (const auto& in : map.inputs()) {
    if (!allowed(in.id)) throw std::invalid_argument("map " + map.name() + " may not read " + in.id.str());
    const Alphabet* a = alphabet_of(in.id);
    if (a == nullptr) throw std::invalid_argument("map " + map.name() + " reads unknown variable " + in.id.str());
    if (!(*a == in.alphabet)) throw std::invalid_argument("map " + map.name() + " input " + in.id.str() + " has a mismatched alphabet");
  }
}

inline bool is_at_or_before(const VariableId& v, const std::string& name, int t) {
  return v.name == name && v.time && *v.time >= 0 && *v.time <= t;
}

}  // namespace detail

}  // namespace ratebound
