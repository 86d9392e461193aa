#pragma once

// Directed information with per-step forward delays, and its causally
// conditioned variant, evaluated term by term on a JointTable.

#include <stdexcept>
#include <string>
#include <vector>

#include "ratebound/measures.hpp"

namespace ratebound {

/// Nonnegative delays d(0..k), one per time step of the output sequence.
class DelayProfile {
 public:
  explicit DelayProfile(std::vector<int> delays) : delays_(std::move(delays)) {
    for (int d : delays_)
      if (d < 0) throw std::invalid_argument("delay profile entries must be nonnegative");
  }
  static DelayProfile zero(int horizon) { return DelayProfile(std::vector<int>(horizon + 1, 0)); }
  static DelayProfile constant(int horizon, int delay) { return DelayProfile(std::vector<int>(horizon + 1, delay)); }

  std::size_t size() const { return delays_.size(); }
  int operator[](std::size_t i) const { return delays_.at(i); }
  const std::vector<int>& values() const { return delays_; }

 private:
  std::vector<int> delays_;
};

/// name(0..horizon) inside some JointTable.
struct SequenceSpec {
  std::string name;
  int horizon = 0;

  VarSet prefix(int to) const { return ratebound::prefix(name, std::min(to, horizon)); }
};

/// Conditioning side information for causally conditioned directed
/// information: every sequence contributes name(0..i) at step i, every block
/// variable is available in full at every step.
struct CausalSide {
  std::vector<std::string> sequences;
  VarSet block;

  VarSet at(int i) const {
    VarSet out = block;
    for (const auto& s : sequences) out = set_union(std::move(out), ratebound::prefix(s, i));
    return out;
  }
};

struct DirectedInfoResult {
  double total = 0.0;
  std::vector<double> terms;
};

namespace detail {

inline void check_sequences(const JointTable& j, const SequenceSpec& x, const SequenceSpec& y, const DelayProfile& d) {
  if (x.horizon < 0 || y.horizon < 0) throw std::invalid_argument("sequence horizon must be nonnegative");
  if (d.size() != static_cast<std::size_t>(y.horizon) + 1)
    throw std::invalid_argument("delay profile has " + std::to_string(d.size()) + " entries, expected " +
                                std::to_string(y.horizon + 1));
  require_variables(j, x.prefix(x.horizon));
  require_variables(j, y.prefix(y.horizon));
}

}  // namespace detail

/// Sum over i of I(y(i); x^{i-d(i)} | y^{i-1}, side^i). A negative index
/// i - d(i) makes the x prefix empty and the term zero.
inline DirectedInfoResult causal_cond_directed_info(Measurer& m, const SequenceSpec& x, const SequenceSpec& y,
                                                   const CausalSide& side, const DelayProfile& d) {
  detail::check_sequences(m.table(), x, y, d);
  for (int i = 0; i <= y.horizon; ++i) require_variables(m.table(), side.at(i));
  DirectedInfoResult r;
  for (int i = 0; i <= y.horizon; ++i) {
    VarSet past = set_union(y.prefix(i - 1), side.at(i));
    // Side information may overlap the source or the output; the overlap is
    // already known and carries nothing further.
    double term = m.cond_mutual_info(set_difference({VariableId(y.name, i)}, past),
                                     set_difference(x.prefix(i - d[i]), past), past);
    r.terms.push_back(term);
    r.total += term;
  }
  return r;
}

inline DirectedInfoResult directed_info(Measurer& m, const SequenceSpec& x, const SequenceSpec& y, const DelayProfile& d) {
  return causal_cond_directed_info(m, x, y, CausalSide{}, d);
}

inline DirectedInfoResult directed_info(const JointTable& j, const SequenceSpec& x, const SequenceSpec& y, const DelayProfile& d) {
  Measurer m(j);
  return directed_info(m, x, y, d);
}

inline DirectedInfoResult causal_cond_directed_info(const JointTable& j, const SequenceSpec& x, const SequenceSpec& y,
                                                   const CausalSide& side, const DelayProfile& d) {
  Measurer m(j);
  return causal_cond_directed_info(m, x, y, side, d);
}

/// Convenience overload: side information given as one sequence.
inline DirectedInfoResult causal_cond_directed_info(const JointTable& j, const SequenceSpec& x, const SequenceSpec& y,
                                                   const SequenceSpec& e, const DelayProfile& d) {
  return causal_cond_directed_info(j, x, y, CausalSide{{e.name}, {}}, d);
}

/// Zero-delay directed information through plain joint entropies:
/// sum of [H(y^i) - H(y^{i-1})] - [H(y^i, x^i) - H(y^{i-1}, x^i)].
/// Shares no code with the conditional mutual information route.
inline DirectedInfoResult massey_check(const JointTable& j, const SequenceSpec& x, const SequenceSpec& y) {
  detail::check_sequences(j, x, y, DelayProfile::zero(y.horizon));
  auto joint_entropy = [&j](const VarSet& vars) {
    if (vars.empty()) return 0.0;
    JointTable marginal = j.marginalize(vars);
    long double h = 0.0L;
    for (std::size_t r = 0; r < marginal.size(); ++r) {
      long double p = marginal.probability(r).to_long_double();
      h -= p * std::log2(p);
    }
    return static_cast<double>(h);
  };
  DirectedInfoResult r;
  for (int i = 0; i <= y.horizon; ++i) {
    VarSet x_i = x.prefix(i);
    double h_y = joint_entropy(y.prefix(i)) - joint_entropy(y.prefix(i - 1));
    double h_y_given_x = joint_entropy(set_union(y.prefix(i), x_i)) - joint_entropy(set_union(y.prefix(i - 1), x_i));
    r.terms.push_back(h_y - h_y_given_x);
    r.total += r.terms.back();
  }
  return r;
}

}  // namespace ratebound
