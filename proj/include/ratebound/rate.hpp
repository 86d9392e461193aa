#pragma once

// Per-context entropy coding of the lossy encoder output s(i).
//
// At step i the entropy coder knows the context (s^{i-1}, S_EC^i). Every
// positive-probability context gets its own Huffman code for the conditional
// law of s(i); R(i) is the exact expected codeword length.

#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratebound/measures.hpp"
#include "ratebound/prefix_code.hpp"
#include "ratebound/system_model.hpp"

namespace ratebound {

struct ContextCode {
  Outcome context;  // values of StepRate::context_vars
  Rational probability;
  PrefixCode code;
  Rational expected_length;  // conditional on the context
};

struct StepRate {
  int time = 0;
  Rational rate;         // R(i)
  double entropy = 0.0;  // H(s(i) | s^{i-1}, S_EC^i)
  VarSet context_vars;   // in table column order
  std::vector<ContextCode> contexts;
  std::map<Outcome, std::size_t> context_index;

  double redundancy() const { return rate.to_double() - entropy; }
  const PrefixCode& code_for(const Outcome& context) const {
    auto it = context_index.find(context);
    if (it == context_index.end()) throw std::out_of_range("no code for context at step " + std::to_string(time));
    return contexts[it->second].code;
  }
};

struct RateReport {
  std::vector<StepRate> steps;

  /// Exact sum of R(0..upto).
  Rational total(int upto) const {
    Rational t = 0;
    for (int i = 0; i <= upto && i < static_cast<int>(steps.size()); ++i) t += steps[i].rate;
    return t;
  }
};

inline VarSet coder_context(int i) { return set_union(prefix(names::s, i - 1), prefix(names::side_ec, i)); }

inline StepRate expected_rate_step(Measurer& m, int i) {
  const JointTable& joint = m.table();
  StepRate step;
  step.time = i;
  VarSet ctx_vars = coder_context(i);
  auto ctx_cols = joint.columns(ctx_vars);
  for (auto c : ctx_cols) step.context_vars.push_back(joint.variables()[c].id);
  const std::size_t s_col = joint.index_of(VariableId(names::s, i));
  const Alphabet& s_alphabet = joint.variables()[s_col].alphabet;
  auto full_cols = detail::merge_columns(ctx_cols, {s_col});

  const Grouping& ctx = m.grouping(ctx_cols);
  const Grouping& full = m.grouping(full_cols);
  std::vector<std::vector<Weight>> per_context(ctx.weight.size(), std::vector<Weight>(s_alphabet.size(), 0));
  for (std::size_t g = 0; g < full.weight.size(); ++g) {
    std::size_t row = full.representative[g];
    per_context[ctx.group_of[row]][joint.at(row, s_col)] = full.weight[g];
  }

  Weight numerator = 0;  // sum of weight * length over (context, symbol)
  for (std::size_t c = 0; c < ctx.weight.size(); ++c) {
    std::vector<Rational> probs;
    for (Weight w : per_context[c]) probs.emplace_back(static_cast<Int128>(w), static_cast<Int128>(ctx.weight[c]));
    Pmf conditional(s_alphabet, std::move(probs));
    ContextCode cc;
    for (auto col : ctx_cols) cc.context.push_back(joint.at(ctx.representative[c], col));
    cc.probability = Rational(static_cast<Int128>(ctx.weight[c]), static_cast<Int128>(joint.denominator()));
    cc.code = huffman(conditional);
    cc.expected_length = cc.code.expected_length(conditional);
    for (std::size_t sym = 0; sym < per_context[c].size(); ++sym)
      if (per_context[c][sym] != 0)
        numerator = detail::checked_add(numerator, detail::checked_mul(per_context[c][sym], UInt128(cc.code.codeword(static_cast<Symbol>(sym)).size())));
    step.context_index.emplace(cc.context, step.contexts.size());
    step.contexts.push_back(std::move(cc));
  }
  step.rate = Rational(static_cast<Int128>(numerator), static_cast<Int128>(joint.denominator()));
  step.entropy = m.cond_entropy({VariableId(names::s, i)}, ctx_vars);
  return step;
}

inline RateReport expected_rate_sequence(Measurer& m, int horizon) {
  RateReport report;
  for (int i = 0; i <= horizon; ++i) report.steps.push_back(expected_rate_step(m, i));
  return report;
}

/// `joint` must be enumerate_closed_loop(sys).
inline RateReport expected_rate_sequence(const ClosedLoopSystem& sys, const JointTable& joint) {
  Measurer m(joint);
  return expected_rate_sequence(m, sys.horizon);
}

/// Concatenated codewords of s(0..k) along one row of the enumerated joint.
inline std::string encode_trajectory(const RateReport& report, const JointTable& joint, std::size_t row) {
  std::string bits;
  for (const auto& step : report.steps) {
    Outcome ctx;
    for (const auto& v : step.context_vars) ctx.push_back(joint.at(row, joint.index_of(v)));
    bits += step.code_for(ctx).codeword(joint.at(row, joint.index_of(VariableId(names::s, step.time))));
  }
  return bits;
}

/// Inverse of encode_trajectory given the common side information S_EC.
/// Fails if the bit string does not parse or has trailing bits.
inline std::vector<Symbol> decode_trajectory(const RateReport& report, std::string_view bits,
                                             const std::function<Symbol(const VariableId&)>& side_ec) {
  std::vector<Symbol> decoded;
  std::size_t pos = 0;
  for (const auto& step : report.steps) {
    Outcome ctx;
    for (const auto& v : step.context_vars) ctx.push_back(v.name == names::s ? decoded.at(*v.time) : side_ec(v));
    auto sym = step.code_for(ctx).decode_one(bits, pos);
    if (!sym) throw std::invalid_argument("undecodable bits at step " + std::to_string(step.time));
    decoded.push_back(*sym);
  }
  if (pos != bits.size()) throw std::invalid_argument("trailing bits after decoding");
  return decoded;
}

}  // namespace ratebound
