#pragma once

// Finite joint distributions over named, time-indexed variables.
//
// A JointTable keeps its support as a canonically sorted list of outcome rows.
// Probabilities are stored as unsigned integer weights over one common
// denominator, so summing out variables is exact integer addition and the
// table always sums to exactly one.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ratebound/rational.hpp"

namespace ratebound {

using Symbol = std::uint16_t;
using Outcome = std::vector<Symbol>;
using Weight = UInt128;

class Alphabet {
 public:
  Alphabet() : Alphabet(1) {}
  explicit Alphabet(std::size_t size, std::vector<std::string> labels = {}) : size_(size), labels_(std::move(labels)) {
    if (size_ < 1) throw std::invalid_argument("alphabet size must be at least 1");
    if (size_ > 0xFFFF) throw std::invalid_argument("alphabet size exceeds 65535");
    if (!labels_.empty()) {
      if (labels_.size() != size_) throw std::invalid_argument("alphabet label count does not match size");
      auto sorted = labels_;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
        throw std::invalid_argument("alphabet labels must be unique");
    }
  }

  std::size_t size() const { return size_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool contains(std::size_t symbol) const { return symbol < size_; }

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::size_t size_;
  std::vector<std::string> labels_;
};

/// Name plus optional time index; "x_o" has no time, "y(3)" does.
struct VariableId {
  std::string name;
  std::optional<int> time;

  VariableId() = default;
  VariableId(std::string n) : name(std::move(n)) {}  // NOLINT(google-explicit-constructor)
  VariableId(const char* n) : name(n) {}             // NOLINT(google-explicit-constructor)
  VariableId(std::string n, int t) : name(std::move(n)), time(t) {}

  std::string str() const { return time ? name + "(" + std::to_string(*time) + ")" : name; }

  /// Inverse of str(): "name" or "name(t)".
  static VariableId parse(const std::string& text) {
    auto open = text.find('(');
    if (open == std::string::npos) {
      if (text.empty() || text.find(')') != std::string::npos) throw std::invalid_argument("malformed variable '" + text + "'");
      return VariableId(text);
    }
    if (open == 0 || text.back() != ')') throw std::invalid_argument("malformed variable '" + text + "'");
    std::string digits = text.substr(open + 1, text.size() - open - 2);
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; }))
      throw std::invalid_argument("malformed time index in '" + text + "'");
    return VariableId(text.substr(0, open), std::stoi(digits));
  }

  friend bool operator==(const VariableId&, const VariableId&) = default;
  friend auto operator<=>(const VariableId&, const VariableId&) = default;
};

using VarSet = std::vector<VariableId>;

/// name(from..to) inclusive; empty when to < from.
inline VarSet sequence(const std::string& name, int from, int to) {
  VarSet out;
  for (int t = std::max(from, 0); t <= to; ++t) out.emplace_back(name, t);
  return out;
}

/// name(0..to), the prefix name^to. Empty for to < 0.
inline VarSet prefix(const std::string& name, int to) { return sequence(name, 0, to); }

inline VarSet set_union(VarSet a, const VarSet& b) {
  for (const auto& v : b)
    if (std::find(a.begin(), a.end(), v) == a.end()) a.push_back(v);
  return a;
}

inline VarSet set_difference(const VarSet& a, const VarSet& b) {
  VarSet out;
  for (const auto& v : a)
    if (std::find(b.begin(), b.end(), v) == b.end()) out.push_back(v);
  return out;
}

inline std::string to_string(const VarSet& vars) {
  std::string s = "{";
  for (std::size_t i = 0; i < vars.size(); ++i) s += (i ? "," : "") + vars[i].str();
  return s + "}";
}

struct Variable {
  VariableId id;
  Alphabet alphabet;
};

/// Single-variable distribution.
class Pmf {
 public:
  Pmf(Alphabet alphabet, std::vector<Rational> probabilities)
      : alphabet_(std::move(alphabet)), probs_(std::move(probabilities)) {
    if (probs_.size() != alphabet_.size()) throw std::invalid_argument("pmf length does not match alphabet size");
    Rational total = 0;
    for (const auto& p : probs_) {
      if (p.is_negative()) throw std::invalid_argument("pmf has a negative probability");
      total += p;
    }
    if (total != Rational(1)) throw std::invalid_argument("pmf sums to " + total.str() + ", not 1");
  }
  explicit Pmf(const std::vector<Rational>& probabilities) : Pmf(Alphabet(probabilities.size()), probabilities) {}

  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t size() const { return probs_.size(); }
  const Rational& operator[](std::size_t i) const { return probs_.at(i); }
  const std::vector<Rational>& probabilities() const { return probs_; }

 private:
  Alphabet alphabet_;
  std::vector<Rational> probs_;
};

/// Per-entry group ids plus the total weight of each group, for a projection
/// of the table onto a subset of its columns. Group ids follow first
/// appearance in canonical row order.
struct Grouping {
  std::vector<std::uint32_t> group_of;
  std::vector<Weight> weight;
  std::vector<std::uint32_t> representative;  // first row of each group
};

class JointTable {
 public:
  JointTable() = default;

  /// Builds a table from explicit (outcome, probability) entries. Zero entries
  /// are dropped; duplicates, negative values, out-of-alphabet symbols and
  /// totals other than exactly 1 are rejected.
  static JointTable from_entries(std::vector<Variable> variables, const std::vector<std::pair<Outcome, Rational>>& entries) {
    check_variables(variables);
    UInt128 den = 1;
    for (const auto& [outcome, p] : entries) {
      if (p.is_negative()) throw std::invalid_argument("negative probability in joint table");
      if (!p.is_zero()) den = detail::lcm_u128(den, static_cast<UInt128>(p.den()));
    }
    std::vector<std::pair<Outcome, Weight>> rows;
    rows.reserve(entries.size());
    for (const auto& [outcome, p] : entries) {
      if (p.is_zero()) continue;
      rows.emplace_back(outcome, detail::checked_mul(static_cast<UInt128>(p.num()), den / static_cast<UInt128>(p.den())));
    }
    return from_weights(std::move(variables), std::move(rows), den);
  }

  /// Builds a table from integer weights over a common denominator.
  static JointTable from_weights(std::vector<Variable> variables, std::vector<std::pair<Outcome, Weight>> rows, Weight denominator) {
    check_variables(variables);
    JointTable t;
    t.vars_ = std::move(variables);
    const std::size_t width = t.vars_.size();
    std::erase_if(rows, [](const auto& r) { return r.second == 0; });
    for (const auto& [outcome, w] : rows) {
      if (outcome.size() != width)
        throw std::invalid_argument("outcome tuple has " + std::to_string(outcome.size()) + " symbols, expected " + std::to_string(width));
      for (std::size_t c = 0; c < width; ++c)
        if (!t.vars_[c].alphabet.contains(outcome[c]))
          throw std::invalid_argument("symbol " + std::to_string(outcome[c]) + " outside alphabet of " + t.vars_[c].id.str());
    }
    std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 1; i < rows.size(); ++i)
      if (rows[i].first == rows[i - 1].first) throw std::invalid_argument("duplicate outcome in joint table");
    UInt128 total = 0;
    for (const auto& r : rows) total = detail::checked_add(total, r.second);
    if (denominator == 0 || total != denominator)
      throw std::invalid_argument("joint table sums to " + Rational(static_cast<Int128>(total), static_cast<Int128>(denominator)).str() + ", not 1");
    // Reduce the common denominator.
    UInt128 g = denominator;
    for (const auto& r : rows) g = detail::gcd_u128(g, r.second);
    t.den_ = denominator / g;
    t.cells_.reserve(rows.size() * width);
    t.weights_.reserve(rows.size());
    for (const auto& [outcome, w] : rows) {
      t.cells_.insert(t.cells_.end(), outcome.begin(), outcome.end());
      t.weights_.push_back(w / g);
    }
    return t;
  }

  static JointTable point_mass(std::vector<Variable> variables, Outcome outcome) {
    std::vector<std::pair<Outcome, Weight>> rows{{std::move(outcome), 1}};
    return from_weights(std::move(variables), std::move(rows), 1);
  }

  /// Table over one variable.
  static JointTable from_pmf(VariableId id, const Pmf& pmf) {
    std::vector<std::pair<Outcome, Rational>> entries;
    for (std::size_t s = 0; s < pmf.size(); ++s) entries.push_back({Outcome{static_cast<Symbol>(s)}, pmf[s]});
    return from_entries({{std::move(id), pmf.alphabet()}}, entries);
  }

  /// Product law of two tables over disjoint variables.
  static JointTable product(const JointTable& a, const JointTable& b) {
    auto vars = a.vars_;
    for (const auto& v : b.vars_) {
      if (a.find(v.id)) throw std::invalid_argument("product of tables sharing variable " + v.id.str());
      vars.push_back(v);
    }
    std::vector<std::pair<Outcome, Weight>> rows;
    rows.reserve(a.size() * b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
      for (std::size_t j = 0; j < b.size(); ++j) {
        Outcome o(a.outcome(i).begin(), a.outcome(i).end());
        o.insert(o.end(), b.outcome(j).begin(), b.outcome(j).end());
        rows.emplace_back(std::move(o), detail::checked_mul(a.weights_[i], b.weights_[j]));
      }
    return from_weights(std::move(vars), std::move(rows), detail::checked_mul(a.den_, b.den_));
  }

  const std::vector<Variable>& variables() const { return vars_; }
  std::size_t width() const { return vars_.size(); }
  std::size_t size() const { return weights_.size(); }
  Weight denominator() const { return den_; }
  Weight weight(std::size_t row) const { return weights_[row]; }
  std::span<const Weight> weights() const { return weights_; }

  std::span<const Symbol> outcome(std::size_t row) const { return {cells_.data() + row * width(), width()}; }
  Symbol at(std::size_t row, std::size_t column) const { return cells_[row * width() + column]; }

  Rational probability(std::size_t row) const {
    return Rational(static_cast<Int128>(weights_[row]), static_cast<Int128>(den_));
  }

  /// Probability of a full outcome tuple; zero when absent.
  Rational probability_of(std::span<const Symbol> outcome) const {
    if (outcome.size() != width()) throw std::invalid_argument("outcome tuple length does not match variable count");
    std::size_t lo = 0, hi = size();
    while (lo < hi) {
      std::size_t mid = (lo + hi) / 2;
      auto row = this->outcome(mid);
      if (std::lexicographical_compare(row.begin(), row.end(), outcome.begin(), outcome.end())) lo = mid + 1;
      else hi = mid;
    }
    if (lo < size() && std::equal(outcome.begin(), outcome.end(), this->outcome(lo).begin())) return probability(lo);
    return Rational(0);
  }

  std::optional<std::size_t> find(const VariableId& id) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
      if (vars_[i].id == id) return i;
    return std::nullopt;
  }

  std::size_t index_of(const VariableId& id) const {
    auto i = find(id);
    if (!i) throw std::out_of_range("unknown variable " + id.str());
    return *i;
  }

  const Alphabet& alphabet_of(const VariableId& id) const { return vars_[index_of(id)].alphabet; }

  /// Sorted, deduplicated column indices for a variable set.
  std::vector<std::size_t> columns(const VarSet& vars) const {
    std::vector<std::size_t> cols;
    cols.reserve(vars.size());
    for (const auto& v : vars) cols.push_back(index_of(v));
    std::sort(cols.begin(), cols.end());
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());
    return cols;
  }

  JointTable marginalize(const VarSet& keep) const { return project(columns(keep)); }

  /// Table over the given (sorted) columns, in table order.
  JointTable project(const std::vector<std::size_t>& cols) const {
    std::vector<Variable> vars;
    for (auto c : cols) vars.push_back(vars_.at(c));
    Grouping g = group_by(cols);
    std::vector<std::pair<Outcome, Weight>> rows;
    rows.reserve(g.weight.size());
    for (std::size_t k = 0; k < g.weight.size(); ++k) {
      Outcome o;
      o.reserve(cols.size());
      for (auto c : cols) o.push_back(at(g.representative[k], c));
      rows.emplace_back(std::move(o), g.weight[k]);
    }
    return from_weights(std::move(vars), std::move(rows), den_);
  }

  /// Pmf of a single-variable table.
  Pmf to_pmf() const {
    if (width() != 1) throw std::invalid_argument("to_pmf requires a single-variable table");
    std::vector<Rational> probs(vars_[0].alphabet.size(), Rational(0));
    for (std::size_t r = 0; r < size(); ++r) probs[at(r, 0)] = probability(r);
    return Pmf(vars_[0].alphabet, std::move(probs));
  }

  /// Groups rows by their projection onto `cols`.
  Grouping group_by(std::span<const std::size_t> cols) const {
    Grouping g;
    g.group_of.resize(size());
    if (cols.empty()) {
      if (size() > 0) {
        g.weight.push_back(den_);
        g.representative.push_back(0);
      }
      return g;
    }
    // Mixed-radix key when the projected outcome space fits in 64 bits.
    UInt128 space = 1;
    bool packable = true;
    for (auto c : cols) {
      space *= vars_.at(c).alphabet.size();
      if (space > (UInt128{1} << 63)) {
        packable = false;
        break;
      }
    }
    auto add = [&](auto& index, auto key, std::size_t row) {
      auto [it, inserted] = index.try_emplace(std::move(key), static_cast<std::uint32_t>(g.weight.size()));
      if (inserted) {
        g.weight.push_back(0);
        g.representative.push_back(static_cast<std::uint32_t>(row));
      }
      g.group_of[row] = it->second;
      g.weight[it->second] += weights_[row];
    };
    if (packable) {
      std::unordered_map<std::uint64_t, std::uint32_t> index;
      index.reserve(size() * 2);
      for (std::size_t r = 0; r < size(); ++r) {
        std::uint64_t key = 0;
        const Symbol* row = cells_.data() + r * width();
        for (auto c : cols) key = key * vars_[c].alphabet.size() + row[c];
        add(index, key, r);
      }
    } else {
      std::map<Outcome, std::uint32_t> index;
      for (std::size_t r = 0; r < size(); ++r) {
        Outcome key;
        for (auto c : cols) key.push_back(at(r, c));
        add(index, std::move(key), r);
      }
    }
    return g;
  }

  friend bool operator==(const JointTable& a, const JointTable& b) {
    if (a.vars_.size() != b.vars_.size()) return false;
    for (std::size_t i = 0; i < a.vars_.size(); ++i)
      if (!(a.vars_[i].id == b.vars_[i].id) || !(a.vars_[i].alphabet == b.vars_[i].alphabet)) return false;
    return a.den_ == b.den_ && a.cells_ == b.cells_ && a.weights_ == b.weights_;
  }

 private:
  static void check_variables(const std::vector<Variable>& vars) {
    for (std::size_t i = 0; i < vars.size(); ++i)
      for (std::size_t j = i + 1; j < vars.size(); ++j)
        if (vars[i].id == vars[j].id) throw std::invalid_argument("duplicate variable " + vars[i].id.str());
  }

  std::vector<Variable> vars_;
  std::vector<Symbol> cells_;
  std::vector<Weight> weights_;
  Weight den_ = 1;
};

/// Fails with the missing variable's name if any id is absent from the table.
inline void require_variables(const JointTable& table, const VarSet& vars) {
  for (const auto& v : vars)
    if (!table.find(v)) throw std::out_of_range("unknown variable " + v.str());
}

}  // namespace ratebound
