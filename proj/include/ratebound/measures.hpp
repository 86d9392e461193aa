#pragma once

// Entropy, mutual information and conditional mutual information in bits,
// evaluated exactly on the finite support of a JointTable.
//
// Probabilities stay exact until the final log-weighted sums. Empty variable
// sets follow the convention H({}) = 0, I({}; b) = 0, and conditioning on {}
// is unconditional.

#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratebound/joint_table.hpp"

namespace ratebound {

/// Float tolerance for inequality checks between measured quantities.
inline constexpr double kEpsilon = 1e-9;

namespace detail {

inline void require_disjoint(const std::vector<std::size_t>& a, const std::vector<std::size_t>& b, const char* what) {
  for (auto x : a)
    for (auto y : b)
      if (x == y) throw std::invalid_argument(std::string("overlapping variable sets in ") + what);
}

inline std::vector<std::size_t> merge_columns(std::vector<std::size_t> a, const std::vector<std::size_t>& b) {
  a.insert(a.end(), b.begin(), b.end());
  std::sort(a.begin(), a.end());
  a.erase(std::unique(a.begin(), a.end()), a.end());
  return a;
}

}  // namespace detail

/// Evaluates measures over one table, memoizing projections by column set.
/// Not thread safe; use one per thread.
class Measurer {
 public:
  explicit Measurer(const JointTable& table) : table_(table), log2_den_(detail::log2_u128(table.denominator())) {}

  const JointTable& table() const { return table_; }

  double entropy(const VarSet& vars) { return entropy_cols(table_.columns(vars)); }

  double cond_entropy(const VarSet& target, const VarSet& given) {
    auto t = table_.columns(target);
    auto g = table_.columns(given);
    detail::require_disjoint(t, g, "cond_entropy");
    return entropy_cols(detail::merge_columns(t, g)) - entropy_cols(g);
  }

  /// Sum over the support of m(a,b) log2(m(a,b) / (m(a) m(b))).
  double mutual_info(const VarSet& a, const VarSet& b) {
    auto ca = table_.columns(a);
    auto cb = table_.columns(b);
    detail::require_disjoint(ca, cb, "mutual_info");
    return mutual_info_cols(ca, cb);
  }

  /// I(a;b|g) = I(a; b,g) - I(a; g).
  double cond_mutual_info(const VarSet& a, const VarSet& b, const VarSet& given) {
    auto ca = table_.columns(a);
    auto cb = table_.columns(b);
    auto cg = table_.columns(given);
    detail::require_disjoint(ca, cb, "cond_mutual_info");
    detail::require_disjoint(ca, cg, "cond_mutual_info");
    detail::require_disjoint(cb, cg, "cond_mutual_info");
    if (ca.empty() || cb.empty()) return 0.0;
    return mutual_info_cols(ca, detail::merge_columns(cb, cg)) - mutual_info_cols(ca, cg);
  }

  /// The other chain-rule form, I(a,g; b) - I(g; b).
  double cond_mutual_info_alt(const VarSet& a, const VarSet& b, const VarSet& given) {
    auto ca = table_.columns(a);
    auto cb = table_.columns(b);
    auto cg = table_.columns(given);
    detail::require_disjoint(ca, cb, "cond_mutual_info");
    detail::require_disjoint(ca, cg, "cond_mutual_info");
    detail::require_disjoint(cb, cg, "cond_mutual_info");
    if (ca.empty() || cb.empty()) return 0.0;
    return mutual_info_cols(detail::merge_columns(ca, cg), cb) - mutual_info_cols(cg, cb);
  }

  /// Exact test of P(a,b,g) P(g) = P(a,g) P(b,g) on every outcome, including
  /// outcomes absent from the support.
  bool is_independent(const VarSet& a, const VarSet& b, const VarSet& given) {
    auto ca = table_.columns(a);
    auto cb = table_.columns(b);
    auto cg = table_.columns(given);
    detail::require_disjoint(ca, cb, "is_independent");
    detail::require_disjoint(ca, cg, "is_independent");
    detail::require_disjoint(cb, cg, "is_independent");
    if (ca.empty() || cb.empty()) return true;
    const Grouping& gg = grouping(cg);
    const Grouping& gag = grouping(detail::merge_columns(ca, cg));
    const Grouping& gbg = grouping(detail::merge_columns(cb, cg));
    const Grouping& gabg = grouping(detail::merge_columns(detail::merge_columns(ca, cb), cg));

    // Factorization forces the slice of each g to be the full product of
    // its a- and b-supports, so count first.
    std::vector<std::size_t> n_a(gg.weight.size(), 0), n_b(gg.weight.size(), 0), n_ab(gg.weight.size(), 0);
    for (std::size_t k = 0; k < gag.weight.size(); ++k) ++n_a[gg.group_of[gag.representative[k]]];
    for (std::size_t k = 0; k < gbg.weight.size(); ++k) ++n_b[gg.group_of[gbg.representative[k]]];
    for (std::size_t k = 0; k < gabg.weight.size(); ++k) ++n_ab[gg.group_of[gabg.representative[k]]];
    for (std::size_t g = 0; g < gg.weight.size(); ++g)
      if (n_ab[g] != n_a[g] * n_b[g]) return false;
    for (std::size_t k = 0; k < gabg.weight.size(); ++k) {
      std::size_t row = gabg.representative[k];
      auto lhs = detail::wide_mul(gabg.weight[k], gg.weight[gg.group_of[row]]);
      auto rhs = detail::wide_mul(gag.weight[gag.group_of[row]], gbg.weight[gbg.group_of[row]]);
      if (lhs != rhs) return false;
    }
    return true;
  }

  double entropy_cols(const std::vector<std::size_t>& cols) {
    if (cols.empty()) return 0.0;
    auto it = entropy_cache_.find(cols);
    if (it != entropy_cache_.end()) return it->second;
    const Grouping& g = grouping(cols);
    long double sum = 0.0L;
    for (Weight w : g.weight) sum += static_cast<long double>(w) * (log2_den_ - detail::log2_u128(w));
    double h = static_cast<double>(sum / static_cast<long double>(table_.denominator()));
    entropy_cache_.emplace(cols, h);
    return h;
  }

  double mutual_info_cols(const std::vector<std::size_t>& ca, const std::vector<std::size_t>& cb) {
    if (ca.empty() || cb.empty()) return 0.0;
    const Grouping& ga = grouping(ca);
    const Grouping& gb = grouping(cb);
    const Grouping& gab = grouping(detail::merge_columns(ca, cb));
    long double sum = 0.0L;
    for (std::size_t k = 0; k < gab.weight.size(); ++k) {
      std::size_t row = gab.representative[k];
      Weight wab = gab.weight[k];
      long double ratio = detail::log2_u128(wab) + log2_den_ - detail::log2_u128(ga.weight[ga.group_of[row]]) -
                          detail::log2_u128(gb.weight[gb.group_of[row]]);
      sum += static_cast<long double>(wab) * ratio;
    }
    return static_cast<double>(sum / static_cast<long double>(table_.denominator()));
  }

  const Grouping& grouping(const std::vector<std::size_t>& cols) {
    auto it = groupings_.find(cols);
    if (it == groupings_.end()) it = groupings_.emplace(cols, std::make_unique<Grouping>(table_.group_by(cols))).first;
    return *it->second;
  }

 private:
  const JointTable& table_;
  long double log2_den_;
  std::map<std::vector<std::size_t>, std::unique_ptr<Grouping>> groupings_;
  std::map<std::vector<std::size_t>, double> entropy_cache_;
};

inline double entropy(const JointTable& j, const VarSet& vars) { return Measurer(j).entropy(vars); }

inline double entropy(const Pmf& p) { return entropy(JointTable::from_pmf("v", p), {"v"}); }

inline double cond_entropy(const JointTable& j, const VarSet& target, const VarSet& given) {
  return Measurer(j).cond_entropy(target, given);
}

inline double mutual_info(const JointTable& j, const VarSet& a, const VarSet& b) { return Measurer(j).mutual_info(a, b); }

inline double cond_mutual_info(const JointTable& j, const VarSet& a, const VarSet& b, const VarSet& given) {
  return Measurer(j).cond_mutual_info(a, b, given);
}

inline bool is_independent(const JointTable& j, const VarSet& a, const VarSet& b, const VarSet& given = {}) {
  return Measurer(j).is_independent(a, b, given);
}

}  // namespace ratebound
