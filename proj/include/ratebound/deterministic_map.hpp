#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "ratebound/joint_table.hpp"

namespace ratebound {

/// Lookup table from a tuple of input variables to one output symbol.
///
/// Rows are stored densely in mixed-radix order of the input tuple (first
/// input most significant). A row without a value makes the map partial;
/// evaluating it fails with the map's name and the missing tuple.
class DeterministicMap {
 public:
  DeterministicMap() = default;
  DeterministicMap(std::string name, std::vector<Variable> inputs, Alphabet output)
      : name_(std::move(name)), inputs_(std::move(inputs)), output_(std::move(output)) {
    std::size_t rows = 1;
    for (const auto& in : inputs_) {
      rows *= in.alphabet.size();
      if (rows > (std::size_t{1} << 24)) throw std::invalid_argument("map " + name_ + " has too many input tuples");
    }
    table_.assign(rows, std::nullopt);
  }

  /// Map whose value ignores every input.
  static DeterministicMap constant(std::string name, std::vector<Variable> inputs, Alphabet output, Symbol value) {
    DeterministicMap m(std::move(name), std::move(inputs), std::move(output));
    for (std::size_t r = 0; r < m.rows(); ++r) m.table_[r] = value;
    return m;
  }

  const std::string& name() const { return name_; }
  const std::vector<Variable>& inputs() const { return inputs_; }
  const Alphabet& output() const { return output_; }
  std::size_t rows() const { return table_.size(); }

  std::size_t row_index(std::span<const Symbol> tuple) const {
    if (tuple.size() != inputs_.size()) throw std::invalid_argument("map " + name_ + " expects " + std::to_string(inputs_.size()) + " inputs");
    std::size_t r = 0;
    for (std::size_t i = 0; i < tuple.size(); ++i) {
      if (!inputs_[i].alphabet.contains(tuple[i]))
        throw std::invalid_argument("map " + name_ + ": symbol " + std::to_string(tuple[i]) + " outside alphabet of " + inputs_[i].id.str());
      r = r * inputs_[i].alphabet.size() + tuple[i];
    }
    return r;
  }

  Outcome row_tuple(std::size_t row) const {
    Outcome t(inputs_.size());
    for (std::size_t i = inputs_.size(); i-- > 0;) {
      t[i] = static_cast<Symbol>(row % inputs_[i].alphabet.size());
      row /= inputs_[i].alphabet.size();
    }
    return t;
  }

  void set(std::span<const Symbol> tuple, Symbol value) { set_row(row_index(tuple), value); }
  void set_row(std::size_t row, Symbol value) {
    if (!output_.contains(value)) throw std::invalid_argument("map " + name_ + ": output symbol " + std::to_string(value) + " outside output alphabet");
    table_.at(row) = value;
  }
  std::optional<Symbol> row_value(std::size_t row) const { return table_.at(row); }

  Symbol operator()(std::span<const Symbol> tuple) const { return lookup(row_index(tuple)); }

  Symbol lookup(std::size_t row) const {
    const auto& v = table_[row];
    if (!v) throw std::invalid_argument("map " + name_ + " is not total: no row for " + tuple_string(row_tuple(row)));
    return *v;
  }

  /// First missing row, if any.
  std::optional<Outcome> missing_tuple() const {
    for (std::size_t r = 0; r < table_.size(); ++r)
      if (!table_[r]) return row_tuple(r);
    return std::nullopt;
  }

  void require_total() const {
    if (auto t = missing_tuple()) throw std::invalid_argument("map " + name_ + " is not total: no row for " + tuple_string(*t));
  }

  std::string tuple_string(const Outcome& t) const {
    std::string s = "(";
    for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + inputs_[i].id.str() + "=" + std::to_string(t[i]);
    return s + ")";
  }

  friend bool operator==(const DeterministicMap& a, const DeterministicMap& b) {
    if (a.name_ != b.name_ || !(a.output_ == b.output_) || a.table_ != b.table_ || a.inputs_.size() != b.inputs_.size()) return false;
    for (std::size_t i = 0; i < a.inputs_.size(); ++i)
      if (!(a.inputs_[i].id == b.inputs_[i].id) || !(a.inputs_[i].alphabet == b.inputs_[i].alphabet)) return false;
    return true;
  }

 private:
  std::string name_;
  std::vector<Variable> inputs_;
  Alphabet output_;
  std::vector<std::optional<Symbol>> table_;
};

}  // namespace ratebound
