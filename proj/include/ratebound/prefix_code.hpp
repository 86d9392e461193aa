#pragma once

#include <map>
#include <memory>
#include <optional>
#include <queue>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ratebound/joint_table.hpp"

namespace ratebound {

/// Binary codewords keyed by symbol. Symbols without a codeword are never
/// emitted (zero probability).
class PrefixCode {
 public:
  PrefixCode() = default;
  explicit PrefixCode(std::map<Symbol, std::string> codewords) : words_(std::move(codewords)) {}

  const std::map<Symbol, std::string>& codewords() const { return words_; }
  bool has(Symbol s) const { return words_.count(s) != 0; }
  const std::string& codeword(Symbol s) const {
    auto it = words_.find(s);
    if (it == words_.end()) throw std::out_of_range("no codeword for symbol " + std::to_string(s));
    return it->second;
  }

  /// Exact expected codeword length under `p`.
  Rational expected_length(const Pmf& p) const {
    Rational total = 0;
    for (std::size_t s = 0; s < p.size(); ++s)
      if (!p[s].is_zero()) total += p[s] * Rational(static_cast<std::int64_t>(codeword(static_cast<Symbol>(s)).size()));
    return total;
  }

  /// Reads one codeword starting at `pos`; advances `pos` past it.
  std::optional<Symbol> decode_one(std::string_view bits, std::size_t& pos) const {
    for (const auto& [symbol, word] : words_) {
      if (bits.substr(pos, word.size()) == word) {
        pos += word.size();
        return symbol;
      }
    }
    return std::nullopt;
  }

  friend bool operator==(const PrefixCode&, const PrefixCode&) = default;

 private:
  std::map<Symbol, std::string> words_;
};

/// Exact Kraft sum and pairwise prefix check. Empty or non-binary words fail.
inline bool verify_kraft(const PrefixCode& code) {
  Rational kraft = 0;
  for (const auto& [symbol, word] : code.codewords()) {
    if (word.empty() || word.size() > 120) return false;
    if (word.find_first_not_of("01") != std::string::npos) return false;
    kraft += Rational(1, Int128{1} << word.size());
  }
  if (kraft > Rational(1)) return false;
  for (const auto& [a, wa] : code.codewords())
    for (const auto& [b, wb] : code.codewords())
      if (a != b && wb.size() >= wa.size() && wb.compare(0, wa.size(), wa) == 0) return false;
  return true;
}

/// Optimal binary prefix code for the positive-probability symbols of `p`.
///
/// The two lowest-probability nodes merge first; ties go to the smaller node
/// index, where symbols take indices 0..n-1 and merged nodes continue from n
/// in merge order. The first node taken gets bit 0. A lone symbol gets "0".
inline PrefixCode huffman(const Pmf& p) {
  struct Node {
    Rational prob;
    std::size_t index;
    int left = -1;
    int right = -1;
    Symbol symbol = 0;
  };
  std::vector<Node> nodes;
  for (std::size_t s = 0; s < p.size(); ++s)
    if (!p[s].is_zero()) nodes.push_back({p[s], s, -1, -1, static_cast<Symbol>(s)});
  if (nodes.empty()) throw std::invalid_argument("huffman: pmf has no positive-probability symbol");
  if (nodes.size() == 1) return PrefixCode({{nodes[0].symbol, "0"}});

  auto later = [&nodes](int a, int b) {
    if (nodes[a].prob != nodes[b].prob) return nodes[a].prob > nodes[b].prob;
    return nodes[a].index > nodes[b].index;
  };
  std::priority_queue<int, std::vector<int>, decltype(later)> heap(later);
  for (std::size_t i = 0; i < nodes.size(); ++i) heap.push(static_cast<int>(i));
  std::size_t next_index = p.size();
  while (heap.size() > 1) {
    int a = heap.top();
    heap.pop();
    int b = heap.top();
    heap.pop();
    nodes.push_back({nodes[a].prob + nodes[b].prob, next_index++, a, b, 0});
    heap.push(static_cast<int>(nodes.size() - 1));
  }

  std::map<Symbol, std::string> words;
  std::vector<std::pair<int, std::string>> stack{{heap.top(), ""}};
  while (!stack.empty()) {
    auto [n, prefix] = stack.back();
    stack.pop_back();
    if (nodes[n].left < 0) {
      words[nodes[n].symbol] = prefix;
      continue;
    }
    stack.emplace_back(nodes[n].left, prefix + "0");
    stack.emplace_back(nodes[n].right, prefix + "1");
  }
  return PrefixCode(std::move(words));
}

}  // namespace ratebound
