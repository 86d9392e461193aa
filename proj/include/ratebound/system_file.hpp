#pragma once

// Plain-text system definitions.
//
//   # comment
//   system closed-loop | four-block
//   horizon <k>
//   mode <side-info mode>                     (closed-loop only, optional)
//   alphabet <name> <size> [<label>...]       (one per signal name)
//   exogenous <var> <var> ...                 (e.g. x_o d(0) S_E(0))
//   <sym> <sym> ... : <num/den>               (one row per support point)
//   end
//   map <role> <t>                            (roles plant encoder decoder, or S1..S4)
//   inputs <var> ...                          (may be empty)
//   <sym> ... -> <out>                        (one row per input tuple)
//   end
//
// Symbols are 0-based indices. serialize() writes exactly this grammar with
// rows in canonical order, so canonical files round-trip unchanged.

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "ratebound/system_model.hpp"

namespace ratebound {

class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::size_t column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

using SystemDefinition = std::variant<ClosedLoopSystem, FourBlockSystem>;

namespace detail {

struct Token {
  std::string text;
  std::size_t column;
};

inline std::vector<Token> tokenize(const std::string& line) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < line.size()) {
    if (line[i] == '#') break;
    if (std::isspace(static_cast<unsigned char>(line[i]))) {
      ++i;
      continue;
    }
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])) && line[i] != '#') ++i;
    out.push_back({line.substr(start, i - start), start + 1});
  }
  return out;
}

class SystemParser {
 public:
  explicit SystemParser(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    std::size_t n = 0;
    while (std::getline(in, line)) {
      ++n;
      auto tokens = tokenize(line);
      if (!tokens.empty()) lines_.push_back({n, std::move(tokens)});
    }
  }

  SystemDefinition parse() {
    const auto& first = next("system header");
    expect_count(first, 2);
    if (first.tokens[0].text != "system") fail(first, 0, "expected 'system'");
    kind_ = first.tokens[1].text;
    if (kind_ != "closed-loop" && kind_ != "four-block") fail(first, 1, "unknown system kind '" + kind_ + "'");

    while (pos_ < lines_.size()) {
      const auto& l = lines_[pos_++];
      const std::string& key = l.tokens[0].text;
      if (key == "horizon") {
        expect_count(l, 2);
        horizon_ = parse_int(l, 1);
        if (horizon_ < 0) fail(l, 1, "horizon must be nonnegative");
      } else if (key == "mode") {
        expect_count(l, 2);
        if (kind_ != "closed-loop") fail(l, 0, "mode applies to closed-loop systems only");
        try {
          mode_ = parse_side_info_mode(l.tokens[1].text);
        } catch (const std::invalid_argument& e) {
          fail(l, 1, e.what());
        }
      } else if (key == "alphabet") {
        if (l.tokens.size() < 3) fail(l, 0, "alphabet needs a name and a size");
        int size = parse_int(l, 2);
        if (size < 1) fail(l, 2, "alphabet size must be positive");
        std::vector<std::string> labels;
        for (std::size_t i = 3; i < l.tokens.size(); ++i) labels.push_back(l.tokens[i].text);
        if (alphabets_.count(l.tokens[1].text)) fail(l, 1, "alphabet " + l.tokens[1].text + " declared twice");
        try {
          alphabets_.emplace(l.tokens[1].text, Alphabet(static_cast<std::size_t>(size), std::move(labels)));
        } catch (const std::invalid_argument& e) {
          fail(l, 2, e.what());
        }
      } else if (key == "exogenous") {
        parse_exogenous(l);
      } else if (key == "map") {
        parse_map(l);
      } else {
        fail(l, 0, "unknown directive '" + key + "'");
      }
    }
    if (horizon_ < 0) throw ParseError(first.number, 1, "missing horizon");
    if (!have_exogenous_) throw ParseError(first.number, 1, "missing exogenous block");
    return kind_ == "closed-loop" ? SystemDefinition(build_closed_loop()) : SystemDefinition(build_four_block());
  }

 private:
  struct Line {
    std::size_t number;
    std::vector<Token> tokens;
  };

  [[noreturn]] static void fail(const Line& l, std::size_t token, const std::string& msg) {
    throw ParseError(l.number, token < l.tokens.size() ? l.tokens[token].column : 1, msg);
  }

  static void expect_count(const Line& l, std::size_t n) {
    if (l.tokens.size() != n)
      fail(l, std::min(n, l.tokens.size() - 1), "expected " + std::to_string(n) + " fields, found " + std::to_string(l.tokens.size()));
  }

  const Line& next(const std::string& what) {
    if (pos_ >= lines_.size()) throw ParseError(lines_.empty() ? 1 : lines_.back().number, 1, "unexpected end of input, expected " + what);
    return lines_[pos_++];
  }

  static int parse_int(const Line& l, std::size_t i) {
    const std::string& t = l.tokens[i].text;
    if (t.empty() || t.size() > 9 || t.find_first_not_of("0123456789") != std::string::npos) fail(l, i, "expected a nonnegative integer, found '" + t + "'");
    return std::stoi(t);
  }

  Variable variable(const Line& l, std::size_t i) {
    VariableId id;
    try {
      id = VariableId::parse(l.tokens[i].text);
    } catch (const std::invalid_argument& e) {
      fail(l, i, e.what());
    }
    auto it = alphabets_.find(id.name);
    if (it == alphabets_.end()) fail(l, i, "no alphabet declared for " + id.name);
    return {id, it->second};
  }

  Outcome symbols(const Line& l, std::size_t from, std::size_t to, const std::vector<Variable>& vars) {
    if (to - from != vars.size()) fail(l, from, "expected " + std::to_string(vars.size()) + " symbols, found " + std::to_string(to - from));
    Outcome o;
    for (std::size_t i = from; i < to; ++i) {
      int v = parse_int(l, i);
      if (!vars[i - from].alphabet.contains(static_cast<std::size_t>(v))) fail(l, i, "symbol " + std::to_string(v) + " outside alphabet of " + vars[i - from].id.str());
      o.push_back(static_cast<Symbol>(v));
    }
    return o;
  }

  void parse_exogenous(const Line& header) {
    if (have_exogenous_) fail(header, 0, "second exogenous block");
    have_exogenous_ = true;
    std::vector<Variable> vars;
    for (std::size_t i = 1; i < header.tokens.size(); ++i) vars.push_back(variable(header, i));
    std::vector<std::pair<Outcome, Rational>> entries;
    std::map<Outcome, std::size_t> seen;
    while (true) {
      const auto& l = next("'end' of exogenous block");
      if (l.tokens[0].text == "end") {
        expect_count(l, 1);
        try {
          exogenous_ = JointTable::from_entries(vars, entries);
        } catch (const std::exception& e) {
          fail(l, 0, std::string("exogenous pmf rejected: ") + e.what());
        }
        return;
      }
      std::size_t colon = l.tokens.size();
      for (std::size_t i = 0; i < l.tokens.size(); ++i)
        if (l.tokens[i].text == ":") colon = i;
      if (colon + 2 != l.tokens.size()) fail(l, 0, "expected '<symbols> : <num/den>'");
      Outcome o = symbols(l, 0, colon, vars);
      if (seen.count(o)) fail(l, 0, "duplicate exogenous outcome (first on line " + std::to_string(seen[o]) + ")");
      seen[o] = l.number;
      Rational p;
      try {
        p = Rational::parse(l.tokens[colon + 1].text);
      } catch (const std::exception& e) {
        fail(l, colon + 1, std::string("malformed probability: ") + e.what());
      }
      if (p.is_negative()) fail(l, colon + 1, "negative probability");
      entries.emplace_back(std::move(o), p);
    }
  }

  void parse_map(const Line& header) {
    expect_count(header, 3);
    const std::string role = header.tokens[1].text;
    static const std::vector<std::string> closed_roles{"plant", "encoder", "decoder"};
    static const std::vector<std::string> four_roles{"S1", "S2", "S3", "S4"};
    const auto& roles = kind_ == "closed-loop" ? closed_roles : four_roles;
    auto role_it = std::find(roles.begin(), roles.end(), role);
    if (role_it == roles.end()) fail(header, 1, "unknown map role '" + role + "'");
    int t = parse_int(header, 2);
    if (horizon_ < 0) fail(header, 0, "horizon must precede maps");
    if (t > horizon_) fail(header, 2, "map time exceeds horizon");
    const std::string name = role + "(" + std::to_string(t) + ")";
    if (maps_.count({role, t})) fail(header, 1, "map " + name + " defined twice");

    static const std::map<std::string, std::string> output_of{{"plant", "y"}, {"encoder", "s"}, {"decoder", "u"},
                                                              {"S1", "e"}, {"S2", "x"}, {"S3", "y"}, {"S4", "u"}};
    auto out = alphabets_.find(output_of.at(role));
    if (out == alphabets_.end()) fail(header, 1, "no alphabet declared for " + output_of.at(role));

    const auto& in_line = next("inputs line");
    if (in_line.tokens[0].text != "inputs") fail(in_line, 0, "expected 'inputs'");
    std::vector<Variable> inputs;
    for (std::size_t i = 1; i < in_line.tokens.size(); ++i) inputs.push_back(variable(in_line, i));
    DeterministicMap map;
    try {
      map = DeterministicMap(name, inputs, out->second);
    } catch (const std::invalid_argument& e) {
      fail(in_line, 0, e.what());
    }
    std::vector<bool> seen(map.rows(), false);
    while (true) {
      const auto& l = next("'end' of map " + name);
      if (l.tokens[0].text == "end") {
        expect_count(l, 1);
        if (auto missing = map.missing_tuple()) fail(l, 0, "map " + name + " is not total: missing row " + map.tuple_string(*missing));
        break;
      }
      std::size_t arrow = l.tokens.size();
      for (std::size_t i = 0; i < l.tokens.size(); ++i)
        if (l.tokens[i].text == "->") arrow = i;
      if (arrow + 2 != l.tokens.size()) fail(l, 0, "expected '<symbols> -> <symbol>'");
      Outcome tuple = symbols(l, 0, arrow, inputs);
      int value = parse_int(l, arrow + 1);
      if (!out->second.contains(static_cast<std::size_t>(value))) fail(l, arrow + 1, "output symbol outside alphabet");
      std::size_t row = map.row_index(tuple);
      if (seen[row]) fail(l, 0, "duplicate row in map " + name);
      seen[row] = true;
      map.set_row(row, static_cast<Symbol>(value));
    }
    maps_[{role, t}] = std::move(map);
    map_lines_[name] = header.number;
  }

  std::vector<DeterministicMap> take_maps(const std::string& role) {
    std::vector<DeterministicMap> out;
    for (int t = 0; t <= horizon_; ++t) {
      auto it = maps_.find({role, t});
      if (it == maps_.end()) throw ParseError(lines_.front().number, 1, "missing map " + role + " " + std::to_string(t));
      out.push_back(std::move(it->second));
    }
    return out;
  }

  Alphabet signal(const std::string& name) {
    auto it = alphabets_.find(name);
    if (it == alphabets_.end()) throw ParseError(lines_.front().number, 1, "no alphabet declared for " + name);
    return it->second;
  }

  template <typename System>
  System checked(System sys) {
    try {
      validate(sys);
    } catch (const std::invalid_argument& e) {
      // Point at the offending map when the message names one.
      std::string msg = e.what();
      std::size_t line = lines_.front().number;
      for (const auto& [name, l] : map_lines_)
        if (msg.find("map " + name + " ") != std::string::npos) line = l;
      throw ParseError(line, 1, msg);
    }
    return sys;
  }

  ClosedLoopSystem build_closed_loop() {
    ClosedLoopSystem sys;
    sys.horizon = horizon_;
    sys.mode = mode_;
    sys.y_alphabet = signal(names::y);
    sys.s_alphabet = signal(names::s);
    sys.u_alphabet = signal(names::u);
    sys.plant = take_maps("plant");
    sys.encoder = take_maps("encoder");
    sys.decoder = take_maps("decoder");
    sys.exogenous = exogenous_;
    return checked(std::move(sys));
  }

  FourBlockSystem build_four_block() {
    FourBlockSystem sys;
    sys.horizon = horizon_;
    sys.e_alphabet = signal(names::e);
    sys.x_alphabet = signal(names::x);
    sys.y_alphabet = signal(names::y);
    sys.u_alphabet = signal(names::u);
    sys.s1 = take_maps("S1");
    sys.s2 = take_maps("S2");
    sys.s3 = take_maps("S3");
    sys.s4 = take_maps("S4");
    sys.exogenous = exogenous_;
    return checked(std::move(sys));
  }

  std::vector<Line> lines_;
  std::size_t pos_ = 0;
  std::string kind_;
  int horizon_ = -1;
  SideInfoMode mode_ = SideInfoMode::custom;
  std::map<std::string, Alphabet> alphabets_;
  bool have_exogenous_ = false;
  JointTable exogenous_;
  std::map<std::pair<std::string, int>, DeterministicMap> maps_;
  std::map<std::string, std::size_t> map_lines_;
};

inline void write_alphabet(std::ostream& out, const std::string& name, const Alphabet& a) {
  out << "alphabet " << name << ' ' << a.size();
  for (const auto& l : a.labels()) out << ' ' << l;
  out << '\n';
}

/// One alphabet per signal name; per-time alphabets must agree.
inline void write_exogenous_alphabets(std::ostream& out, const JointTable& exo) {
  std::vector<std::string> order;
  std::map<std::string, Alphabet> seen;
  for (const auto& v : exo.variables()) {
    auto it = seen.find(v.id.name);
    if (it == seen.end()) {
      seen.emplace(v.id.name, v.alphabet);
      order.push_back(v.id.name);
    } else if (!(it->second == v.alphabet)) {
      throw std::invalid_argument("cannot serialize: alphabet of " + v.id.name + " varies over time");
    }
  }
  for (const auto& n : order) write_alphabet(out, n, seen.at(n));
}

inline void write_exogenous(std::ostream& out, const JointTable& exo) {
  out << "exogenous";
  for (const auto& v : exo.variables()) out << ' ' << v.id.str();
  out << '\n';
  for (std::size_t r = 0; r < exo.size(); ++r) {
    for (auto s : exo.outcome(r)) out << s << ' ';
    out << ": " << exo.probability(r).str() << '\n';
  }
  out << "end\n";
}

inline void write_map(std::ostream& out, const std::string& role, int t, const DeterministicMap& m) {
  out << "map " << role << ' ' << t << "\ninputs";
  for (const auto& in : m.inputs()) out << ' ' << in.id.str();
  out << '\n';
  for (std::size_t r = 0; r < m.rows(); ++r) {
    auto v = m.row_value(r);
    if (!v) throw std::invalid_argument("cannot serialize partial map " + m.name());
    for (auto s : m.row_tuple(r)) out << s << ' ';
    out << "-> " << *v << '\n';
  }
  out << "end\n";
}

}  // namespace detail

inline SystemDefinition parse_system_file(const std::string& text) { return detail::SystemParser(text).parse(); }

inline std::string serialize(const ClosedLoopSystem& sys) {
  std::ostringstream out;
  out << "system closed-loop\nhorizon " << sys.horizon << "\nmode " << to_string(sys.mode) << '\n';
  detail::write_alphabet(out, names::y, sys.y_alphabet);
  detail::write_alphabet(out, names::s, sys.s_alphabet);
  detail::write_alphabet(out, names::u, sys.u_alphabet);
  detail::write_exogenous_alphabets(out, sys.exogenous);
  detail::write_exogenous(out, sys.exogenous);
  for (int t = 0; t <= sys.horizon; ++t) {
    detail::write_map(out, "plant", t, sys.plant[t]);
    detail::write_map(out, "encoder", t, sys.encoder[t]);
    detail::write_map(out, "decoder", t, sys.decoder[t]);
  }
  return out.str();
}

inline std::string serialize(const FourBlockSystem& sys) {
  std::ostringstream out;
  out << "system four-block\nhorizon " << sys.horizon << '\n';
  detail::write_alphabet(out, names::e, sys.e_alphabet);
  detail::write_alphabet(out, names::x, sys.x_alphabet);
  detail::write_alphabet(out, names::y, sys.y_alphabet);
  detail::write_alphabet(out, names::u, sys.u_alphabet);
  detail::write_exogenous_alphabets(out, sys.exogenous);
  detail::write_exogenous(out, sys.exogenous);
  for (int t = 0; t <= sys.horizon; ++t) {
    detail::write_map(out, "S1", t, sys.s1[t]);
    detail::write_map(out, "S2", t, sys.s2[t]);
    detail::write_map(out, "S3", t, sys.s3[t]);
    detail::write_map(out, "S4", t, sys.s4[t]);
  }
  return out.str();
}

inline std::string serialize(const SystemDefinition& def) {
  return std::visit([](const auto& sys) { return serialize(sys); }, def);
}

}  // namespace ratebound
