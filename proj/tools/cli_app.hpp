#pragma once

// ratebound command-line front end. Kept in a header so tests can drive
// run() with in-memory streams.
//
// Exit status: 0 all checks pass, 1 an asserted check failed, 2 usage,
// parse or evaluation error.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "ratebound/ratebound.hpp"

namespace ratebound::cli {

inline constexpr int kExitPass = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitError = 2;

struct RunConfig {
  std::string subcommand;
  std::string input;
  std::uint64_t seed = 0;
  std::size_t count = 1000;
  int horizon = 3;
  int alphabet = 3;
  int side_alphabet = 2;
  std::string side_info_mode = "mixed";
  std::string four_block_mode = "memoryless";
  int theorem = 3;
  int grid = 8;
  std::size_t cap = kDefaultEnumerationCap;
  unsigned jobs = 1;
  std::string output;
  std::string format = "summary";
  double threshold = 0.01;
  std::size_t budget = 100000;
  std::string save_extremal;
  // info
  std::string measure;
  std::string a, b, given, x, y, side, delays;

  GeneratorConfig generator() const {
    GeneratorConfig g;
    g.max_horizon = horizon;
    g.max_alphabet = alphabet;
    g.max_side_alphabet = side_alphabet;
    g.grid = grid;
    g.cap = cap;
    g.atom_budget = std::min(g.atom_budget, cap);
    if (side_info_mode != "mixed") g.mode = parse_side_info_mode(side_info_mode);
    return g;
  }
};

namespace detail {

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline void emit(const RunConfig& c, const std::string& text, std::ostream& out) {
  if (c.output.empty()) {
    out << text;
    return;
  }
  std::ofstream f(c.output, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + c.output);
  f << text;
}

inline void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path);
  f << text;
}

/// "a, b(1) c(2)" -> {a, b(1), c(2)}
inline VarSet parse_vars(const std::string& text) {
  VarSet out;
  std::string tok;
  std::istringstream in(text);
  while (in >> tok) {
    std::size_t start = 0;
    while (start <= tok.size()) {
      auto comma = tok.find(',', start);
      std::string part = tok.substr(start, comma == std::string::npos ? std::string::npos : comma - start);
      if (!part.empty()) out.push_back(VariableId::parse(part));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
  }
  return out;
}

inline std::vector<std::string> split_names(const std::string& text) {
  std::vector<std::string> out;
  for (const auto& v : parse_vars(text)) out.push_back(v.str());
  return out;
}

inline JointTable enumerate(const SystemDefinition& def, std::size_t cap) {
  if (const auto* cl = std::get_if<ClosedLoopSystem>(&def)) return enumerate_closed_loop(*cl, cap);
  return enumerate_four_block(std::get<FourBlockSystem>(def), cap);
}

inline int horizon_of(const SystemDefinition& def) {
  return std::visit([](const auto& s) { return s.horizon; }, def);
}

inline DelayProfile delay_profile(const std::string& text, int horizon) {
  if (text.empty()) return DelayProfile::zero(horizon);
  std::vector<int> d;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, ',')) d.push_back(std::stoi(part));
  if (d.size() == 1) return DelayProfile::constant(horizon, d[0]);
  return DelayProfile(d);
}

inline int check_system(const RunConfig& c, std::ostream& out) {
  const auto def = parse_system_file(read_file(c.input));
  std::ostringstream text;
  if (const auto* cl = std::get_if<ClosedLoopSystem>(&def)) {
    validate(*cl);
    text << "closed-loop system, horizon " << cl->horizon << ", mode " << to_string(cl->mode) << '\n'
         << hypothesis_summary(check_hypotheses_thm3(*cl));
  } else {
    const auto& fb = std::get<FourBlockSystem>(def);
    validate(fb);
    text << "four-block system, horizon " << fb.horizon << '\n' << hypothesis_summary(check_hypotheses_thm2(fb));
  }
  emit(c, text.str(), out);
  return kExitPass;
}

inline int verify(const RunConfig& c, std::ostream& out) {
  const auto def = parse_system_file(read_file(c.input));
  VerificationReport rep;
  std::string rates;
  if (c.subcommand == "verify-thm3") {
    const auto* sys = std::get_if<ClosedLoopSystem>(&def);
    if (!sys) throw std::invalid_argument("verify-thm3 needs a closed-loop system");
    rep = verify_thm3(*sys, c.cap);
    const JointTable joint = enumerate_closed_loop(*sys, c.cap);
    rates = rate_csv(expected_rate_sequence(*sys, joint));
  } else {
    const auto* sys = std::get_if<FourBlockSystem>(&def);
    if (!sys) throw std::invalid_argument("verify-thm2 needs a four-block system");
    rep = verify_thm2(*sys, c.cap);
  }
  if (c.format == "csv") emit(c, verification_csv(c.input, rep), out);
  else emit(c, verification_summary(c.input, rep) + (rates.empty() ? "" : "rates:\n" + rates), out);
  return rep.passed() ? kExitPass : kExitFail;
}

inline int run_sweep(const RunConfig& c, std::ostream& out, std::ostream& err) {
  SweepConfig sc;
  sc.theorem = c.theorem;
  sc.generator = c.generator();
  sc.jobs = c.jobs;
  if (c.four_block_mode == "memoryless") sc.four_block_mode = FourBlockMode::memoryless;
  else if (c.four_block_mode == "rejection-sampled-general") sc.four_block_mode = FourBlockMode::rejection_sampled_general;
  else throw std::invalid_argument("unknown four-block mode '" + c.four_block_mode + "'");
  const SweepReport rep = sweep(c.seed, sc, c.count);
  emit(c, c.format == "csv" ? sweep_csv(rep) : sweep_summary(rep), out);
  if (c.format == "csv") err << sweep_summary(rep);
  if (!c.save_extremal.empty()) {
    if (auto s = rep.extremal_seed()) {
      write_text(c.save_extremal, sc.theorem == 3 ? serialize(random_system(*s, sc.generator))
                                                  : serialize(random_four_block(*s, sc.generator, sc.four_block_mode)));
    } else {
      err << "no asserted system to save\n";
    }
  }
  return rep.all_passed() ? kExitPass : kExitFail;
}

inline int counterexample(const RunConfig& c, std::ostream& out) {
  const auto cert = find_markov_counterexample(c.seed, c.generator(), c.budget, c.threshold);
  if (!cert) {
    out << "no counterexample within budget " << c.budget << '\n';
    return kExitPass;
  }
  std::ostringstream text;
  text << "# counterexample " << cert->origin << ": S_D independent of (x_o, d^k); I(S_D^i; y^i | u^{i-1}) = "
       << decimal(cert->cmi) << " bits at i = " << cert->time << '\n'
       << serialize(cert->system);
  if (c.output.empty()) {
    out << text.str();
  } else {
    write_text(c.output, text.str());
    out << "counterexample " << cert->origin << " at i = " << cert->time << ", cmi = " << decimal(cert->cmi) << '\n';
  }
  return kExitPass;
}

inline int info(const RunConfig& c, std::ostream& out) {
  const auto def = parse_system_file(read_file(c.input));
  const JointTable joint = enumerate(def, c.cap);
  Measurer m(joint);
  std::ostringstream text;
  auto di_text = [&](const DirectedInfoResult& r) {
    text << decimal(r.total) << '\n';
    for (std::size_t i = 0; i < r.terms.size(); ++i) text << "  term " << i << ": " << decimal(r.terms[i]) << '\n';
  };
  const int k = horizon_of(def);
  if (c.measure == "entropy") {
    text << decimal(m.cond_entropy(parse_vars(c.a), parse_vars(c.given))) << '\n';
  } else if (c.measure == "mi") {
    text << decimal(m.mutual_info(parse_vars(c.a), parse_vars(c.b))) << '\n';
  } else if (c.measure == "cmi") {
    text << decimal(m.cond_mutual_info(parse_vars(c.a), parse_vars(c.b), parse_vars(c.given))) << '\n';
  } else if (c.measure == "di" || c.measure == "causal-di") {
    if (c.x.empty() || c.y.empty()) throw std::invalid_argument("--x and --y name the two sequences");
    const SequenceSpec xs{c.x, k}, ys{c.y, k};
    CausalSide side;
    if (c.measure == "causal-di") side.sequences = split_names(c.side);
    side.block = parse_vars(c.given);
    di_text(causal_cond_directed_info(m, xs, ys, side, delay_profile(c.delays, k)));
  } else {
    throw std::invalid_argument("unknown measure '" + c.measure + "'");
  }
  emit(c, text.str(), out);
  return kExitPass;
}

}  // namespace detail

/// args excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Checks closed-loop rate bounds on finite systems", "ratebound"};
  app.require_subcommand(1);
  RunConfig c;

  auto add_output = [&](CLI::App* s) {
    s->add_option("--output,-o", c.output, "Write the report here instead of stdout");
    s->add_option("--format", c.format, "csv or summary")->check(CLI::IsMember({"csv", "summary"}));
  };
  auto add_generator = [&](CLI::App* s) {
    s->add_option("--horizon", c.horizon, "Largest horizon k")->check(CLI::NonNegativeNumber);
    s->add_option("--alphabet", c.alphabet, "Largest signal alphabet")->check(CLI::PositiveNumber);
    s->add_option("--side-alphabet", c.side_alphabet, "Largest side-information alphabet")->check(CLI::PositiveNumber);
    s->add_option("--side-info-mode", c.side_info_mode,
                  "mixed, none, common-only, independent-private or rejection-sampled-general")
        ->check(CLI::IsMember({"mixed", "none", "common-only", "independent-private", "rejection-sampled-general"}));
    s->add_option("--grid", c.grid, "Pmf grid q")->check(CLI::PositiveNumber);
  };

  auto* check = app.add_subcommand("check-system", "Report the side-information hypotheses of a system file");
  check->add_option("file", c.input)->required();
  add_output(check);

  for (const char* name : {"verify-thm3", "verify-thm2"}) {
    auto* v = app.add_subcommand(name, std::string(name) == std::string("verify-thm3")
                                           ? "Evaluate the closed-loop rate chain on a system file"
                                           : "Evaluate the four-block data-processing inequality on a system file");
    v->add_option("file", c.input)->required();
    v->add_option("--cap", c.cap, "Enumeration cap")->check(CLI::PositiveNumber);
    add_output(v);
  }

  auto* sw = app.add_subcommand("sweep", "Verify many generated systems");
  sw->add_option("--seed", c.seed, "First seed")->required();
  sw->add_option("--count", c.count, "Number of systems")->check(CLI::PositiveNumber);
  sw->add_option("--theorem", c.theorem, "3: closed loop, 2: four-block")->check(CLI::IsMember({2, 3}));
  sw->add_option("--four-block-mode", c.four_block_mode, "memoryless or rejection-sampled-general");
  sw->add_option("--cap", c.cap, "Enumeration cap")->check(CLI::PositiveNumber);
  sw->add_option("--jobs", c.jobs, "Worker threads")->check(CLI::PositiveNumber);
  sw->add_option("--save-extremal", c.save_extremal, "Write the system with the smallest headline slack here");
  add_generator(sw);
  add_output(sw);

  auto* cx = app.add_subcommand("find-counterexample", "Search for a broken S_D - u - y Markov chain");
  cx->add_option("--seed", c.seed, "First random seed")->required();
  cx->add_option("--budget", c.budget, "Candidate systems to try");
  cx->add_option("--threshold", c.threshold, "CMI threshold in bits")->check(CLI::NonNegativeNumber);
  cx->add_option("--cap", c.cap, "Enumeration cap")->check(CLI::PositiveNumber);
  add_generator(cx);
  cx->add_option("--output,-o", c.output, "Write the certificate system here");

  auto* in = app.add_subcommand("info", "Compute one information measure on an enumerated system");
  in->add_option("file", c.input)->required();
  in->add_option("--measure", c.measure)->required()->check(CLI::IsMember({"entropy", "mi", "cmi", "di", "causal-di"}));
  in->add_option("--a", c.a, "Variables, e.g. \"y(0),y(1)\"");
  in->add_option("--b", c.b);
  in->add_option("--given", c.given, "Conditioning variables (block side information for di)");
  in->add_option("--x", c.x, "Source sequence name");
  in->add_option("--y", c.y, "Output sequence name");
  in->add_option("--side", c.side, "Causal side sequence names");
  in->add_option("--delays", c.delays, "One delay or a comma list per step");
  in->add_option("--cap", c.cap, "Enumeration cap")->check(CLI::PositiveNumber);
  add_output(in);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? kExitPass : kExitError;
  }

  try {
    c.subcommand = app.get_subcommands().front()->get_name();
    if (c.subcommand == "check-system") return detail::check_system(c, out);
    if (c.subcommand == "verify-thm3" || c.subcommand == "verify-thm2") return detail::verify(c, out);
    if (c.subcommand == "sweep") return detail::run_sweep(c, out, err);
    if (c.subcommand == "find-counterexample") return detail::counterexample(c, out);
    return detail::info(c, out);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
}

}  // namespace ratebound::cli
