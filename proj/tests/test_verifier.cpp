#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "oracle.hpp"
#include "ratebound/report.hpp"
#include "ratebound/sweep.hpp"
#include "ratebound/system_file.hpp"
#include "ratebound/verifier.hpp"

using namespace ratebound;
using namespace ratebound::names;

namespace {

std::string read(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ClosedLoopSystem load_closed(const std::string& path) { return std::get<ClosedLoopSystem>(parse_system_file(read(path))); }

const std::string kData = RATEBOUND_FIXTURES "/../../data";

/// Full chain by the oracle: sum R, the three chain sums, and I(y^k -> u^k).
struct ChainOracle {
  double l1, l2, l3, di_side, di_loop;
};

ChainOracle chain_oracle(const ClosedLoopSystem& sys, const JointTable& joint) {
  auto d = oracle::from_table(joint);
  const int k = sys.horizon;
  auto seq = [](const std::string& n, int to) {
    std::vector<std::string> out;
    for (int t = 0; t <= to; ++t) out.push_back(n + "(" + std::to_string(t) + ")");
    return out;
  };
  auto side = [&](int i) { return oracle::cat(seq(side_d, i), seq(side_ec, i)); };
  ChainOracle c{0, 0, 0, 0, 0};
  for (int i = 0; i <= k; ++i) {
    std::vector<std::string> target{"s(" + std::to_string(i) + ")"};
    auto past = seq(s, i - 1);
    auto g = oracle::cat(past, side(i));
    c.l1 += oracle::H(d, oracle::cat(target, oracle::cat(past, side(k)))) - oracle::H(d, oracle::cat(past, side(k)));
    auto gy = oracle::cat(g, seq(y, i));
    c.l2 += (oracle::H(d, oracle::cat(target, g)) - oracle::H(d, g)) - (oracle::H(d, oracle::cat(target, gy)) - oracle::H(d, gy));
    c.l3 += oracle::cmi(d, target, seq(y, i), g);
    c.di_side += oracle::cmi(d, target, seq(y, i), oracle::cat(past, side(i)));
    c.di_loop += oracle::cmi(d, {"u(" + std::to_string(i) + ")"}, seq(y, i), seq(u, i - 1));
  }
  return c;
}

}  // namespace

TEST(VerifyThm3, BundledBinaryLoopAgreesWithOracle) {
  ClosedLoopSystem sys = load_closed(kData + "/binary_loop.sys");
  VerificationReport rep = verify_thm3(sys);
  ASSERT_EQ(rep.links.size(), 6u);
  EXPECT_TRUE(rep.asserted());
  EXPECT_TRUE(rep.verdict());
  ChainOracle c = chain_oracle(sys, enumerate_closed_loop(sys));
  EXPECT_NEAR(rep.link("L1").rhs, c.l1, 1e-10);
  EXPECT_NEAR(rep.link("L2").rhs, c.l2, 1e-10);
  EXPECT_NEAR(rep.link("L3").rhs, c.l3, 1e-10);
  EXPECT_NEAR(rep.link("L4").rhs, c.di_side, 1e-10);
  EXPECT_NEAR(rep.link("L5").rhs, c.di_loop, 1e-10);
  EXPECT_EQ(*rep.link("overall").lhs_exact, Rational(3));
  EXPECT_GE(rep.link("overall").slack, 0.0);
  EXPECT_EQ(rep.prefix_links.size(), 2u);
}

TEST(VerifyThm3, ConstantEncoderCarriesNothing) {
  ClosedLoopSystem sys = load_closed(kData + "/binary_loop.sys");
  for (auto& m : sys.encoder) m = DeterministicMap::constant(m.name(), {}, sys.s_alphabet, 0);
  VerificationReport rep = verify_thm3(sys);
  EXPECT_TRUE(rep.verdict());
  EXPECT_NEAR(rep.link("overall").rhs, 0.0, 1e-12);
  EXPECT_NEAR(rep.link("L5").slack, 0.0, 1e-12);
  EXPECT_EQ(*rep.link("overall").lhs_exact, Rational(3));
}

TEST(VerifyThm2, BundledChannel) {
  auto sys = std::get<FourBlockSystem>(parse_system_file(read(kData + "/bsc_four_block.sys")));
  VerificationReport rep = verify_thm2(sys);
  ASSERT_EQ(rep.links.size(), 1u);
  EXPECT_TRUE(rep.passed());
  // Identity blocks around a BSC(1/8) with feedback through S1: both sides
  // are two channel uses.
  EXPECT_NEAR(rep.link("dpi").lhs, 2 * (1 - oracle::hb(0.125)), 1e-12);
  EXPECT_NEAR(rep.link("dpi").rhs, 2 * (1 - oracle::hb(0.125)), 1e-12);
}

TEST(VerifyThm2, BlocksIgnoringLoopInputs) {
  auto sys = std::get<FourBlockSystem>(parse_system_file(read(kData + "/bsc_four_block.sys")));
  for (auto* blocks : {&sys.s1, &sys.s2, &sys.s3, &sys.s4})
    for (auto& m : *blocks) m = DeterministicMap::constant(m.name(), {}, m.output(), 0);
  VerificationReport rep = verify_thm2(sys);
  EXPECT_NEAR(rep.link("dpi").lhs, 0.0, 1e-12);
  EXPECT_NEAR(rep.link("dpi").rhs, 0.0, 1e-12);
}

TEST(VerifyThm2, HypothesisViolationIsFlaggedNotAsserted) {
  // q(t) = r(t): side information correlated with the source.
  auto sys = std::get<FourBlockSystem>(parse_system_file(read(kData + "/bsc_four_block.sys")));
  std::vector<Variable> vars;
  std::vector<std::pair<Outcome, Rational>> rows;
  for (int t = 0; t <= 1; ++t)
    for (const auto& n : {r, p, s, q}) vars.push_back({{n, t}, Alphabet(n == s || n == r || n == q ? 2 : 1)});
  for (Symbol r0 = 0; r0 < 2; ++r0)
    for (Symbol r1 = 0; r1 < 2; ++r1) rows.push_back({{r0, 0, 0, r0, r1, 0, 0, r1}, Rational(1, 4)});
  sys.exogenous = JointTable::from_entries(vars, rows);
  VerificationReport rep = verify_thm2(sys);
  EXPECT_FALSE(rep.hypotheses.independence);
  EXPECT_FALSE(rep.asserted());
  EXPECT_TRUE(rep.passed());
  EXPECT_FALSE(rep.links.empty());
}

TEST(Counterexample, BudgetZeroAndModeNone) {
  GeneratorConfig c;
  EXPECT_FALSE(find_markov_counterexample(0, c, 0).has_value());
  c.mode = SideInfoMode::none;
  c.max_alphabet = 2;
  c.max_horizon = 1;
  EXPECT_FALSE(find_markov_counterexample(0, c, 200).has_value());
}

TEST(Counterexample, FoundAndRecomputed) {
  GeneratorConfig c;
  c.max_alphabet = 2;
  c.max_horizon = 1;
  auto cert = find_markov_counterexample(0, c, 100000);
  ASSERT_TRUE(cert.has_value());
  EXPECT_TRUE(cert->independent);
  EXPECT_GT(cert->cmi, 0.01);
  // Recompute from scratch with the oracle.
  JointTable joint = enumerate_closed_loop(cert->system);
  auto d = oracle::from_table(joint);
  std::vector<std::string> sd, ys, us;
  for (int t = 0; t <= cert->time; ++t) {
    sd.push_back("S_D(" + std::to_string(t) + ")");
    sd.push_back("S_EC(" + std::to_string(t) + ")");
    ys.push_back("y(" + std::to_string(t) + ")");
    if (t < cert->time) us.push_back("u(" + std::to_string(t) + ")");
  }
  EXPECT_NEAR(oracle::cmi(d, sd, ys, us), cert->cmi, 1e-12);
}

// The first certificate found is pinned; the search must keep finding a
// certificate that serializes to the same file.
TEST(Counterexample, PinnedFixture) {
  const std::string pinned = read(RATEBOUND_FIXTURES "/markov_counterexample.sys");
  ASSERT_FALSE(pinned.empty());
  ClosedLoopSystem sys = std::get<ClosedLoopSystem>(parse_system_file(pinned));
  MarkovProbe probe = probe_markov_chain(sys);
  EXPECT_TRUE(probe.independent);
  EXPECT_EQ(probe.time, 1);
  EXPECT_NEAR(probe.cmi, 1.0 - oracle::hb(0.25), 1e-12);

  // Exact factorization of S_D^k against (x_o, d^k), checked row by row.
  JointTable exo = sys.exogenous;
  VarSet side = sys.decoder_side(sys.horizon), plant = sys.plant_exogenous();
  JointTable both = exo.marginalize(set_union(side, plant)), ms = exo.marginalize(side), mp = exo.marginalize(plant);
  for (std::size_t a = 0; a < ms.size(); ++a)
    for (std::size_t b = 0; b < mp.size(); ++b) {
      std::map<VariableId, Symbol> v;
      for (std::size_t c = 0; c < ms.width(); ++c) v[ms.variables()[c].id] = ms.at(a, c);
      for (std::size_t c = 0; c < mp.width(); ++c) v[mp.variables()[c].id] = mp.at(b, c);
      Outcome row;
      for (const auto& var : both.variables()) row.push_back(v.at(var.id));
      EXPECT_EQ(both.probability_of(row), ms.probability(a) * mp.probability(b));
    }

  GeneratorConfig c;
  c.max_alphabet = 2;
  c.max_horizon = 2;
  auto cert = find_markov_counterexample(0, c, 100000);
  ASSERT_TRUE(cert.has_value());
  std::string header = pinned.substr(0, pinned.find('\n') + 1);
  EXPECT_EQ(serialize(cert->system), pinned.substr(header.size()));
}

TEST(Sweep, SingleItemMatchesDirectVerify) {
  SweepConfig sc;
  SweepReport rep = sweep(17, sc, 1);
  ASSERT_EQ(rep.entries.size(), 1u);
  VerificationReport direct = verify_thm3(random_system(17, sc.generator));
  EXPECT_EQ(verification_csv("seed:17", *rep.entries[0].report), verification_csv("seed:17", direct));
}

TEST(Sweep, ReplayOfSerializedExtremal) {
  SweepConfig sc;
  SweepReport rep = sweep(0, sc, 30);
  ASSERT_TRUE(rep.extremal_seed().has_value());
  ClosedLoopSystem sys = random_system(*rep.extremal_seed(), sc.generator);
  auto replayed = std::get<ClosedLoopSystem>(parse_system_file(serialize(sys)));
  EXPECT_EQ(verification_csv("x", verify_thm3(replayed)), verification_csv("x", verify_thm3(sys)));
  EXPECT_DOUBLE_EQ(verify_thm3(replayed).link("overall").slack, rep.extremes.at("overall").min_slack);
}

TEST(Sweep, JobsDoNotChangeOutput) {
  SweepConfig one, four;
  four.jobs = 4;
  EXPECT_EQ(sweep_csv(sweep(3, one, 40)), sweep_csv(sweep(3, four, 40)));
  one.theorem = four.theorem = 2;
  EXPECT_EQ(sweep_csv(sweep(3, one, 40)), sweep_csv(sweep(3, four, 40)));
}

TEST(Sweep, ErrorsAreRecorded) {
  SweepConfig sc;
  sc.generator.cap = 2;  // below the atom budget: every item fails
  SweepReport rep = sweep(0, sc, 3);
  EXPECT_EQ(rep.errors, 3u);
  EXPECT_FALSE(rep.all_passed());
  EXPECT_NE(rep.entries[1].error.find("cap"), std::string::npos);
  EXPECT_THROW(sweep(0, SweepConfig{}, 0), std::invalid_argument);
}
