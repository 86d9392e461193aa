// Cross-module invariants on randomized inputs.

#include <gtest/gtest.h>

#include "ratebound/ratebound.hpp"

using namespace ratebound;

namespace {

struct Split {
  VarSet a, b, g;
};

Split random_split(Rng& rng, const JointTable& j) {
  Split s;
  for (const auto& v : j.variables()) {
    switch (rng.below(3)) {
      case 0: s.a.push_back(v.id); break;
      case 1: s.b.push_back(v.id); break;
      default: s.g.push_back(v.id); break;
    }
  }
  return s;
}

}  // namespace

TEST(IdentityProperty, ChainRuleDualForms) {
  Rng rng(100);
  for (int trial = 0; trial < 500; ++trial) {
    JointTable j = random_joint_table(rng, 4, 3);
    Measurer m(j);
    Split s = random_split(rng, j);
    EXPECT_NEAR(m.cond_mutual_info(s.a, s.b, s.g), m.cond_mutual_info_alt(s.a, s.b, s.g), 1e-9);
    // I(a; b | g) = H(b | g) - H(b | a, g)
    EXPECT_NEAR(m.cond_mutual_info(s.a, s.b, s.g), m.cond_entropy(s.b, s.g) - m.cond_entropy(s.b, set_union(s.a, s.g)), 1e-9);
    EXPECT_GE(m.cond_mutual_info(s.a, s.b, s.g), -1e-12);
    EXPECT_GE(m.mutual_info(s.a, s.b), -1e-12);
    // Conditioning reduces entropy.
    EXPECT_LE(m.cond_entropy(s.a, set_union(s.b, s.g)), m.cond_entropy(s.a, s.g) + 1e-12);
  }
}

TEST(IdentityProperty, IndependenceVerdictMatchesCmi) {
  Rng rng(101);
  for (int trial = 0; trial < 300; ++trial) {
    JointTable j = random_joint_table(rng, 4, 3, 4);
    Measurer m(j);
    Split s = random_split(rng, j);
    bool ind = m.is_independent(s.a, s.b, s.g);
    double cmi = m.cond_mutual_info(s.a, s.b, s.g);
    if (ind) EXPECT_NEAR(cmi, 0.0, 1e-9);
    else EXPECT_GT(cmi, 0.0);
  }
}

TEST(DirectedInfoProperty, MasseyDualPathOnClosedLoops) {
  GeneratorConfig c;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    ClosedLoopSystem sys = random_system(seed, c);
    JointTable j = enumerate_closed_loop(sys);
    const int k = sys.horizon;
    for (const auto& [x, y] : {std::pair{"y", "u"}, {"y", "s"}, {"s", "u"}, {"u", "y"}}) {
      double di = directed_info(j, {x, k}, {y, k}, DelayProfile::zero(k)).total;
      EXPECT_NEAR(di, massey_check(j, {x, k}, {y, k}).total, 1e-9) << seed;
    }
  }
}

TEST(VerifierProperty, ChainIsMonotoneAndPrefixesHold) {
  SweepConfig sc;
  SweepReport rep = sweep(500, sc, 150);
  EXPECT_EQ(rep.errors, 0u);
  for (const auto& e : rep.entries) {
    const auto& r = *e.report;
    ASSERT_TRUE(r.asserted()) << e.seed;
    EXPECT_TRUE(r.verdict()) << e.seed;
    std::vector<double> chain{r.link("L1").lhs, r.link("L1").rhs, r.link("L2").rhs, r.link("L3").rhs, r.link("L4").rhs,
                              r.link("L5").rhs};
    for (std::size_t i = 1; i < chain.size(); ++i) EXPECT_LE(chain[i], chain[i - 1] + 1e-9) << e.seed;
    for (const auto& l : r.prefix_links) EXPECT_GE(l.slack, -1e-9) << e.seed << " " << l.label;
  }
}

TEST(VerifierProperty, UnmetHypothesesAreNeverAsserted) {
  // Side information built from the disturbance: S_D(t) = d(t).
  GeneratorConfig c;
  c.mode = SideInfoMode::none;
  int checked = 0;
  for (std::uint64_t seed = 0; seed < 40; ++seed) {
    ClosedLoopSystem sys = random_system(seed, c);
    if (sys.exogenous.alphabet_of({"d", 0}).size() < 2) continue;
    std::vector<Variable> vars = sys.exogenous.variables();
    std::vector<std::pair<Outcome, Weight>> rows;
    std::size_t sd_col[4], d_col[4];
    for (int t = 0; t <= sys.horizon; ++t) {
      d_col[t] = sys.exogenous.index_of({"d", t});
      sd_col[t] = sys.exogenous.index_of({"S_D", t});
      vars[sd_col[t]].alphabet = vars[d_col[t]].alphabet;
    }
    for (std::size_t r = 0; r < sys.exogenous.size(); ++r) {
      auto o = sys.exogenous.outcome(r);
      Outcome row(o.begin(), o.end());
      for (int t = 0; t <= sys.horizon; ++t) row[sd_col[t]] = row[d_col[t]];
      rows.emplace_back(row, sys.exogenous.weight(r));
    }
    sys.exogenous = JointTable::from_weights(vars, rows, sys.exogenous.denominator());
    VerificationReport r = verify_thm3(sys);
    EXPECT_FALSE(r.asserted());
    EXPECT_TRUE(r.passed());
    ++checked;
  }
  EXPECT_GT(checked, 5);
}

TEST(DeterminismProperty, ReportsAreByteIdentical) {
  for (int theorem : {2, 3}) {
    SweepConfig sc;
    sc.theorem = theorem;
    EXPECT_EQ(sweep_csv(sweep(42, sc, 25)), sweep_csv(sweep(42, sc, 25)));
    EXPECT_EQ(sweep_summary(sweep(42, sc, 25)), sweep_summary(sweep(42, sc, 25)));
  }
}
