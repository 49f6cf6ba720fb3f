#include <gtest/gtest.h>

#include <set>

#include "slimetrail/qbf.hpp"
#include "slimetrail/verify.hpp"

namespace slimetrail::verify {
namespace {

qbf::QuantifiedFormula formula(const char* text) { return qbf::parse_qdimacs(text); }

TEST(VerifyReduction, SingleTrueClause) {
  const VerifyReport r = verify_reduction(formula("p cnf 1 1\ne 1 0\n1 0\n"));
  EXPECT_TRUE(r.qbf_value);
  ASSERT_TRUE(r.game);
  EXPECT_EQ(r.game->winner, Player::Blue);
  EXPECT_TRUE(r.agree);
  EXPECT_TRUE(r.planar);
}

TEST(VerifyReduction, ContradictionIsARedWin) {
  const VerifyReport r = verify_reduction(formula("p cnf 1 2\ne 1 0\n1 0\n-1 0\n"));
  EXPECT_FALSE(r.qbf_value);
  ASSERT_TRUE(r.game);
  EXPECT_EQ(r.game->winner, Player::Red);
  EXPECT_TRUE(r.agree);
}

TEST(VerifyReduction, ForAllOverBothPolarities) {
  const VerifyReport r = verify_reduction(formula("p cnf 2 2\ne 1 0\na 2 0\n1 2 0\n1 -2 0\n"));
  EXPECT_TRUE(r.qbf_value);
  EXPECT_EQ(r.game->winner, Player::Blue);
  EXPECT_TRUE(r.agree);
  EXPECT_EQ(r.crossover_count, 1u);
  // The reported line is legal and ends where the solver says.
  GameState s = reduce::compile(formula("p cnf 2 2\ne 1 0\na 2 0\n1 2 0\n1 -2 0\n")).state0;
  for (const Move& m : r.game->pv) s = apply_move(s, m);
  ASSERT_TRUE(s.is_terminal());
  EXPECT_EQ(s.status().winner, Player::Blue);
  EXPECT_LE(r.game->max_depth + 1, r.node_count);
}

TEST(VerifyReduction, ExhaustionIsReportedNotSwallowed) {
  const VerifyReport r = verify_reduction(formula("p cnf 1 1\ne 1 0\n1 0\n"), SearchBudget{5});
  EXPECT_TRUE(r.exhausted);
  EXPECT_FALSE(r.game);
  EXPECT_FALSE(r.agree);
  EXPECT_NE(format_report(r).find("budget exhausted"), std::string::npos);
}

TEST(VerifyReduction, LeadingForAllIsNormalized) {
  const VerifyReport r = verify_reduction(formula("p cnf 1 1\na 1 0\n1 0\n"));
  EXPECT_EQ(r.dummies, 1u);
  EXPECT_EQ(r.variables, 2u);
  EXPECT_FALSE(r.qbf_value);
  EXPECT_TRUE(r.agree);
}

TEST(VerifyReduction, TextAndJsonCarryTheSameVerdict) {
  const VerifyReport r = verify_reduction(formula("p cnf 1 1\ne 1 0\n1 0\n"));
  const std::string text = format_report(r);
  EXPECT_NE(text.find("agree: true"), std::string::npos) << text;
  EXPECT_NE(text.find(format_game_side(*r.game)), std::string::npos);
  const std::string json = report_json(r);
  EXPECT_NE(json.find("\"agree\": true"), std::string::npos) << json;
}

// Appending an unused variable of the next quantifier never changes the
// outcome of the check.
TEST(VerifyReduction, DummyVariableNeutrality) {
  for (const auto& f : enumerate_formulas(2, 2, 2)) {
    qbf::QuantifiedFormula g = f;
    g.num_vars += 1;
    const qbf::Quantifier next = g.prefix.back().quantifier == qbf::Quantifier::Exists
                                     ? qbf::Quantifier::ForAll
                                     : qbf::Quantifier::Exists;
    g.prefix.push_back({g.num_vars, next});
    const VerifyReport a = verify_reduction(f);
    const VerifyReport b = verify_reduction(g);
    ASSERT_TRUE(a.agree) << qbf::describe(f);
    ASSERT_TRUE(b.agree) << qbf::describe(g);
    EXPECT_EQ(a.qbf_value, b.qbf_value);
  }
}

TEST(Enumerate, TinyCapsGiveBothLiterals) {
  const auto fs = enumerate_formulas(1, 1, 1);
  ASSERT_EQ(fs.size(), 2u);
  EXPECT_EQ(qbf::describe(fs[0]), "E1 : (1)");
  EXPECT_EQ(qbf::describe(fs[1]), "E1 : (-1)");
}

// Independent count: over n variables there are L = 2n literals, C(L,1) +
// C(L,2) clauses of at most two distinct literals, and a formula is a
// multiset of one or two clauses.
TEST(Enumerate, CountMatchesCombinatorics) {
  std::size_t expected = 0;
  for (std::size_t n = 1; n <= 2; ++n) {
    const std::size_t l = 2 * n;
    const std::size_t c = l + l * (l - 1) / 2;
    expected += c + c * (c + 1) / 2;
  }
  const auto fs = enumerate_formulas(2, 2, 2);
  EXPECT_EQ(fs.size(), expected);
  EXPECT_EQ(fs.size(), 74u);  // frozen regression value
}

TEST(Enumerate, DeterministicAndDistinct) {
  const auto a = enumerate_formulas(2, 2, 2);
  const auto b = enumerate_formulas(2, 2, 2);
  ASSERT_EQ(a.size(), b.size());
  std::set<std::string> seen;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string text = qbf::serialize_qdimacs(a[i]);
    EXPECT_EQ(text, qbf::serialize_qdimacs(b[i]));
    EXPECT_TRUE(seen.insert(text).second) << text;
    EXPECT_TRUE(a[i].is_normalized());
  }
}

TEST(Sample, SeededDistinctAndWithinCaps) {
  const auto a = sample_formulas(3, 3, 3, 30, 1);
  const auto b = sample_formulas(3, 3, 3, 30, 1);
  ASSERT_EQ(a.size(), 30u);
  std::set<std::string> seen;
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i], b[i]);
    EXPECT_TRUE(seen.insert(qbf::serialize_qdimacs(a[i])).second);
    EXPECT_EQ(a[i].num_vars, 3u);
    EXPECT_EQ(a[i].clauses.size(), 3u);
    for (const auto& c : a[i].clauses) {
      EXPECT_GE(c.literals.size(), 1u);
      EXPECT_LE(c.literals.size(), 3u);
    }
  }
}

TEST(GameSide, FormatIsStable) {
  GameSide side;
  side.winner = Player::Red;
  EXPECT_EQ(format_game_side(side), "winner: red\nbest: -\npv:\n");
  side.best_move = Move{node(4)};
  side.pv = {Move{node(4)}, Move{node(7)}};
  EXPECT_EQ(format_game_side(side), "winner: red\nbest: 4\npv: 4 7\n");
}

// --- scenarios ----------------------------------------------------------------

TEST(Atlas, EveryScenarioPasses) {
  const auto atlas = gadget_atlas();
  EXPECT_GE(atlas.size(), 20u);
  std::set<std::string> gadgets;
  for (const Scenario& s : atlas) {
    const ScenarioResult r = run_scenario(s);
    EXPECT_TRUE(r.passed) << s.name;
    EXPECT_TRUE(r.depth_bounded) << s.name;
    for (const auto& o : r.outcomes) EXPECT_TRUE(o.passed) << s.name << ": " << o.detail;
    gadgets.insert(s.gadget);
  }
  for (const char* g : {"OddVar", "EvenVar", "Wire", "Choice", "Crossover"}) {
    EXPECT_TRUE(gadgets.count(g)) << g;
  }
}

TEST(Atlas, CoversTheRequiredClaims) {
  std::size_t wire_exits = 0, early = 0, crossover_exits = 0, open_ports = 0;
  for (const Scenario& s : gadget_atlas()) {
    for (const Assertion& a : s.assertions) {
      if (s.gadget == "Wire" && a.kind == AssertionKind::ExitNode && a.player == Player::Red) {
        ++wire_exits;
      }
      if (s.gadget == "Crossover" && a.kind == AssertionKind::ExitNode) ++crossover_exits;
      if ((s.gadget == "OddVar" || s.gadget == "EvenVar") && a.kind == AssertionKind::LosesWithin) {
        if (a.player == Player::Blue && a.plies <= 4) ++early;
        if (a.player == Player::Red && a.plies <= 3) ++open_ports;
      }
    }
  }
  EXPECT_GE(wire_exits, 2u);       // both entry parities
  EXPECT_GE(early, 4u);            // both gadgets, both sides
  EXPECT_GE(crossover_exits, 2u);  // a-route and b-route
  EXPECT_GE(open_ports, 4u);
}

TEST(Scenario, TextRoundTrip) {
  for (const Scenario& s : gadget_atlas()) {
    const std::string text = serialize_scenario(s);
    const Scenario back = parse_scenario(text);
    EXPECT_EQ(back.name, s.name);
    EXPECT_EQ(back.gadget, s.gadget);
    EXPECT_EQ(back.harness, s.harness);
    EXPECT_EQ(back.prefix, s.prefix);
    EXPECT_EQ(back.assertions.size(), s.assertions.size());
    EXPECT_EQ(serialize_scenario(back), text);
  }
}

constexpr const char* kTriangleScenario =
    "slimetrail v1\n"
    "node 0 plain\nnode 1 blue\nnode 2 red\n"
    "edge 0 1\nedge 0 2\nedge 1 2\n"
    "token 0\nturn blue\n"
    "name triangle\n"
    "gadget none\n";

TEST(Scenario, WinnerAndLosesWithinOnATriangle) {
  const Scenario s = parse_scenario(std::string(kTriangleScenario) +
                                    "assert winner blue\nassert loses-within red 1\n");
  const ScenarioResult r = run_scenario(s);
  EXPECT_TRUE(r.passed);
  const Scenario wrong = parse_scenario(std::string(kTriangleScenario) + "assert winner red\n");
  EXPECT_FALSE(run_scenario(wrong).passed);
}

TEST(Scenario, IllegalPrefixNamesTheMove) {
  const Scenario s = parse_scenario(std::string(kTriangleScenario) + "prefix 1 2\nassert winner blue\n");
  try {
    run_scenario(s);
    FAIL() << "expected IllegalPrefix";
  } catch (const IllegalPrefix& e) {
    EXPECT_EQ(e.index(), 1u);
  }
}

TEST(Scenario, ParseErrors) {
  EXPECT_THROW(parse_scenario(std::string(kTriangleScenario) + "assert winner green\n"), ParseError);
  EXPECT_THROW(parse_scenario(std::string(kTriangleScenario) + "assert sometimes blue\n"), ParseError);
  EXPECT_THROW(parse_scenario(std::string(kTriangleScenario) + "prefix x\nassert winner blue\n"),
               ParseError);
  // No assertions at all.
  EXPECT_THROW(parse_scenario(kTriangleScenario), ParseError);
}

}  // namespace
}  // namespace slimetrail::verify
