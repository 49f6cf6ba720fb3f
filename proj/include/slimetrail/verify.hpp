// Desk-scale checks of the reduction: end-to-end agreement between the
// formula's truth value and the compiled game's winner, executable gadget
// walkthroughs (scenarios), and the formula corpus they run over.

#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "slimetrail/game.hpp"
#include "slimetrail/qbf.hpp"
#include "slimetrail/reducer.hpp"
#include "slimetrail/solver.hpp"

namespace slimetrail::verify {

inline constexpr std::uint64_t kSweepBudget = 100'000'000;

// The solver's view of a position, printed identically by `solve` and by
// the game side of `verify`.
struct GameSide {
  Player winner = Player::Blue;
  std::optional<Move> best_move;
  std::vector<Move> pv;
  std::uint64_t nodes_explored = 0;
  std::uint32_t max_depth = 0;
};

// Solves with one memoizing solver and follows its best moves to the end.
GameSide solve_game_side(const GameState& state, SearchBudget budget);

// "winner: <p>\nbest: <id|->\npv: <ids>\n"
std::string format_game_side(const GameSide& side);

struct VerifyReport {
  std::string formula;
  std::size_t variables = 0;  // after normalization
  std::size_t dummies = 0;
  std::size_t clauses = 0;
  bool qbf_value = false;
  // Absent when the search budget ran out.
  std::optional<GameSide> game;
  bool agree = false;
  bool exhausted = false;
  std::uint64_t nodes_explored = 0;
  std::size_t node_count = 0;
  std::size_t crossover_count = 0;
  bool planar = false;
  double elapsed_ms = 0;  // wall time; not part of the text or JSON output
};

// Normalizes, compiles and solves `formula`, and evaluates it by brute
// force. An exhausted budget yields a report with exhausted = true, no game
// side and agree = false.
VerifyReport verify_reduction(const qbf::QuantifiedFormula& formula,
                              SearchBudget budget = SearchBudget{kSweepBudget},
                              reduce::CompileOptions options = {});

std::string format_report(const VerifyReport& report);
std::string report_json(const VerifyReport& report);

// --- scenarios --------------------------------------------------------------

enum class AssertionKind { Winner, ExitNode, LosesWithin };

struct Assertion {
  AssertionKind kind = AssertionKind::Winner;
  Player player = Player::Blue;
  // ExitNode: the gadget boundary node and the stub hanging off it.
  NodeId node;
  NodeId stub;
  // LosesWithin: ply bound counted from the end of the prefix.
  unsigned plies = 0;
};

std::string to_string(const Assertion& a);

// A gadget harness: the gadget, boundary stubs standing in for the rest of
// the game, a forced move prefix and the claims to check afterwards.
//
// ExitNode(n, p, s) claims that p is the player who moves the token out of
// the gadget from n into the stub s. It is checked twice with the stub
// rebuilt as a continuation that loses for whoever enters it, and as one that
// wins for whoever enters it; p must lose the first game and win the second.
struct Scenario {
  std::string name;
  std::string gadget;
  GameState harness;
  std::vector<Move> prefix;
  std::vector<Assertion> assertions;
};

class IllegalPrefix : public std::runtime_error {
 public:
  IllegalPrefix(std::size_t index, Move move, IllegalMoveReason reason);
  std::size_t index() const noexcept { return index_; }

 private:
  std::size_t index_;
};

struct AssertionOutcome {
  Assertion assertion;
  bool passed = false;
  std::string detail;
};

struct ScenarioResult {
  std::string name;
  bool passed = false;
  std::vector<AssertionOutcome> outcomes;
  // Every full solve stayed within node_count - 1 plies of its root.
  bool depth_bounded = true;
};

// Throws IllegalPrefix when a prefix move is illegal.
ScenarioResult run_scenario(const Scenario& scenario);

// Scenario text: the instance format plus `name <text>`, `gadget <kind>`,
// `prefix <id> ...` and one or more `assert` lines:
//   assert winner <blue|red>
//   assert exit <node> <blue|red> <stub-node>
//   assert loses-within <blue|red> <plies>
Scenario parse_scenario(std::string_view text);
std::string serialize_scenario(const Scenario& scenario);

// Walkthrough claims for every gadget, built from the gadget builders.
std::vector<Scenario> gadget_atlas();

// --- formula corpus ---------------------------------------------------------

// Every formula with prefix E x1 A x2 ... over exactly n variables
// (1 <= n <= n_max), 1..k_max clauses, each clause a set of 1..lits_max
// distinct literals in (variable, sign) order, and the clause list sorted
// (a multiset of clauses). Deterministic order, no duplicates.
std::vector<qbf::QuantifiedFormula> enumerate_formulas(unsigned n_max, unsigned k_max,
                                                       unsigned lits_max);

// `count` distinct formulas with exactly n variables and k clauses of
// 1..lits_max literals, drawn with mt19937_64(seed).
std::vector<qbf::QuantifiedFormula> sample_formulas(unsigned n, unsigned k, unsigned lits_max,
                                                    std::size_t count, std::uint64_t seed);

}  // namespace slimetrail::verify
