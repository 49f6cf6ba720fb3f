// Exact win/loss solving. Every line ends within m-1 plies because each move
// slimes a node, so positions are two-valued and plain depth-first search
// needs only O(m) frames of O(m) bits each.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "slimetrail/game.hpp"

namespace slimetrail {

struct SearchBudget {
  // Positions expanded before the search gives up with BudgetExhausted.
  std::optional<std::uint64_t> max_nodes;
};

struct SolveResult {
  Player winner = Player::Blue;
  // Lowest-id winning move for the side to move, or the lowest-id legal move
  // when every move loses. Absent at terminal positions.
  std::optional<Move> best_move;
  std::uint64_t nodes_explored = 0;
  // Deepest ply reached below the root.
  std::uint32_t max_depth = 0;
};

// Plain backward induction with no transposition table.
SolveResult solve_dfs(const GameState& state, SearchBudget budget = {});

struct MemoOptions {
  std::size_t max_entries = std::size_t{1} << 26;
};

// Transposition-table solver keyed by (slimed set, token, side to move).
// Gives the same winner and best move as solve_dfs. A MemoSolver keeps its
// table between calls, so repeated queries on one board are cheap; the
// budget applies to the total work done by one solver object.
class MemoSolver {
 public:
  explicit MemoSolver(SearchBudget budget = {}, MemoOptions options = {});
  ~MemoSolver();
  MemoSolver(MemoSolver&&) noexcept;
  MemoSolver& operator=(MemoSolver&&) noexcept;

  SolveResult solve(const GameState& state);
  std::vector<Move> principal_variation(const GameState& state, std::size_t max_len);

  std::size_t table_size() const noexcept;
  std::uint64_t nodes_explored() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

SolveResult solve_memo(const GameState& state, SearchBudget budget = {},
                       MemoOptions options = {});

// Repeatedly follows solve_memo's best move, stopping at a terminal position
// or after max_len moves.
std::vector<Move> principal_variation(const GameState& state, std::size_t max_len,
                                      SearchBudget budget = {});

// Number of legal move sequences of exactly `depth` plies; a line that ends
// the game earlier counts once.
std::uint64_t count_positions(const GameState& state, unsigned depth);

// True when `player` can force a win within `plies` plies from `state`.
bool wins_within(const GameState& state, Player player, unsigned plies);

}  // namespace slimetrail
