#include "slimetrail/solver.hpp"

#include <algorithm>

namespace slimetrail {

namespace {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Open-addressing table of fixed-width keys. Keys live contiguously in one
// arena; slots hold entry index + 1 (0 = empty).
class TranspositionTable {
 public:
  TranspositionTable(std::size_t words_per_key, std::size_t max_entries)
      : words_(words_per_key), max_entries_(max_entries), slots_(1024, 0) {}

  std::size_t words_per_key() const noexcept { return words_; }
  std::size_t size() const noexcept { return values_.size(); }

  std::optional<bool> find(const std::uint64_t* key, std::uint64_t hash) const {
    const std::size_t mask = slots_.size() - 1;
    for (std::size_t i = hash & mask;; i = (i + 1) & mask) {
      const std::uint32_t slot = slots_[i];
      if (slot == 0) return std::nullopt;
      const std::size_t entry = slot - 1;
      if (std::equal(key, key + words_, arena_.data() + entry * words_)) {
        return values_[entry] != 0;
      }
    }
  }

  void insert(const std::uint64_t* key, std::uint64_t hash, bool value) {
    if (values_.size() >= max_entries_) throw MemoryLimit(max_entries_);
    if ((values_.size() + 1) * 2 > slots_.size()) grow();
    const std::size_t entry = values_.size();
    arena_.insert(arena_.end(), key, key + words_);
    values_.push_back(value ? 1 : 0);
    hashes_.push_back(hash);
    place(entry, hash);
  }

 private:
  void place(std::size_t entry, std::uint64_t hash) {
    const std::size_t mask = slots_.size() - 1;
    std::size_t i = hash & mask;
    while (slots_[i] != 0) i = (i + 1) & mask;
    slots_[i] = static_cast<std::uint32_t>(entry + 1);
  }

  void grow() {
    slots_.assign(slots_.size() * 2, 0);
    for (std::size_t e = 0; e < values_.size(); ++e) place(e, hashes_[e]);
  }

  std::size_t words_;
  std::size_t max_entries_;
  std::vector<std::uint32_t> slots_;
  std::vector<std::uint64_t> arena_;
  std::vector<std::uint64_t> hashes_;
  std::vector<std::uint8_t> values_;
};

enum class MoveKind : std::uint8_t { Win, Loss, Open };

struct Candidate {
  NodeId to;
  MoveKind kind;
};

// Mutable search over one board. The position is updated in place and undone
// on the way back up.
class Search {
 public:
  Search(const GameGraph& graph, SearchBudget budget, TranspositionTable* table,
         std::uint64_t nodes_already)
      : graph_(graph),
        budget_(budget),
        table_(table),
        nodes_(nodes_already),
        frames_(graph.node_count() + 1) {
    if (table_) key_.resize(table_->words_per_key());
  }

  SolveResult solve(const GameState& state) {
    SolveResult result;
    if (state.is_terminal()) {
      result.winner = *state.status().winner;
      return result;
    }
    slimed_ = state.slimed();
    token_ = state.token();
    mover_ = state.to_move();
    const std::uint64_t nodes_before = nodes_;
    count_node();

    std::vector<Candidate> root;
    expand(root);
    if (!root.empty()) max_depth_ = 1;
    std::optional<Move> winning;
    for (const Candidate& c : root) {
      if (evaluate(c, 0)) {
        winning = Move{c.to};
        break;
      }
    }
    result.winner = winning ? mover_ : opponent(mover_);
    if (winning) {
      result.best_move = winning;
    } else if (!root.empty()) {
      result.best_move = Move{root.front().to};
    }
    result.nodes_explored = nodes_ - nodes_before;
    result.max_depth = max_depth_;
    return result;
  }

  std::uint64_t nodes() const noexcept { return nodes_; }

 private:
  void count_node() {
    if (budget_.max_nodes && nodes_ >= *budget_.max_nodes) throw BudgetExhausted(nodes_);
    ++nodes_;
  }

  // Ascending by destination, legal moves only.
  void expand(std::vector<Candidate>& out) {
    out.clear();
    const auto nbrs = graph_.neighbors(token_);
    access_.analyze(graph_, slimed_, token_, nbrs);
    for (NodeId v : nbrs) {
      if (slimed_.contains(v)) continue;
      if (auto owner = owner_of(graph_.color(v))) {
        out.push_back({v, *owner == mover_ ? MoveKind::Win : MoveKind::Loss});
        continue;
      }
      const std::uint8_t flags = access_.flags(v);
      if (flags == 0) continue;
      const std::uint8_t own = mover_ == Player::Blue ? GoalAccess::kBlue : GoalAccess::kRed;
      const std::uint8_t theirs = own ^ (GoalAccess::kBlue | GoalAccess::kRed);
      if (!(flags & theirs)) {
        out.push_back({v, MoveKind::Win});
      } else if (!(flags & own)) {
        out.push_back({v, MoveKind::Loss});
      } else {
        out.push_back({v, MoveKind::Open});
      }
    }
  }

  // Does the side to move at `depth` win by playing `c`?
  bool evaluate(const Candidate& c, unsigned depth) {
    switch (c.kind) {
      case MoveKind::Win:
        return true;
      case MoveKind::Loss:
        return false;
      case MoveKind::Open:
        break;
    }
    const NodeId from = token_;
    slimed_.insert(from);
    token_ = c.to;
    mover_ = opponent(mover_);
    const bool child_wins = mover_wins(depth + 1);
    mover_ = opponent(mover_);
    token_ = from;
    slimed_.erase(from);
    return !child_wins;
  }

  bool mover_wins(unsigned depth) {
    std::uint64_t hash = 0;
    if (table_) {
      const auto words = slimed_.words();
      std::copy(words.begin(), words.end(), key_.begin());
      key_.back() = (std::uint64_t{token_.value} << 1) | (mover_ == Player::Red ? 1 : 0);
      for (std::uint64_t w : key_) hash = mix64(hash ^ w);
      if (auto hit = table_->find(key_.data(), hash)) return *hit;
    }
    count_node();

    std::vector<Candidate>& moves = frames_[depth];
    expand(moves);
    if (!moves.empty()) max_depth_ = std::max<std::uint32_t>(max_depth_, depth + 1);

    bool wins = std::any_of(moves.begin(), moves.end(),
                            [](const Candidate& c) { return c.kind == MoveKind::Win; });
    if (!wins) {
      for (std::size_t i = 0; i < moves.size(); ++i) {
        if (moves[i].kind != MoveKind::Open) continue;
        if (evaluate(moves[i], depth)) {
          wins = true;
          break;
        }
      }
    }

    if (table_) {
      // key_ was overwritten by deeper frames; rebuild it.
      const auto words = slimed_.words();
      std::copy(words.begin(), words.end(), key_.begin());
      key_.back() = (std::uint64_t{token_.value} << 1) | (mover_ == Player::Red ? 1 : 0);
      table_->insert(key_.data(), hash, wins);
    }
    return wins;
  }

  const GameGraph& graph_;
  SearchBudget budget_;
  TranspositionTable* table_;
  std::uint64_t nodes_;
  std::uint32_t max_depth_ = 0;

  NodeSet slimed_;
  NodeId token_;
  Player mover_ = Player::Blue;

  GoalAccess access_;
  std::vector<std::vector<Candidate>> frames_;
  std::vector<std::uint64_t> key_;
};

}  // namespace

SolveResult solve_dfs(const GameState& state, SearchBudget budget) {
  Search search(state.graph(), budget, nullptr, 0);
  return search.solve(state);
}

struct MemoSolver::Impl {
  SearchBudget budget;
  MemoOptions options;
  const GameGraph* graph = nullptr;
  std::shared_ptr<const GameGraph> graph_owner;
  std::unique_ptr<TranspositionTable> table;
  std::uint64_t nodes = 0;

  TranspositionTable& table_for(const GameState& state) {
    if (graph != &state.graph()) {
      graph_owner = state.graph_ptr();
      graph = graph_owner.get();
      const std::size_t words = (graph->node_count() + 63) / 64 + 1;
      table = std::make_unique<TranspositionTable>(words, options.max_entries);
    }
    return *table;
  }
};

MemoSolver::MemoSolver(SearchBudget budget, MemoOptions options)
    : impl_(std::make_unique<Impl>()) {
  impl_->budget = budget;
  impl_->options = options;
}

MemoSolver::~MemoSolver() = default;
MemoSolver::MemoSolver(MemoSolver&&) noexcept = default;
MemoSolver& MemoSolver::operator=(MemoSolver&&) noexcept = default;

SolveResult MemoSolver::solve(const GameState& state) {
  TranspositionTable& table = impl_->table_for(state);
  Search search(state.graph(), impl_->budget, &table, impl_->nodes);
  try {
    SolveResult result = search.solve(state);
    impl_->nodes = search.nodes();
    return result;
  } catch (const BudgetExhausted&) {
    impl_->nodes = search.nodes();
    throw;
  }
}

std::vector<Move> MemoSolver::principal_variation(const GameState& state,
                                                  std::size_t max_len) {
  std::vector<Move> line;
  GameState current = state;
  while (line.size() < max_len && !current.is_terminal()) {
    const SolveResult r = solve(current);
    line.push_back(*r.best_move);
    current = apply_move(current, *r.best_move);
  }
  return line;
}

std::size_t MemoSolver::table_size() const noexcept {
  return impl_->table ? impl_->table->size() : 0;
}

std::uint64_t MemoSolver::nodes_explored() const noexcept { return impl_->nodes; }

SolveResult solve_memo(const GameState& state, SearchBudget budget, MemoOptions options) {
  MemoSolver solver(budget, options);
  return solver.solve(state);
}

std::vector<Move> principal_variation(const GameState& state, std::size_t max_len,
                                      SearchBudget budget) {
  MemoSolver solver(budget);
  return solver.principal_variation(state, max_len);
}

std::uint64_t count_positions(const GameState& state, unsigned depth) {
  if (depth == 0 || state.is_terminal()) return 1;
  std::uint64_t total = 0;
  for (Move m : legal_moves(state)) total += count_positions(apply_move(state, m), depth - 1);
  return total;
}

bool wins_within(const GameState& state, Player player, unsigned plies) {
  if (state.is_terminal()) return state.status().winner == player;
  if (plies == 0) return false;
  const auto moves = legal_moves(state);
  if (state.to_move() == player) {
    return std::any_of(moves.begin(), moves.end(), [&](Move m) {
      return wins_within(apply_move(state, m), player, plies - 1);
    });
  }
  return std::all_of(moves.begin(), moves.end(), [&](Move m) {
    return wins_within(apply_move(state, m), player, plies - 1);
  });
}

}  // namespace slimetrail
