#include "slimetrail/game.hpp"

#include <algorithm>
#include <bit>
#include <string>

namespace slimetrail {

std::string_view to_string(Player p) noexcept {
  return p == Player::Blue ? "blue" : "red";
}

std::string_view to_string(NodeColor c) noexcept {
  switch (c) {
    case NodeColor::Plain:
      return "plain";
    case NodeColor::BlueGoal:
      return "blue";
    case NodeColor::RedGoal:
      return "red";
  }
  return "plain";
}

NodeSet::NodeSet(std::size_t universe)
    : universe_(universe), words_((universe + 63) / 64, 0) {}

std::size_t NodeSet::count() const noexcept {
  std::size_t total = 0;
  for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
  return total;
}

std::vector<NodeId> NodeSet::members() const {
  std::vector<NodeId> out;
  for (std::size_t i = 0; i < universe_; ++i) {
    if (contains(node(i))) out.push_back(node(i));
  }
  return out;
}

GameGraph GameGraph::create(std::vector<NodeColor> colors, std::vector<Edge> edges,
                            NodeId start,
                            std::vector<std::optional<Point>> positions) {
  const std::size_t m = colors.size();
  if (m == 0) throw InvariantViolation("graph has no nodes");
  if (start.index() >= m) throw InvariantViolation("start node out of range");
  if (colors[start.index()] != NodeColor::Plain) {
    throw InvariantViolation("start node must be plain");
  }
  if (!positions.empty() && positions.size() != m) {
    throw InvariantViolation("position count does not match node count");
  }
  positions.resize(m);

  bool has_blue = false;
  bool has_red = false;
  for (NodeColor c : colors) {
    has_blue |= c == NodeColor::BlueGoal;
    has_red |= c == NodeColor::RedGoal;
  }
  if (!has_blue) throw InvariantViolation("graph has no blue goal");
  if (!has_red) throw InvariantViolation("graph has no red goal");

  for (Edge& e : edges) {
    if (e.u.index() >= m || e.v.index() >= m) {
      throw InvariantViolation("edge endpoint out of range");
    }
    if (e.u == e.v) {
      throw InvariantViolation("self-loop at node " + std::to_string(e.u.value));
    }
    if (e.v < e.u) std::swap(e.u, e.v);
  }
  std::sort(edges.begin(), edges.end());
  if (auto dup = std::adjacent_find(edges.begin(), edges.end()); dup != edges.end()) {
    throw InvariantViolation("duplicate edge " + std::to_string(dup->u.value) +
                             "-" + std::to_string(dup->v.value));
  }

  GameGraph g;
  g.colors_ = std::move(colors);
  g.edges_ = std::move(edges);
  g.positions_ = std::move(positions);
  g.start_ = start;

  std::vector<std::size_t> degree(m, 0);
  for (const Edge& e : g.edges_) {
    ++degree[e.u.index()];
    ++degree[e.v.index()];
  }
  g.offsets_.assign(m + 1, 0);
  for (std::size_t i = 0; i < m; ++i) g.offsets_[i + 1] = g.offsets_[i] + degree[i];
  g.adjacency_.resize(g.offsets_[m]);
  std::vector<std::size_t> fill(g.offsets_.begin(), g.offsets_.end() - 1);
  for (const Edge& e : g.edges_) {
    g.adjacency_[fill[e.u.index()]++] = e.v;
    g.adjacency_[fill[e.v.index()]++] = e.u;
  }
  for (std::size_t i = 0; i < m; ++i) {
    std::sort(g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i]),
              g.adjacency_.begin() + static_cast<std::ptrdiff_t>(g.offsets_[i + 1]));
  }

  std::vector<bool> seen(m, false);
  std::vector<NodeId> stack{start};
  seen[start.index()] = true;
  std::size_t visited = 1;
  while (!stack.empty()) {
    NodeId n = stack.back();
    stack.pop_back();
    for (NodeId w : g.neighbors(n)) {
      if (!seen[w.index()]) {
        seen[w.index()] = true;
        ++visited;
        stack.push_back(w);
      }
    }
  }
  if (visited != m) throw InvariantViolation("graph is not connected");
  return g;
}

bool GameGraph::adjacent(NodeId a, NodeId b) const {
  auto nbrs = neighbors(a);
  return std::binary_search(nbrs.begin(), nbrs.end(), b);
}

void GoalAccess::analyze(const GameGraph& graph, const NodeSet& slimed,
                         NodeId blocked, std::span<const NodeId> seeds) {
  const std::size_t m = graph.node_count();
  if (stamp_.size() != m) {
    stamp_.assign(m, 0);
    component_.assign(m, 0);
    epoch_ = 0;
  }
  if (++epoch_ == 0) {
    std::fill(stamp_.begin(), stamp_.end(), 0);
    epoch_ = 1;
  }
  component_flags_.clear();

  for (NodeId seed : seeds) {
    if (seed == blocked || slimed.contains(seed) || graph.is_goal(seed)) continue;
    if (stamp_[seed.index()] == epoch_) continue;
    const auto id = static_cast<std::uint32_t>(component_flags_.size());
    std::uint8_t flags = 0;
    queue_.clear();
    queue_.push_back(seed);
    stamp_[seed.index()] = epoch_;
    component_[seed.index()] = id;
    for (std::size_t head = 0; head < queue_.size(); ++head) {
      for (NodeId w : graph.neighbors(queue_[head])) {
        if (w == blocked || slimed.contains(w)) continue;
        switch (graph.color(w)) {
          case NodeColor::BlueGoal:
            flags |= kBlue;
            continue;
          case NodeColor::RedGoal:
            flags |= kRed;
            continue;
          case NodeColor::Plain:
            break;
        }
        if (stamp_[w.index()] == epoch_) continue;
        stamp_[w.index()] = epoch_;
        component_[w.index()] = id;
        queue_.push_back(w);
      }
    }
    component_flags_.push_back(flags);
  }
}

namespace {

// Goal flags reachable from `from` (plain, unslimed) with `blocked` removed.
std::uint8_t goals_reachable(const GameGraph& graph, const NodeSet& slimed,
                             NodeId blocked, NodeId from) {
  GoalAccess access;
  const NodeId seeds[] = {from};
  access.analyze(graph, slimed, blocked, seeds);
  return access.flags(from);
}

Outcome cut_outcome(std::uint8_t flags) {
  if (!(flags & GoalAccess::kBlue)) return {Player::Red, TerminalClause::BlueGoalsCut};
  if (!(flags & GoalAccess::kRed)) return {Player::Blue, TerminalClause::RedGoalsCut};
  return {};
}

}  // namespace

GameState GameState::initial(std::shared_ptr<const GameGraph> graph, Player to_move) {
  NodeSet slimed(graph->node_count());
  const NodeId start = graph->start();
  return from_position(std::move(graph), start, to_move, std::move(slimed));
}

GameState GameState::from_position(std::shared_ptr<const GameGraph> graph,
                                   NodeId token, Player to_move, NodeSet slimed) {
  if (!graph) throw InvariantViolation("missing graph");
  const GameGraph& g = *graph;
  if (slimed.universe() != g.node_count()) {
    throw InvariantViolation("slimed set size does not match graph");
  }
  if (token.index() >= g.node_count()) throw InvariantViolation("token out of range");
  if (g.is_goal(token)) throw InvariantViolation("token on a goal node");
  if (slimed.contains(token)) throw InvariantViolation("token on a slimed node");
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (slimed.contains(node(i)) && g.is_goal(node(i))) {
      throw InvariantViolation("goal node " + std::to_string(i) + " is slimed");
    }
  }
  // The token node itself is not blocked here: it is where paths start.
  const std::uint8_t flags = goals_reachable(g, slimed, NodeId{UINT32_MAX}, token);
  if (flags == 0) throw InvariantViolation("no goal reachable from token");

  GameState s;
  s.graph_ = std::move(graph);
  s.slimed_ = std::move(slimed);
  s.token_ = token;
  s.to_move_ = to_move;
  s.status_ = cut_outcome(flags);
  return s;
}

bool operator==(const GameState& a, const GameState& b) {
  return a.token_ == b.token_ && a.to_move_ == b.to_move_ && a.status_ == b.status_ &&
         a.slimed_ == b.slimed_ &&
         (a.graph_ == b.graph_ || (a.graph_ && b.graph_ && *a.graph_ == *b.graph_));
}

std::vector<NodeId> reachable_set(const GameState& state) {
  const GameGraph& g = state.graph();
  std::vector<bool> seen(g.node_count(), false);
  std::vector<NodeId> out{state.token()};
  seen[state.token().index()] = true;
  for (std::size_t head = 0; head < out.size(); ++head) {
    const NodeId n = out[head];
    if (head > 0 && g.is_goal(n)) continue;
    for (NodeId w : g.neighbors(n)) {
      if (seen[w.index()] || state.is_slimed(w)) continue;
      seen[w.index()] = true;
      out.push_back(w);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Move> legal_moves(const GameState& state) {
  std::vector<Move> out;
  if (state.is_terminal()) return out;
  const GameGraph& g = state.graph();
  const auto nbrs = g.neighbors(state.token());
  GoalAccess access;
  access.analyze(g, state.slimed(), state.token(), nbrs);
  for (NodeId v : nbrs) {
    if (state.is_slimed(v)) continue;
    if (g.is_goal(v) || access.flags(v) != 0) out.push_back(Move{v});
  }
  return out;
}

std::optional<IllegalMoveReason> check_move(const GameState& state, Move move) {
  const GameGraph& g = state.graph();
  if (state.is_terminal()) return IllegalMoveReason::GameOver;
  if (move.to.index() >= g.node_count() || !g.adjacent(state.token(), move.to)) {
    return IllegalMoveReason::NotAdjacent;
  }
  if (state.is_slimed(move.to)) return IllegalMoveReason::Slimed;
  if (g.is_goal(move.to)) return std::nullopt;
  if (goals_reachable(g, state.slimed(), state.token(), move.to) == 0) {
    return IllegalMoveReason::NoGoalReachable;
  }
  return std::nullopt;
}

GameState apply_move(const GameState& state, Move move) {
  if (auto reason = check_move(state, move)) throw IllegalMove(*reason);
  const GameGraph& g = state.graph();

  GameState next = state;
  next.slimed_.insert(state.token());
  next.token_ = move.to;
  if (auto owner = owner_of(g.color(move.to))) {
    next.status_ = {*owner, TerminalClause::GoalCapture};
    return next;
  }
  next.status_ = cut_outcome(goals_reachable(g, next.slimed_, NodeId{UINT32_MAX}, move.to));
  if (next.status_.ongoing()) next.to_move_ = opponent(state.to_move());
  return next;
}

}  // namespace slimetrail
