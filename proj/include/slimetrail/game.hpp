// Rules engine for Slime Trail on arbitrary connected graphs.
//
// A token sits on a node. Players alternate moving it to an adjacent node;
// the node it leaves becomes slimed and can never be entered again. Stepping
// onto a goal node ends the game in favour of that goal's owner. A move is
// only legal if some goal (of either colour) stays reachable from the
// destination, and a move that cuts off every goal of one player hands the
// game to the other player immediately.
//
// Reachability treats goal nodes as sinks: the token stops on a goal, so a
// path never continues through one.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "slimetrail/errors.hpp"

namespace slimetrail {

struct NodeId {
  std::uint32_t value = 0;

  constexpr std::size_t index() const noexcept { return value; }
  friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

constexpr NodeId node(std::size_t index) noexcept {
  return NodeId{static_cast<std::uint32_t>(index)};
}

enum class NodeColor : std::uint8_t { Plain, BlueGoal, RedGoal };

// Blue always moves first in a fresh game.
enum class Player : std::uint8_t { Blue, Red };

constexpr Player opponent(Player p) noexcept {
  return p == Player::Blue ? Player::Red : Player::Blue;
}

constexpr NodeColor goal_of(Player p) noexcept {
  return p == Player::Blue ? NodeColor::BlueGoal : NodeColor::RedGoal;
}

constexpr std::optional<Player> owner_of(NodeColor c) noexcept {
  switch (c) {
    case NodeColor::BlueGoal:
      return Player::Blue;
    case NodeColor::RedGoal:
      return Player::Red;
    case NodeColor::Plain:
      break;
  }
  return std::nullopt;
}

std::string_view to_string(Player p) noexcept;
std::string_view to_string(NodeColor c) noexcept;

struct Point {
  double x = 0.0;
  double y = 0.0;
  friend bool operator==(const Point&, const Point&) = default;
};

struct Edge {
  NodeId u;
  NodeId v;
  friend constexpr auto operator<=>(const Edge&, const Edge&) = default;
};

// Fixed-width bit set over dense node ids.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::size_t universe);

  std::size_t universe() const noexcept { return universe_; }
  bool contains(NodeId n) const noexcept {
    return (words_[n.index() >> 6] >> (n.index() & 63)) & 1u;
  }
  void insert(NodeId n) noexcept {
    words_[n.index() >> 6] |= std::uint64_t{1} << (n.index() & 63);
  }
  void erase(NodeId n) noexcept {
    words_[n.index() >> 6] &= ~(std::uint64_t{1} << (n.index() & 63));
  }
  std::size_t count() const noexcept;
  std::vector<NodeId> members() const;
  std::span<const std::uint64_t> words() const noexcept { return words_; }

  friend bool operator==(const NodeSet&, const NodeSet&) = default;

 private:
  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
};

// Immutable board. Construction validates every invariant: connected, no
// self-loops or duplicate edges, at least one goal per player, and a plain
// start node.
class GameGraph {
 public:
  static GameGraph create(std::vector<NodeColor> colors, std::vector<Edge> edges,
                          NodeId start,
                          std::vector<std::optional<Point>> positions = {});

  std::size_t node_count() const noexcept { return colors_.size(); }
  NodeColor color(NodeId n) const { return colors_[n.index()]; }
  bool is_goal(NodeId n) const { return colors_[n.index()] != NodeColor::Plain; }
  NodeId start() const noexcept { return start_; }

  // Sorted ascending.
  std::span<const NodeId> neighbors(NodeId n) const {
    return {adjacency_.data() + offsets_[n.index()],
            adjacency_.data() + offsets_[n.index() + 1]};
  }
  bool adjacent(NodeId a, NodeId b) const;

  // Normalised (u < v) and sorted.
  std::span<const Edge> edges() const noexcept { return edges_; }

  const std::optional<Point>& position(NodeId n) const {
    return positions_[n.index()];
  }
  std::span<const std::optional<Point>> positions() const noexcept {
    return positions_;
  }

  friend bool operator==(const GameGraph&, const GameGraph&) = default;

 private:
  GameGraph() = default;

  std::vector<NodeColor> colors_;
  std::vector<Edge> edges_;
  std::vector<std::size_t> offsets_;
  std::vector<NodeId> adjacency_;
  std::vector<std::optional<Point>> positions_;
  NodeId start_;
};

// Which rule ended the game.
enum class TerminalClause : std::uint8_t {
  None,
  GoalCapture,   // token stepped onto a goal
  BlueGoalsCut,  // no blue goal reachable: red wins
  RedGoalsCut,   // no red goal reachable: blue wins
};

struct Outcome {
  std::optional<Player> winner;
  TerminalClause clause = TerminalClause::None;

  bool ongoing() const noexcept { return !winner.has_value(); }
  friend bool operator==(const Outcome&, const Outcome&) = default;
};

struct Move {
  NodeId to;
  friend constexpr auto operator<=>(const Move&, const Move&) = default;
};

class GameState {
 public:
  // Token on graph.start(), nothing slimed.
  static GameState initial(std::shared_ptr<const GameGraph> graph,
                           Player to_move = Player::Blue);

  // Mid-game position. Throws InvariantViolation when the token or a goal is
  // slimed, or when no goal is reachable from the token. If the slimed set
  // already cuts off every goal of one player the position starts decided.
  static GameState from_position(std::shared_ptr<const GameGraph> graph,
                                 NodeId token, Player to_move, NodeSet slimed);

  const GameGraph& graph() const noexcept { return *graph_; }
  const std::shared_ptr<const GameGraph>& graph_ptr() const noexcept {
    return graph_;
  }
  NodeId token() const noexcept { return token_; }
  Player to_move() const noexcept { return to_move_; }
  const Outcome& status() const noexcept { return status_; }
  const NodeSet& slimed() const noexcept { return slimed_; }
  bool is_slimed(NodeId n) const { return slimed_.contains(n); }
  bool is_terminal() const noexcept { return !status_.ongoing(); }

  // Structural equality, comparing the boards by value.
  friend bool operator==(const GameState& a, const GameState& b);

 private:
  friend GameState apply_move(const GameState&, Move);

  std::shared_ptr<const GameGraph> graph_;
  NodeSet slimed_;
  NodeId token_;
  Player to_move_ = Player::Blue;
  Outcome status_;
};

// Nodes connected to the token through unslimed nodes, token included, in
// ascending order. Goal nodes are included but not expanded.
std::vector<NodeId> reachable_set(const GameState& state);

// Ascending by destination. Empty for terminal states.
std::vector<Move> legal_moves(const GameState& state);

std::optional<IllegalMoveReason> check_move(const GameState& state, Move move);

// Throws IllegalMove.
GameState apply_move(const GameState& state, Move move);

// Which goal colours are reachable from each non-goal node once `blocked`
// (usually the token about to leave) is also treated as slimed. Reused
// between calls to avoid reallocating; the solver runs this once per node.
class GoalAccess {
 public:
  static constexpr std::uint8_t kBlue = 1;
  static constexpr std::uint8_t kRed = 2;

  void analyze(const GameGraph& graph, const NodeSet& slimed, NodeId blocked,
               std::span<const NodeId> seeds);

  // Flags for the component containing `n`; only valid for seeds passed to
  // the last analyze() call that are plain and unslimed.
  std::uint8_t flags(NodeId n) const {
    return component_flags_[component_[n.index()]];
  }

 private:
  std::vector<std::uint32_t> component_;
  std::vector<std::uint32_t> stamp_;
  std::vector<std::uint8_t> component_flags_;
  std::vector<NodeId> queue_;
  std::uint32_t epoch_ = 0;
};

}  // namespace slimetrail
