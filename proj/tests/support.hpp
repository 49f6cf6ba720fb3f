// Shared fixtures and independent oracles for the unit tests.
//
// The reference rules here are written directly from the game definition
// with plain adjacency lists and breadth-first search, deliberately sharing
// no code with the engine.

#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "slimetrail/game.hpp"
#include "slimetrail/gadgets.hpp"
#include "slimetrail/instance_io.hpp"

namespace slimetrail::testing {

inline std::shared_ptr<const GameGraph> make_graph(std::vector<NodeColor> colors,
                                                   std::vector<std::pair<int, int>> edges,
                                                   int start) {
  std::vector<Edge> es;
  for (auto [u, v] : edges) es.push_back({node(u), node(v)});
  return std::make_shared<const GameGraph>(
      GameGraph::create(std::move(colors), std::move(es), node(start)));
}

// t(0) - B(1), t - R(2), B - R.
inline GameState triangle(Player to_move = Player::Blue) {
  return GameState::initial(
      make_graph({NodeColor::Plain, NodeColor::BlueGoal, NodeColor::RedGoal},
                 {{0, 1}, {0, 2}, {1, 2}}, 0),
      to_move);
}

inline constexpr const char* kTriangleText =
    "slimetrail v1\n"
    "node 0 plain\n"
    "node 1 blue\n"
    "node 2 red\n"
    "edge 0 1\n"
    "edge 0 2\n"
    "edge 1 2\n"
    "token 0\n"
    "turn blue\n";

// Random connected board: a random spanning tree plus extra edges, one
// plain start node and at least one goal of each colour.
inline GameState random_state(std::mt19937_64& rng, std::size_t min_nodes, std::size_t max_nodes,
                              double extra_edge_rate = 0.25) {
  auto below = [&](std::size_t m) { return static_cast<std::size_t>(rng() % m); };
  const std::size_t n = min_nodes + below(max_nodes - min_nodes + 1);
  std::vector<NodeColor> colors(n, NodeColor::Plain);
  // Node 0 is the start; at least one of each goal among the rest.
  std::vector<std::size_t> others;
  for (std::size_t i = 1; i < n; ++i) others.push_back(i);
  std::shuffle(others.begin(), others.end(), rng);
  colors[others[0]] = NodeColor::BlueGoal;
  colors[others[1]] = NodeColor::RedGoal;
  for (std::size_t i = 2; i < others.size(); ++i) {
    const std::size_t r = below(10);
    if (r == 0) colors[others[i]] = NodeColor::BlueGoal;
    if (r == 1) colors[others[i]] = NodeColor::RedGoal;
  }
  std::set<std::pair<std::size_t, std::size_t>> edges;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t j = below(i);
    edges.insert({j, i});
  }
  const std::size_t extra = static_cast<std::size_t>(extra_edge_rate * n * (n - 1) / 2);
  for (std::size_t t = 0; t < extra; ++t) {
    std::size_t a = below(n), b = below(n);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    edges.insert({a, b});
  }
  std::vector<Edge> es;
  for (auto [a, b] : edges) es.push_back({node(a), node(b)});
  auto g = std::make_shared<const GameGraph>(GameGraph::create(colors, es, node(0)));
  return GameState::initial(g, rng() % 2 ? Player::Blue : Player::Red);
}

// Same board and position. The instance format records no separate start
// node, so a parsed mid-game position's board starts at its token.
inline bool same_position(const GameState& a, const GameState& b) {
  const GameGraph& ga = a.graph();
  const GameGraph& gb = b.graph();
  if (ga.node_count() != gb.node_count() ||
      !std::ranges::equal(ga.edges(), gb.edges())) {
    return false;
  }
  for (std::size_t i = 0; i < ga.node_count(); ++i) {
    if (ga.color(node(i)) != gb.color(node(i)) || ga.position(node(i)) != gb.position(node(i))) {
      return false;
    }
  }
  return a.token() == b.token() && a.to_move() == b.to_move() && a.slimed() == b.slimed() &&
         a.status() == b.status();
}

// --- reference rules ---------------------------------------------------------

struct RefBoard {
  std::vector<std::vector<std::size_t>> adj;
  std::vector<int> color;  // 0 plain, 1 blue goal, 2 red goal

  explicit RefBoard(const GameGraph& g) : adj(g.node_count()), color(g.node_count()) {
    for (const Edge& e : g.edges()) {
      adj[e.u.index()].push_back(e.v.index());
      adj[e.v.index()].push_back(e.u.index());
    }
    for (std::size_t i = 0; i < g.node_count(); ++i) {
      color[i] = static_cast<int>(g.color(node(i)));
    }
  }
};

struct RefState {
  std::vector<bool> slimed;
  std::size_t token = 0;
  int to_move = 0;     // 0 blue, 1 red
  int winner = -1;     // -1 ongoing
  int clause = 0;      // 0 none, 1 goal, 2 blue goals cut, 3 red goals cut
};

inline RefState ref_from(const GameState& s) {
  RefState r;
  r.slimed.assign(s.graph().node_count(), false);
  for (NodeId n : s.slimed().members()) r.slimed[n.index()] = true;
  r.token = s.token().index();
  r.to_move = s.to_move() == Player::Blue ? 0 : 1;
  r.winner = s.status().winner ? (*s.status().winner == Player::Blue ? 0 : 1) : -1;
  return r;
}

// Nodes reachable from `from` through unslimed, non-blocked nodes; goals
// are entered but not passed through.
inline std::vector<bool> ref_reach(const RefBoard& b, const std::vector<bool>& slimed,
                                   std::size_t from, std::optional<std::size_t> blocked) {
  std::vector<bool> seen(b.adj.size(), false);
  std::queue<std::size_t> q;
  seen[from] = true;
  q.push(from);
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop();
    if (b.color[u] != 0) continue;
    for (std::size_t v : b.adj[u]) {
      if (seen[v] || slimed[v] || (blocked && v == *blocked)) continue;
      seen[v] = true;
      q.push(v);
    }
  }
  return seen;
}

inline std::vector<std::size_t> ref_legal(const RefBoard& b, const RefState& s) {
  std::vector<std::size_t> out;
  if (s.winner >= 0) return out;
  for (std::size_t v : b.adj[s.token]) {
    if (s.slimed[v]) continue;
    if (b.color[v] != 0) {
      out.push_back(v);
      continue;
    }
    const auto seen = ref_reach(b, s.slimed, v, s.token);
    bool any_goal = false;
    for (std::size_t i = 0; i < seen.size(); ++i) any_goal = any_goal || (seen[i] && b.color[i]);
    if (any_goal) out.push_back(v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

inline RefState ref_apply(const RefBoard& b, RefState s, std::size_t to) {
  s.slimed[s.token] = true;
  s.token = to;
  s.to_move ^= 1;
  if (b.color[to] != 0) {
    s.winner = b.color[to] == 1 ? 0 : 1;
    s.clause = 1;
    return s;
  }
  const auto seen = ref_reach(b, s.slimed, to, std::nullopt);
  bool blue = false, red = false;
  for (std::size_t i = 0; i < seen.size(); ++i) {
    blue = blue || (seen[i] && b.color[i] == 1);
    red = red || (seen[i] && b.color[i] == 2);
  }
  if (!blue) {
    s.winner = 1;
    s.clause = 2;
  } else if (!red) {
    s.winner = 0;
    s.clause = 3;
  }
  return s;
}

// Plain minimax over the reference rules: 0 if blue wins, 1 if red.
inline int ref_winner(const RefBoard& b, const RefState& s) {
  if (s.winner >= 0) return s.winner;
  for (std::size_t v : ref_legal(b, s)) {
    if (ref_winner(b, ref_apply(b, s, v)) == s.to_move) return s.to_move;
  }
  return s.to_move ^ 1;
}

// --- gadget harnesses ----------------------------------------------------------

// The wire gadget with a blue goal one edge below Out, token on Start.
inline GameState wire_harness(Player to_move) {
  const reduce::GadgetInstance w = reduce::build_wire();
  std::vector<NodeColor> colors;
  for (const auto& n : w.nodes) colors.push_back(n.color);
  std::vector<Edge> edges;
  for (auto [u, v] : w.edges) edges.push_back({node(u), node(v)});
  colors.push_back(NodeColor::BlueGoal);
  edges.push_back({node(w.node_index("Out")), node(colors.size() - 1)});
  const NodeId start = node(w.node_index("Start"));
  auto g = std::make_shared<const GameGraph>(GameGraph::create(colors, edges, start));
  return GameState::initial(g, to_move);
}

}  // namespace slimetrail::testing
