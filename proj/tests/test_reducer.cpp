#include <gtest/gtest.h>

#include <cctype>
#include <deque>
#include <algorithm>
#include <map>
#include <optional>
#include <random>
#include <set>

#include "slimetrail/gadgets.hpp"
#include "slimetrail/qbf.hpp"
#include "slimetrail/reducer.hpp"
#include "slimetrail/solver.hpp"
#include "slimetrail/verify.hpp"
#include "support.hpp"

namespace slimetrail::reduce {
namespace {

// --- geometric oracle ------------------------------------------------------

int orient(Point a, Point b, Point c) {
  const long double v = static_cast<long double>(b.x - a.x) * (c.y - a.y) -
                        static_cast<long double>(b.y - a.y) * (c.x - a.x);
  return (v > 1e-12L) - (v < -1e-12L);
}

bool between(Point a, Point b, Point p) {
  return std::min(a.x, b.x) - 1e-12 <= p.x && p.x <= std::max(a.x, b.x) + 1e-12 &&
         std::min(a.y, b.y) - 1e-12 <= p.y && p.y <= std::max(a.y, b.y) + 1e-12;
}

// Closed-segment intersection test.
bool touch(Point a, Point b, Point c, Point d) {
  const int o1 = orient(a, b, c), o2 = orient(a, b, d), o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  return (o1 == 0 && between(a, b, c)) || (o2 == 0 && between(a, b, d)) ||
         (o3 == 0 && between(c, d, a)) || (o4 == 0 && between(c, d, b));
}

// Pairs of polylines that meet anywhere other than a shared end node. Node
// positions are distinct, so a shared end node is a shared end point.
std::size_t geometric_crossings(const std::vector<std::vector<Point>>& lines,
                                const std::vector<std::pair<std::size_t, std::size_t>>& ends) {
  std::size_t count = 0;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    for (std::size_t j = i + 1; j < lines.size(); ++j) {
      std::optional<Point> shared;
      if (ends[i].first == ends[j].first || ends[i].first == ends[j].second) shared = lines[i].front();
      if (ends[i].second == ends[j].first || ends[i].second == ends[j].second) shared = lines[i].back();
      bool meet = false;
      for (std::size_t s = 0; s + 1 < lines[i].size() && !meet; ++s) {
        for (std::size_t t = 0; t + 1 < lines[j].size() && !meet; ++t) {
          const Point a = lines[i][s], b = lines[i][s + 1], c = lines[j][t], d = lines[j][t + 1];
          if (!touch(a, b, c, d)) continue;
          // Allowed: both segments end at the shared node and neither runs
          // back along the other.
          bool at_shared = false;
          if (shared && (a == *shared || b == *shared) && (c == *shared || d == *shared)) {
            const Point oa = a == *shared ? b : a;
            const Point oc = c == *shared ? d : c;
            at_shared = !(orient(c, d, oa) == 0 && between(c, d, oa)) &&
                        !(orient(a, b, oc) == 0 && between(a, b, oc));
          }
          meet = !at_shared;
        }
      }
      count += meet;
    }
  }
  return count;
}

std::size_t graph_crossings(const CompiledInstance& ci) {
  std::vector<std::pair<std::size_t, std::size_t>> ends;
  for (const Edge& e : ci.graph->edges()) ends.push_back({e.u.index(), e.v.index()});
  return geometric_crossings(ci.embedding->routes, ends);
}

qbf::QuantifiedFormula formula(const char* text) { return qbf::parse_qdimacs(text); }

// --- gadgets ------------------------------------------------------------------

std::size_t path_length(const GadgetInstance& g, std::string_view from, std::string_view to) {
  std::vector<std::vector<std::size_t>> adj(g.nodes.size());
  for (auto [u, v] : g.edges) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<int> dist(g.nodes.size(), -1);
  std::deque<std::size_t> q{g.node_index(from)};
  dist[q.front()] = 0;
  while (!q.empty()) {
    const std::size_t u = q.front();
    q.pop_front();
    for (std::size_t v : adj[u]) {
      if (dist[v] < 0 && g.nodes[v].color == NodeColor::Plain) {
        dist[v] = dist[u] + 1;
        q.push_back(v);
      }
    }
  }
  return static_cast<std::size_t>(dist[g.node_index(to)]);
}

void expect_planar_layout(const GadgetInstance& g) {
  std::vector<std::vector<Point>> lines;
  std::vector<std::pair<std::size_t, std::size_t>> ends;
  for (auto [u, v] : g.edges) {
    lines.push_back({g.nodes[u].position, g.nodes[v].position});
    ends.push_back({u, v});
  }
  EXPECT_EQ(geometric_crossings(lines, ends), 0u) << to_string(g.kind);
  std::set<std::pair<double, double>> spots;
  for (const auto& n : g.nodes) spots.insert({n.position.x, n.position.y});
  EXPECT_EQ(spots.size(), g.nodes.size()) << "two nodes share a position";
}

TEST(Gadgets, OddVariable) {
  const GadgetInstance g = build_odd_variable();
  EXPECT_EQ(g.nodes.size(), 14u);
  EXPECT_EQ(g.edges.size(), 16u);
  EXPECT_EQ(g.degree("a3"), 4u);
  EXPECT_EQ(g.goal_count(NodeColor::BlueGoal), 2u);
  EXPECT_EQ(g.nodes[g.port({PortKind::LiteralPortPos})].role, "a2");
  EXPECT_EQ(g.nodes[g.port({PortKind::LiteralPortNeg})].role, "b2");
  expect_planar_layout(g);
}

TEST(Gadgets, EvenVariable) {
  const GadgetInstance g = build_even_variable();
  EXPECT_EQ(g.nodes.size(), 13u);
  EXPECT_EQ(g.edges.size(), 15u);
  EXPECT_EQ(g.degree("q0"), 3u);
  EXPECT_EQ(g.nodes[g.port({PortKind::LiteralPortPos})].role, "a1");
  expect_planar_layout(g);
}

TEST(Gadgets, PortLaddersAddThreeNodesPerRung) {
  for (std::size_t r = 1; r <= 4; ++r) {
    const GadgetInstance odd = build_odd_variable(r, 2);
    EXPECT_EQ(odd.nodes.size(), 14u + 3 * (r - 1) + 3);
    EXPECT_EQ(odd.edges.size(), 16u + 3 * (r - 1) + 3);
    const GadgetInstance even = build_even_variable(1, r);
    EXPECT_EQ(even.nodes.size(), 13u + 3 * (r - 1));
    for (std::size_t q = 0; q < r; ++q) {
      EXPECT_NO_THROW(odd.port({PortKind::LiteralPortPos, static_cast<std::uint32_t>(q)}));
      EXPECT_NO_THROW(even.port({PortKind::LiteralPortNeg, static_cast<std::uint32_t>(q)}));
    }
    expect_planar_layout(odd);
    expect_planar_layout(even);
  }
  // Hubs sit between consecutive ports, each next to its own blue goal.
  const GadgetInstance g = build_odd_variable(2, 1);
  EXPECT_EQ(g.degree("a2.h1"), 3u);
  EXPECT_EQ(g.nodes[g.node_index("a2.g1")].color, NodeColor::BlueGoal);
  EXPECT_THROW(build_odd_variable(0, 1), std::invalid_argument);
}

TEST(Gadgets, Wire) {
  const GadgetInstance g = build_wire();
  EXPECT_EQ(g.nodes.size(), 17u);
  EXPECT_EQ(g.goal_count(NodeColor::BlueGoal), 3u);
  EXPECT_EQ(g.goal_count(NodeColor::RedGoal), 3u);
  EXPECT_EQ(g.degree("a1"), 3u);
  expect_planar_layout(g);
}

TEST(Gadgets, Choice) {
  const GadgetInstance g3 = build_choice(3);
  EXPECT_EQ(g3.nodes.size(), 8u);
  EXPECT_EQ(g3.edges.size(), 7u);
  EXPECT_EQ(build_choice(1).nodes.size(), 4u);
  for (std::uint32_t j = 1; j <= 3; ++j) {
    const std::size_t c = g3.port({PortKind::ClauseNode, j});
    std::size_t reds = 0;
    for (auto [u, v] : g3.edges) {
      if (u == c && g3.nodes[v].color == NodeColor::RedGoal) ++reds;
      if (v == c && g3.nodes[u].color == NodeColor::RedGoal) ++reds;
    }
    EXPECT_EQ(reds, 1u);
  }
  EXPECT_THROW(build_choice(0), std::invalid_argument);
  expect_planar_layout(g3);
}

TEST(Gadgets, Crossover) {
  const GadgetInstance g = build_crossover();
  EXPECT_EQ(g.nodes.size(), 14u);
  EXPECT_EQ(g.degree("Cross"), 4u);
  EXPECT_EQ(path_length(g, "Start_a", "a4"), 5u);
  EXPECT_EQ(path_length(g, "Start_b", "b2"), 3u);
  EXPECT_EQ(g.nodes[g.port({PortKind::CrossExitA4})].role, "a4");
  EXPECT_EQ(g.nodes[g.port({PortKind::CrossExitB2})].role, "b2");
  expect_planar_layout(g);
}

// --- compile --------------------------------------------------------------------

TEST(Compile, SingleVariableSingleClause) {
  const CompiledInstance ci = compile(formula("p cnf 1 1\ne 1 0\n1 0\n"));
  EXPECT_EQ(ci.graph->node_count(), 14u + 17u + 4u);
  EXPECT_EQ(ci.graph->edges().size(), 16u + 17u + 3u + 2u + 1u);
  EXPECT_EQ(ci.crossover_count, 0u);
  EXPECT_EQ(to_string(ci.provenance[ci.state0.token().index()]), "OddVar#1.Start");
  EXPECT_EQ(ci.state0.to_move(), Player::Blue);
  ASSERT_EQ(ci.literal_routes.size(), 1u);
  EXPECT_EQ(ci.provenance[ci.literal_routes[0].port.index()].role, "a2");
  EXPECT_TRUE(check_planar_embedding(ci));
}

TEST(Compile, ComplementaryLiteralsNeedNoCrossover) {
  const CompiledInstance ci = compile(formula("p cnf 1 2\ne 1 0\n1 0\n-1 0\n"));
  EXPECT_EQ(ci.crossover_count, 0u);
  EXPECT_EQ(ci.computed_crossings, 0u);
  EXPECT_TRUE(check_planar_embedding(ci));
}

TEST(Compile, RejectsUnnormalizedAndEmpty) {
  EXPECT_THROW(compile(formula("p cnf 1 1\na 1 0\n1 0\n")), NotNormalized);
  qbf::QuantifiedFormula empty = formula("p cnf 1 1\ne 1 0\n1 0\n");
  empty.clauses.clear();
  EXPECT_THROW(compile(empty), UnsupportedFormula);
}

TEST(Compile, CrossoverCountEqualsGeometricCrossings) {
  const auto f = formula("p cnf 3 2\ne 1 0\na 2 0\ne 3 0\n1 -3 0\n-1 2 0\n");
  CompileOptions raw;
  raw.insert_crossovers = false;
  const CompiledInstance flat = compile(f, raw);
  const CompiledInstance ci = compile(f);
  EXPECT_EQ(graph_crossings(flat), flat.computed_crossings);
  EXPECT_EQ(ci.crossover_count, flat.computed_crossings);
  EXPECT_EQ(count_crossings(canonical_endpoints(f)), flat.computed_crossings);
  EXPECT_EQ(graph_crossings(ci), 0u);
  EXPECT_TRUE(check_planar_embedding(ci));
}

TEST(Compile, CorpusInvariants) {
  auto corpus = verify::enumerate_formulas(2, 2, 2);
  for (auto& f : verify::sample_formulas(3, 3, 3, 40, 9)) corpus.push_back(f);
  std::size_t with_crossings = 0;
  for (const auto& f : corpus) {
    const CompiledInstance ci = compile(f);
    ASSERT_TRUE(check_planar_embedding(ci)) << qbf::describe(f);
    ASSERT_EQ(ci.crossover_count, ci.computed_crossings);
    ASSERT_EQ(count_crossings(canonical_endpoints(f)), ci.computed_crossings);
    ASSERT_EQ(ci.provenance.size(), ci.graph->node_count());
    with_crossings += ci.crossover_count > 0;

    // Every occurrence owns its port, and the port sits on the side that
    // stays open exactly when the literal is true.
    std::set<std::uint32_t> ports;
    for (const LiteralRoute& r : ci.literal_routes) {
      EXPECT_TRUE(ports.insert(r.port.value).second);
      const Provenance& p = ci.provenance[r.port.index()];
      const std::uint32_t v = r.literal.variable;
      EXPECT_EQ(p.gadget.kind, v % 2 ? GadgetKind::OddVar : GadgetKind::EvenVar);
      EXPECT_EQ(p.gadget.index, (v + 1) / 2);
      EXPECT_EQ(p.role.front(), r.literal.negated ? 'b' : 'a');
      EXPECT_EQ(ci.provenance[r.clause_node.index()].role, "c" + std::to_string(r.clause));
    }
    // Crossover boundary nodes each have exactly one outside neighbour.
    for (const PlacedGadget& pg : ci.gadgets) {
      if (pg.ref.kind != GadgetKind::Crossover) continue;
      const GadgetInstance cross = build_crossover();
      for (const char* role : {"Start_a", "Start_b", "a4", "b2"}) {
        EXPECT_EQ(ci.graph->neighbors(pg.nodes[cross.node_index(role)]).size(),
                  cross.degree(role) + 1);
      }
    }
  }
  EXPECT_GT(with_crossings, 5u);
}

TEST(Compile, NoCrossoverDebugModeIsNotPlanar) {
  CompileOptions raw;
  raw.insert_crossovers = false;
  const auto f = formula("p cnf 3 2\ne 1 0\na 2 0\ne 3 0\n1 -3 0\n-1 2 0\n");
  const CompiledInstance flat = compile(f, raw);
  ASSERT_GT(flat.computed_crossings, 0u);
  EXPECT_FALSE(check_planar_embedding(flat));
}

TEST(Compile, SharedPortsWithoutLaddersGiveTheWrongWinner) {
  // E1 A2 : (1) & (1 | 2) is true, but if both occurrences of x1 share
  // one port, Red escapes down the sibling route after Blue enters it.
  const auto f = formula("p cnf 2 2\ne 1 0\na 2 0\n1 0\n1 2 0\n");
  ASSERT_TRUE(qbf::eval_qbf_bruteforce(f));
  EXPECT_EQ(solve_memo(compile(f).state0).winner, Player::Blue);
  CompileOptions shared;
  shared.port_ladders = false;
  EXPECT_EQ(solve_memo(compile(f, shared).state0).winner, Player::Red);
}

// --- crossings ------------------------------------------------------------------

TEST(CountCrossings, Examples) {
  const std::vector<RouteEndpoints> straight{{0, 0}, {1, 1}};
  const std::vector<RouteEndpoints> swapped{{0, 1}, {1, 0}};
  EXPECT_EQ(count_crossings(straight), 0u);
  EXPECT_EQ(count_crossings(swapped), 1u);
}

TEST(CountCrossings, MatchesSegmentIntersections) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<RouteEndpoints> routes;
    std::vector<std::vector<Point>> lines;
    std::vector<std::pair<std::size_t, std::size_t>> ends;
    // Clause slots may repeat; every port serves one route.
    std::vector<std::size_t> ports{0, 1, 2, 3, 4, 5, 6, 7};
    std::shuffle(ports.begin(), ports.end(), rng);
    for (int i = 0; i < 6; ++i) {
      const std::size_t a = rng() % 5, b = ports[i];
      routes.push_back({a, b});
      lines.push_back({Point{static_cast<double>(a), 1.0}, Point{static_cast<double>(b), 0.0}});
      // Shared slot = shared end node.
      ends.push_back({a, 100 + b});
    }
    EXPECT_EQ(count_crossings(routes), geometric_crossings(lines, ends));
  }
}

// --- planarity ------------------------------------------------------------------

TEST(Planarity, K4DrawnBothWays) {
  auto g = testing::make_graph(
      {NodeColor::Plain, NodeColor::BlueGoal, NodeColor::RedGoal, NodeColor::Plain},
      {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}, 0);
  Embedding good;
  good.positions = {{0, 0}, {-2, -1}, {2, -1}, {0, 3}};  // centre plus triangle
  Embedding bad;
  bad.positions = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};  // square with both diagonals
  for (Embedding* e : {&good, &bad}) {
    for (const Edge& edge : g->edges()) {
      e->routes.push_back({e->positions[edge.u.index()], e->positions[edge.v.index()]});
    }
  }
  EXPECT_TRUE(check_planar_embedding(*g, good));
  EXPECT_FALSE(check_planar_embedding(*g, bad));
}

TEST(Planarity, NodeOnAnotherEdgeIsRejected) {
  auto g = testing::make_graph({NodeColor::Plain, NodeColor::BlueGoal, NodeColor::RedGoal},
                               {{0, 1}, {0, 2}}, 0);
  Embedding e;
  e.positions = {{0, 0}, {2, 0}, {1, 0}};  // node 2 sits on edge 0-1
  for (const Edge& edge : g->edges()) {
    e.routes.push_back({e.positions[edge.u.index()], e.positions[edge.v.index()]});
  }
  EXPECT_FALSE(check_planar_embedding(*g, e));
}

// --- DOT ------------------------------------------------------------------------

// Recursive-descent checker for the undirected DOT subset: graph header,
// node/edge/attribute statements, attribute lists, comments.
class DotChecker {
 public:
  explicit DotChecker(std::string_view text) { tokenize(text); }

  bool valid() {
    pos_ = 0;
    if (!ok_) return false;
    if (peek() == "strict") ++pos_;
    if (!eat("graph")) return false;
    if (is_id(peek())) ++pos_;
    if (!eat("{")) return false;
    while (peek() != "}") {
      if (peek().empty() || !stmt()) return false;
      if (peek() == ";") ++pos_;
    }
    ++pos_;
    return pos_ == tokens_.size();
  }

  std::set<std::string> nodes;
  std::size_t node_stmts = 0;
  std::size_t edge_stmts = 0;
  std::set<std::string> edge_nodes;

 private:
  void tokenize(std::string_view s) {
    std::size_t i = 0;
    while (i < s.size()) {
      const char c = s[i];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
      } else if (s.substr(i, 2) == "//") {
        while (i < s.size() && s[i] != '\n') ++i;
      } else if (s.substr(i, 2) == "/*") {
        const auto end = s.find("*/", i + 2);
        if (end == std::string_view::npos) {
          ok_ = false;
          return;
        }
        i = end + 2;
      } else if (s.substr(i, 2) == "--" || s.substr(i, 2) == "->") {
        tokens_.emplace_back(s.substr(i, 2));
        i += 2;
      } else if (std::string_view("{}[]=;,").find(c) != std::string_view::npos) {
        tokens_.emplace_back(1, c);
        ++i;
      } else if (c == '"') {
        std::string tok = "\"";
        ++i;
        while (i < s.size() && s[i] != '"') {
          if (s[i] == '\\' && i + 1 < s.size()) tok += s[i++];
          tok += s[i++];
        }
        if (i >= s.size()) {
          ok_ = false;
          return;
        }
        tok += '"';
        ++i;
        tokens_.push_back(tok);
      } else if (std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.') {
        std::size_t j = i;
        while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_' ||
                                s[j] == '.' || (j == i && s[j] == '-'))) {
          ++j;
        }
        tokens_.emplace_back(s.substr(i, j - i));
        i = j;
      } else {
        ok_ = false;
        return;
      }
    }
  }

  static bool is_id(std::string_view t) {
    if (t.empty()) return false;
    if (t.front() == '"') return true;
    if (std::isalpha(static_cast<unsigned char>(t.front())) || t.front() == '_') {
      for (char ch : t) {
        if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') return false;
      }
      return true;
    }
    // Numeral.
    std::size_t k = t.front() == '-' ? 1 : 0;
    bool digits = false, dot = false;
    for (; k < t.size(); ++k) {
      if (std::isdigit(static_cast<unsigned char>(t[k]))) {
        digits = true;
      } else if (t[k] == '.' && !dot) {
        dot = true;
      } else {
        return false;
      }
    }
    return digits;
  }

  std::string_view peek() const {
    if (pos_ >= tokens_.size()) return {};
    return tokens_[pos_];
  }
  bool eat(std::string_view t) {
    if (peek() != t) return false;
    ++pos_;
    return true;
  }

  bool attr_list() {
    while (eat("[")) {
      while (peek() != "]") {
        if (!is_id(peek())) return false;
        ++pos_;
        if (!eat("=") || !is_id(peek())) return false;
        ++pos_;
        if (peek() == "," || peek() == ";") ++pos_;
      }
      ++pos_;
    }
    return true;
  }

  bool stmt() {
    const std::string first(peek());
    if (first == "graph" || first == "node" || first == "edge") {
      ++pos_;
      return peek() == "[" && attr_list();
    }
    if (!is_id(first)) return false;
    ++pos_;
    if (eat("=")) {
      if (!is_id(peek())) return false;
      ++pos_;
      return true;
    }
    if (peek() == "--") {
      edge_nodes.insert(first);
      while (eat("--")) {
        if (!is_id(peek())) return false;
        edge_nodes.insert(std::string(peek()));
        ++pos_;
      }
      ++edge_stmts;
      return attr_list();
    }
    if (peek() == "->") return false;  // directed edge in an undirected graph
    nodes.insert(first);
    ++node_stmts;
    return attr_list();
  }

  std::vector<std::string> tokens_;
  std::size_t pos_ = 0;
  bool ok_ = true;
};

TEST(ExportDot, Triangle) {
  const std::string dot = export_dot(testing::triangle().graph());
  DotChecker check(dot);
  ASSERT_TRUE(check.valid()) << dot;
  EXPECT_EQ(check.node_stmts, 3u);
  EXPECT_EQ(check.edge_stmts, 3u);
}

TEST(ExportDot, CompiledInstancesParse) {
  for (const char* text : {"p cnf 1 1\ne 1 0\n1 0\n",
                           "p cnf 3 2\ne 1 0\na 2 0\ne 3 0\n1 -3 0\n-1 2 0\n"}) {
    const CompiledInstance ci = compile(formula(text));
    const std::string dot = export_dot(ci);
    DotChecker check(dot);
    ASSERT_TRUE(check.valid()) << dot;
    EXPECT_EQ(check.node_stmts, ci.graph->node_count());
    EXPECT_EQ(check.edge_stmts, ci.graph->edges().size());
    for (const std::string& n : check.edge_nodes) EXPECT_TRUE(check.nodes.count(n)) << n;
    EXPECT_NE(dot.find("tooltip=\"OddVar#1.Start\""), std::string::npos);
  }
  EXPECT_FALSE(DotChecker("digraph { a -> b }").valid());
  EXPECT_FALSE(DotChecker("graph { a -- }").valid());
}

TEST(Provenance, Format) {
  const CompiledInstance ci = compile(formula("p cnf 1 1\ne 1 0\n1 0\n"));
  const std::string text = format_provenance(ci);
  EXPECT_EQ(text.substr(0, text.find('\n')), "0 OddVar#1.Start");
  EXPECT_EQ(static_cast<std::size_t>(std::count(text.begin(), text.end(), '\n')),
            ci.graph->node_count());
}

}  // namespace
}  // namespace slimetrail::reduce
