#include "slimetrail/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "slimetrail/gadgets.hpp"
#include "slimetrail/instance_io.hpp"
#include "slimetrail/text_util.hpp"

namespace slimetrail::verify {

namespace {

using reduce::GadgetInstance;
using reduce::PortKind;

std::string join_ids(const std::vector<Move>& moves) {
  std::string out;
  for (const Move& m : moves) {
    out += ' ';
    out += std::to_string(m.to.value);
  }
  return out;
}

}  // namespace

GameSide solve_game_side(const GameState& state, SearchBudget budget) {
  MemoSolver solver(budget);
  const SolveResult r = solver.solve(state);
  GameSide side;
  side.winner = r.winner;
  side.best_move = r.best_move;
  side.max_depth = r.max_depth;
  side.pv = solver.principal_variation(state, state.graph().node_count());
  side.nodes_explored = solver.nodes_explored();
  return side;
}

std::string format_game_side(const GameSide& side) {
  std::string out = "winner: ";
  out += to_string(side.winner);
  out += "\nbest: ";
  out += side.best_move ? std::to_string(side.best_move->to.value) : std::string("-");
  out += "\npv:";
  out += join_ids(side.pv);
  out += '\n';
  return out;
}

VerifyReport verify_reduction(const qbf::QuantifiedFormula& formula, SearchBudget budget,
                              reduce::CompileOptions options) {
  const auto t0 = std::chrono::steady_clock::now();
  VerifyReport report;
  report.formula = qbf::describe(formula);
  const qbf::NormalizedFormula norm = qbf::normalize_alternation(formula);
  report.variables = norm.formula.prefix_length();
  report.dummies = norm.dummies.size();
  report.clauses = norm.formula.clause_count();
  report.qbf_value = qbf::eval_qbf_bruteforce(formula);

  const reduce::CompiledInstance ci = reduce::compile(norm.formula, options);
  report.node_count = ci.graph->node_count();
  report.crossover_count = ci.crossover_count;
  report.planar = reduce::check_planar_embedding(ci);

  try {
    report.game = solve_game_side(ci.state0, budget);
    report.nodes_explored = report.game->nodes_explored;
    report.agree = report.qbf_value == (report.game->winner == Player::Blue);
  } catch (const BudgetExhausted& e) {
    report.exhausted = true;
    report.nodes_explored = e.nodes_explored();
  }
  report.elapsed_ms =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return report;
}

std::string format_report(const VerifyReport& r) {
  std::ostringstream out;
  out << "formula: " << r.formula << '\n'
      << "variables: " << r.variables << '\n'
      << "dummies: " << r.dummies << '\n'
      << "clauses: " << r.clauses << '\n'
      << "nodes: " << r.node_count << '\n'
      << "crossovers: " << r.crossover_count << '\n'
      << "planar: " << (r.planar ? "true" : "false") << '\n'
      << "qbf: " << (r.qbf_value ? "true" : "false") << '\n';
  if (r.game) {
    out << format_game_side(*r.game);
  } else {
    out << "winner: unknown (budget exhausted)\n";
  }
  out << "agree: " << (r.agree ? "true" : "false") << '\n'
      << "explored: " << r.nodes_explored << '\n';
  return out.str();
}

std::string report_json(const VerifyReport& r) {
  nlohmann::ordered_json j;
  j["formula"] = r.formula;
  j["variables"] = r.variables;
  j["dummies"] = r.dummies;
  j["clauses"] = r.clauses;
  j["nodes"] = r.node_count;
  j["crossovers"] = r.crossover_count;
  j["planar"] = r.planar;
  j["qbf_value"] = r.qbf_value;
  if (r.game) {
    j["game_winner"] = to_string(r.game->winner);
    if (r.game->best_move) {
      j["best_move"] = r.game->best_move->to.value;
    } else {
      j["best_move"] = nullptr;
    }
    auto pv = nlohmann::ordered_json::array();
    for (const Move& m : r.game->pv) pv.push_back(m.to.value);
    j["pv"] = pv;
    j["max_depth"] = r.game->max_depth;
  } else {
    j["game_winner"] = nullptr;
  }
  j["agree"] = r.agree;
  j["exhausted"] = r.exhausted;
  j["nodes_explored"] = r.nodes_explored;
  return j.dump(2) + "\n";
}

// --- scenarios --------------------------------------------------------------

std::string to_string(const Assertion& a) {
  const std::string p(slimetrail::to_string(a.player));
  switch (a.kind) {
    case AssertionKind::Winner:
      return "winner " + p;
    case AssertionKind::ExitNode:
      return "exit " + std::to_string(a.node.value) + ' ' + p + ' ' +
             std::to_string(a.stub.value);
    case AssertionKind::LosesWithin:
      return "loses-within " + p + ' ' + std::to_string(a.plies);
  }
  return "?";
}

IllegalPrefix::IllegalPrefix(std::size_t index, Move move, IllegalMoveReason reason)
    : std::runtime_error("prefix move " + std::to_string(index + 1) + " (to " +
                         std::to_string(move.to.value) + ") is illegal: " +
                         slimetrail::to_string(reason)),
      index_(index) {}

namespace {

// Rebuilds the stub hanging off an exit as a continuation that decides the
// game by who entered it: if `exiter_wins`, the stub leads through one more
// plain node to both goals (the exiter takes theirs two plies later);
// otherwise both goals touch the stub and the other player takes theirs at
// once.
GameState with_exit_continuation(const GameState& harness, NodeId stub, bool exiter_wins) {
  const GameGraph& g = harness.graph();
  std::vector<NodeColor> colors;
  std::vector<std::optional<Point>> positions;
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    colors.push_back(g.color(node(i)));
    positions.push_back(g.position(node(i)));
  }
  std::vector<Edge> edges(g.edges().begin(), g.edges().end());
  colors[stub.index()] = NodeColor::Plain;
  const Point base = g.position(stub).value_or(Point{});
  auto add = [&](NodeColor c, double dx, double dy) {
    colors.push_back(c);
    positions.push_back(Point{base.x + dx, base.y + dy});
    return node(colors.size() - 1);
  };
  NodeId hub = stub;
  if (exiter_wins) {
    const NodeId y = add(NodeColor::Plain, 0, -0.5);
    edges.push_back({stub, y});
    hub = y;
  }
  const NodeId blue = add(NodeColor::BlueGoal, -0.4, exiter_wins ? -1.0 : -0.5);
  const NodeId red = add(NodeColor::RedGoal, 0.4, exiter_wins ? -1.0 : -0.5);
  edges.push_back({hub, blue});
  edges.push_back({hub, red});

  auto graph = std::make_shared<const GameGraph>(
      GameGraph::create(std::move(colors), std::move(edges), g.start(), std::move(positions)));
  NodeSet slimed(graph->node_count());
  for (NodeId n : harness.slimed().members()) slimed.insert(n);
  return GameState::from_position(graph, harness.token(), harness.to_move(), std::move(slimed));
}

GameState play_prefix(GameState s, const std::vector<Move>& prefix) {
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (auto why = check_move(s, prefix[i])) throw IllegalPrefix(i, prefix[i], *why);
    s = apply_move(s, prefix[i]);
  }
  return s;
}

constexpr std::uint64_t kScenarioBudget = 10'000'000;

}  // namespace

ScenarioResult run_scenario(const Scenario& scenario) {
  ScenarioResult result;
  result.name = scenario.name;
  const GameState after = play_prefix(scenario.harness, scenario.prefix);

  auto winner_of = [&](const GameState& s) -> Player {
    if (s.is_terminal()) return *s.status().winner;
    const SolveResult r = solve_memo(s, SearchBudget{kScenarioBudget});
    if (r.max_depth + 1 > s.graph().node_count()) result.depth_bounded = false;
    return r.winner;
  };

  for (const Assertion& a : scenario.assertions) {
    AssertionOutcome o;
    o.assertion = a;
    switch (a.kind) {
      case AssertionKind::Winner: {
        const Player w = winner_of(after);
        o.passed = w == a.player;
        o.detail = "winner " + std::string(to_string(w));
        break;
      }
      case AssertionKind::LosesWithin: {
        o.passed = wins_within(after, opponent(a.player), a.plies);
        o.detail = std::string(to_string(opponent(a.player))) +
                   (o.passed ? " forces a win within " : " cannot force a win within ") +
                   std::to_string(a.plies) + " plies";
        break;
      }
      case AssertionKind::ExitNode: {
        const GameGraph& g = scenario.harness.graph();
        if (a.node.index() >= g.node_count() || a.stub.index() >= g.node_count() ||
            !g.adjacent(a.node, a.stub)) {
          o.passed = false;
          o.detail = "stub is not adjacent to the exit node";
          break;
        }
        const Player losing =
            winner_of(play_prefix(with_exit_continuation(scenario.harness, a.stub, false),
                                  scenario.prefix));
        const Player winning =
            winner_of(play_prefix(with_exit_continuation(scenario.harness, a.stub, true),
                                  scenario.prefix));
        o.passed = losing == opponent(a.player) && winning == a.player;
        o.detail = "exiting loses: winner " + std::string(to_string(losing)) +
                   "; exiting wins: winner " + std::string(to_string(winning));
        break;
      }
    }
    result.outcomes.push_back(std::move(o));
  }
  result.passed = std::all_of(result.outcomes.begin(), result.outcomes.end(),
                              [](const AssertionOutcome& o) { return o.passed; });
  return result;
}

namespace {

Player parse_player(std::string_view word, std::size_t line) {
  if (word == "blue") return Player::Blue;
  if (word == "red") return Player::Red;
  throw ParseError(line, "expected blue or red, got '" + std::string(word) + "'");
}

NodeId parse_node_id(std::string_view word, std::size_t line) {
  const auto v = parse_unsigned(word);
  if (!v || *v > UINT32_MAX) throw ParseError(line, "bad node id '" + std::string(word) + "'");
  return node(*v);
}

std::string_view rest_after_keyword(std::string_view line) {
  std::size_t i = line.find_first_of(" \t");
  if (i == std::string_view::npos) return {};
  line.remove_prefix(i);
  const auto b = line.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  line.remove_prefix(b);
  const auto e = line.find_last_not_of(" \t");
  return line.substr(0, e + 1);
}

}  // namespace

Scenario parse_scenario(std::string_view text) {
  Scenario s;
  std::string instance_text;
  const auto lines = split_lines(text);
  bool have_name = false;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const std::size_t lineno = i + 1;
    const std::string_view body = strip_comment(lines[i], '#');
    const auto words = split_words(body);
    const std::string_view kw = words.empty() ? std::string_view{} : words[0];
    if (kw == "name" || kw == "gadget") {
      const std::string value(rest_after_keyword(body));
      if (value.empty()) throw ParseError(lineno, std::string(kw) + " needs a value");
      (kw == "name" ? s.name : s.gadget) = value;
      have_name = have_name || kw == "name";
      instance_text += '\n';  // keep line numbers aligned for the instance parser
      continue;
    }
    if (kw == "prefix") {
      for (std::size_t w = 1; w < words.size(); ++w) {
        s.prefix.push_back(Move{parse_node_id(words[w], lineno)});
      }
      instance_text += '\n';
      continue;
    }
    if (kw == "assert") {
      if (words.size() < 2) throw ParseError(lineno, "assert needs a kind");
      Assertion a;
      if (words[1] == "winner" && words.size() == 3) {
        a.kind = AssertionKind::Winner;
        a.player = parse_player(words[2], lineno);
      } else if (words[1] == "exit" && words.size() == 5) {
        a.kind = AssertionKind::ExitNode;
        a.node = parse_node_id(words[2], lineno);
        a.player = parse_player(words[3], lineno);
        a.stub = parse_node_id(words[4], lineno);
      } else if (words[1] == "loses-within" && words.size() == 4) {
        a.kind = AssertionKind::LosesWithin;
        a.player = parse_player(words[2], lineno);
        const auto plies = parse_unsigned(words[3]);
        if (!plies || *plies > 10'000) throw ParseError(lineno, "bad ply bound");
        a.plies = static_cast<unsigned>(*plies);
      } else {
        throw ParseError(lineno, "malformed assert line");
      }
      s.assertions.push_back(a);
      instance_text += '\n';
      continue;
    }
    instance_text += lines[i];
    instance_text += '\n';
  }
  if (!have_name) throw ParseError(0, "scenario has no name");
  if (s.assertions.empty()) throw ParseError(0, "scenario has no assert lines");
  s.harness = parse_instance(instance_text).state;
  return s;
}

std::string serialize_scenario(const Scenario& s) {
  std::string out = serialize_instance(s.harness);
  out += "name " + s.name + '\n';
  if (!s.gadget.empty()) out += "gadget " + s.gadget + '\n';
  if (!s.prefix.empty()) out += "prefix" + join_ids(s.prefix) + '\n';
  for (const Assertion& a : s.assertions) out += "assert " + to_string(a) + '\n';
  return out;
}

// --- gadget atlas -----------------------------------------------------------

namespace {

// A gadget on its own board, plus stub nodes standing in for the rest of
// the game where its dashed edges leave.
class Harness {
 public:
  explicit Harness(const GadgetInstance& g) : gadget_(g) {
    for (const auto& n : g.nodes) {
      colors_.push_back(n.color);
      positions_.push_back(n.position);
    }
    for (auto [u, v] : g.edges) edges_.push_back({node(u), node(v)});
    Point sum{};
    for (const auto& n : g.nodes) {
      sum.x += n.position.x;
      sum.y += n.position.y;
    }
    centre_ = {sum.x / g.nodes.size(), sum.y / g.nodes.size()};
  }

  NodeId id(std::string_view role) const { return node(gadget_.node_index(role)); }

  NodeId add(NodeColor c, Point p) {
    colors_.push_back(c);
    positions_.push_back(p);
    return node(colors_.size() - 1);
  }
  void link(NodeId a, NodeId b) { edges_.push_back({a, b}); }

  // Single goal node one edge out from `at`.
  NodeId goal_stub(NodeId at, NodeColor color) {
    const NodeId s = add(color, outward(at, 0.8));
    link(at, s);
    return s;
  }

  // A plain node next to its own red goal: what a clause node looks like
  // from the end of a literal route.
  NodeId clause_stub(NodeId at) {
    const NodeId c = add(NodeColor::Plain, outward(at, 0.8));
    const NodeId r = add(NodeColor::RedGoal, outward(at, 1.6));
    link(at, c);
    link(c, r);
    return c;
  }

  // Adopt another gadget wholesale; returns its node offset.
  std::size_t absorb(const GadgetInstance& g, Point shift) {
    const std::size_t base = colors_.size();
    for (const auto& n : g.nodes) {
      colors_.push_back(n.color);
      positions_.push_back(Point{n.position.x + shift.x, n.position.y + shift.y});
    }
    for (auto [u, v] : g.edges) edges_.push_back({node(base + u), node(base + v)});
    return base;
  }

  GameState state(NodeId token, Player turn, const std::vector<NodeId>& slimed = {}) const {
    auto graph = std::make_shared<const GameGraph>(
        GameGraph::create(colors_, edges_, token, positions_));
    NodeSet set(graph->node_count());
    for (NodeId n : slimed) set.insert(n);
    return GameState::from_position(graph, token, turn, std::move(set));
  }

 private:
  Point outward(NodeId at, double dist) const {
    const Point p = *positions_[at.index()];
    double dx = p.x - centre_.x;
    double dy = p.y - centre_.y;
    const double len = std::hypot(dx, dy);
    if (len < 1e-9) {
      dx = 0;
      dy = -1;
    } else {
      dx /= len;
      dy /= len;
    }
    return Point{p.x + dist * dx, p.y + dist * dy};
  }

  GadgetInstance gadget_;
  std::vector<NodeColor> colors_;
  std::vector<std::optional<Point>> positions_;
  std::vector<Edge> edges_;
  Point centre_;
};

std::vector<Move> moves(std::initializer_list<NodeId> ids) {
  std::vector<Move> out;
  for (NodeId n : ids) out.push_back(Move{n});
  return out;
}

Assertion winner(Player p) { return Assertion{AssertionKind::Winner, p, {}, {}, 0}; }
Assertion exit_at(NodeId n, Player p, NodeId stub) {
  return Assertion{AssertionKind::ExitNode, p, n, stub, 0};
}
Assertion loses_within(Player p, unsigned plies) {
  return Assertion{AssertionKind::LosesWithin, p, {}, {}, plies};
}

void wire_scenarios(std::vector<Scenario>& out) {
  for (Player turn : {Player::Blue, Player::Red}) {
    Harness h(reduce::build_wire());
    const NodeId out_stub = h.goal_stub(h.id("Out"), NodeColor::BlueGoal);
    out.push_back({std::string("wire-entered-") + (turn == Player::Blue ? "blue" : "red") +
                       "-to-move",
                   "Wire", h.state(h.id("Start"), turn), {},
                   {exit_at(h.id("Out"), Player::Red, out_stub)}});
  }
}

// Variable gadget with a clause stub on every port and a goal stub below
// Out. `even` selects the second-player gadget.
struct VarHarness {
  Harness h;
  std::vector<NodeId> pos_clauses;  // per rung, top first
  std::vector<NodeId> neg_clauses;
  NodeId out_stub;
};

VarHarness var_harness(bool even, std::size_t pos_ports, std::size_t neg_ports,
                       bool with_out_stub = true) {
  const GadgetInstance g = even ? reduce::build_even_variable(pos_ports, neg_ports)
                                : reduce::build_odd_variable(pos_ports, neg_ports);
  VarHarness v{Harness(g), {}, {}, {}};
  for (std::size_t r = 0; r < pos_ports; ++r) {
    v.pos_clauses.push_back(v.h.clause_stub(node(g.port({PortKind::LiteralPortPos,
                                                         static_cast<std::uint32_t>(r)}))));
  }
  for (std::size_t r = 0; r < neg_ports; ++r) {
    v.neg_clauses.push_back(v.h.clause_stub(node(g.port({PortKind::LiteralPortNeg,
                                                         static_cast<std::uint32_t>(r)}))));
  }
  if (with_out_stub) v.out_stub = v.h.goal_stub(v.h.id("Out"), NodeColor::BlueGoal);
  return v;
}

void variable_scenarios(std::vector<Scenario>& out) {
  // Red decides who moves out of Out: it wins whether leaving is good or bad
  // for the player who leaves.
  for (bool even : {false, true}) {
    const std::string kind = even ? "EvenVar" : "OddVar";
    const std::string tag = even ? "even" : "odd";
    for (bool exiter_wins : {false, true}) {
      VarHarness v = var_harness(even, 1, 1, false);
      // Below Out: a plain node leading to both goals, either directly
      // (whoever leaves loses) or one step later (whoever leaves wins).
      NodeId hub = v.h.add(NodeColor::Plain, Point{0, -9});
      v.h.link(v.h.id("Out"), hub);
      if (exiter_wins) {
        const NodeId y = v.h.add(NodeColor::Plain, Point{0, -10});
        v.h.link(hub, y);
        hub = y;
      }
      v.h.link(hub, v.h.add(NodeColor::BlueGoal, Point{-0.5, -11}));
      v.h.link(hub, v.h.add(NodeColor::RedGoal, Point{0.5, -11}));
      out.push_back({tag + "-red-sets-exit-parity-" + (exiter_wins ? "leaver-wins" : "leaver-loses"),
                     kind, v.h.state(v.h.id("Start"), Player::Blue), {}, {winner(Player::Red)}});
    }
  }

  // Early entry into a clause from a port: Red answers with the clause's
  // red goal.
  {
    VarHarness v = var_harness(false, 1, 1);
    const Harness& h = v.h;
    out.push_back({"odd-early-entry-a-side", "OddVar", h.state(h.id("Start"), Player::Blue),
                   moves({h.id("a1"), h.id("a2"), v.pos_clauses[0]}),
                   {loses_within(Player::Blue, 2)}});
    out.push_back({"odd-early-entry-b-side", "OddVar", h.state(h.id("Start"), Player::Blue),
                   moves({h.id("b1"), h.id("b2"), v.neg_clauses[0]}),
                   {loses_within(Player::Blue, 2)}});
  }
  {
    VarHarness v = var_harness(true, 1, 1);
    const Harness& h = v.h;
    out.push_back({"even-early-entry-a-side", "EvenVar", h.state(h.id("Start"), Player::Blue),
                   moves({h.id("q0"), h.id("a1"), v.pos_clauses[0]}),
                   {loses_within(Player::Blue, 2)}});
    out.push_back({"even-early-entry-b-side", "EvenVar", h.state(h.id("Start"), Player::Blue),
                   moves({h.id("q0"), h.id("b1"), v.neg_clauses[0]}),
                   {loses_within(Player::Blue, 2)}});
  }
  {
    VarHarness v = var_harness(false, 2, 1);
    const Harness& h = v.h;
    out.push_back({"odd-ladder-early-entry-second-port", "OddVar",
                   h.state(h.id("Start"), Player::Blue),
                   moves({h.id("a1"), h.id("a2"), h.id("a2.h1"), h.id("a2.p2"), v.pos_clauses[1]}),
                   {loses_within(Player::Blue, 2)}});
  }
  {
    VarHarness v = var_harness(true, 1, 2);
    const Harness& h = v.h;
    out.push_back({"even-ladder-early-entry-second-port", "EvenVar",
                   h.state(h.id("Start"), Player::Blue),
                   moves({h.id("q0"), h.id("b1"), h.id("b1.h1"), h.id("b1.p2"), v.neg_clauses[1]}),
                   {loses_within(Player::Blue, 2)}});
  }

  // Early entry backwards into a crossover exit: the exit's own red goal.
  for (bool via_a : {true, false}) {
    const GadgetInstance var = reduce::build_odd_variable();
    const GadgetInstance cross = reduce::build_crossover();
    Harness h(var);
    const std::size_t base = h.absorb(cross, Point{-6, -1});
    auto x = [&](std::string_view role) { return node(base + cross.node_index(role)); };
    h.link(h.id("a2"), via_a ? x("a4") : x("b2"));
    h.clause_stub(x("Start_a"));
    h.clause_stub(x("Start_b"));
    h.goal_stub(via_a ? x("b2") : x("a4"), NodeColor::BlueGoal);
    h.clause_stub(h.id("b2"));
    h.goal_stub(h.id("Out"), NodeColor::BlueGoal);
    out.push_back({std::string("odd-early-entry-into-crossover-") + (via_a ? "a4" : "b2"),
                   "OddVar", h.state(h.id("Start"), Player::Blue),
                   moves({h.id("a1"), h.id("a2"), via_a ? x("a4") : x("b2")}),
                   {loses_within(Player::Blue, 2)}});
  }

  // Endgame: the variable was set so that this side stayed open, Red chose
  // a clause whose route ends here, and Blue walks in.
  struct OpenCase {
    bool even;
    bool a_side;
    std::size_t ports;
    std::size_t rung;
  };
  for (const OpenCase c : {OpenCase{false, true, 1, 0}, OpenCase{false, false, 1, 0},
                           OpenCase{true, true, 1, 0}, OpenCase{true, false, 1, 0},
                           OpenCase{false, true, 2, 0}, OpenCase{false, true, 2, 1},
                           OpenCase{true, false, 3, 2}}) {
    VarHarness v = c.a_side ? var_harness(c.even, c.ports, 1) : var_harness(c.even, 1, c.ports);
    const Harness& h = v.h;
    // The other side's traversal path, Out and Start are slimed.
    const std::string t = c.a_side ? "b" : "a";
    std::vector<NodeId> slimed{h.id("Start"), h.id("Out")};
    if (c.even) {
      slimed.push_back(h.id("q0"));
      for (const char* r : {"1", "2", "4"}) slimed.push_back(h.id(t + r));
    } else {
      for (const char* r : {"1", "2", "3", "5"}) slimed.push_back(h.id(t + r));
    }
    const NodeId entry = c.a_side ? v.pos_clauses[c.rung] : v.neg_clauses[c.rung];
    std::string name = std::string(c.even ? "even" : "odd") + "-open-port-" +
                       (c.a_side ? "a" : "b") + "-side";
    if (c.ports > 1) name += "-rung" + std::to_string(c.rung + 1) + "-of-" + std::to_string(c.ports);
    out.push_back({name, c.even ? "EvenVar" : "OddVar", h.state(entry, Player::Blue, slimed), {},
                   {winner(Player::Blue), loses_within(Player::Red, 3)}});
  }
}

void choice_scenarios(std::vector<Scenario>& out) {
  // Red picks the clause: one clause without a satisfied literal is enough.
  for (bool all_satisfied : {true, false}) {
    const GadgetInstance g = reduce::build_choice(2);
    Harness h(g);
    h.goal_stub(node(g.port({PortKind::ClauseNode, 1})), NodeColor::BlueGoal);
    if (all_satisfied) h.goal_stub(node(g.port({PortKind::ClauseNode, 2})), NodeColor::BlueGoal);
    out.push_back({std::string("choice-") + (all_satisfied ? "all-clauses-open" : "one-clause-closed"),
                   "Choice", h.state(h.id("Start"), Player::Blue), {},
                   {winner(all_satisfied ? Player::Blue : Player::Red)}});
  }
}

void crossover_scenarios(std::vector<Scenario>& out) {
  for (bool a_route : {true, false}) {
    Harness h(reduce::build_crossover());
    const NodeId start = h.id(a_route ? "Start_a" : "Start_b");
    const NodeId exit = h.id(a_route ? "a4" : "b2");
    h.clause_stub(h.id(a_route ? "Start_b" : "Start_a"));
    const NodeId stub = h.goal_stub(exit, NodeColor::BlueGoal);
    h.goal_stub(h.id(a_route ? "b2" : "a4"), NodeColor::BlueGoal);
    const GameState s = h.state(start, Player::Red);
    out.push_back({std::string("crossover-") + (a_route ? "a" : "b") + "-route-exit", "Crossover",
                   s, {}, {exit_at(exit, Player::Blue, stub)}});
    if (a_route) {
      for (const char* wrong : {"b1", "b2"}) {
        out.push_back({std::string("crossover-a-route-blue-turns-to-") + wrong, "Crossover", s,
                       moves({h.id("a1"), h.id("a2"), h.id("Cross"), h.id(wrong)}),
                       {loses_within(Player::Blue, 1)}});
      }
    } else {
      for (const char* wrong : {"a2", "a3"}) {
        out.push_back({std::string("crossover-b-route-red-turns-to-") + wrong, "Crossover", s,
                       moves({h.id("b1"), h.id("Cross"), h.id(wrong)}),
                       {loses_within(Player::Red, 1)}});
      }
    }
  }
}

}  // namespace

std::vector<Scenario> gadget_atlas() {
  std::vector<Scenario> out;
  wire_scenarios(out);
  variable_scenarios(out);
  choice_scenarios(out);
  crossover_scenarios(out);
  return out;
}

// --- formula corpus ---------------------------------------------------------

namespace {

qbf::QuantifiedFormula alternating_prefix(unsigned n) {
  qbf::QuantifiedFormula f;
  f.num_vars = n;
  for (unsigned v = 1; v <= n; ++v) {
    f.prefix.push_back({v, v % 2 ? qbf::Quantifier::Exists : qbf::Quantifier::ForAll});
  }
  return f;
}

// Literals of n variables in (variable, sign) order.
std::vector<qbf::Literal> all_literals(unsigned n) {
  std::vector<qbf::Literal> lits;
  for (unsigned v = 1; v <= n; ++v) {
    lits.push_back({v, false});
    lits.push_back({v, true});
  }
  return lits;
}

// Index sequences of length 1..max_len over [0, m) in length-then-
// lexicographic order: strictly increasing (subsets) or non-decreasing
// (multisets).
void for_each_sequence(std::size_t m, std::size_t max_len, bool strict,
                       const std::function<void(const std::vector<std::size_t>&)>& fn) {
  std::vector<std::size_t> idx;
  std::function<void(std::size_t, std::size_t)> extend = [&](std::size_t from, std::size_t len) {
    if (idx.size() == len) {
      fn(idx);
      return;
    }
    for (std::size_t i = from; i < m; ++i) {
      idx.push_back(i);
      extend(strict ? i + 1 : i, len);
      idx.pop_back();
    }
  };
  for (std::size_t len = 1; len <= max_len; ++len) extend(0, len);
}

}  // namespace

std::vector<qbf::QuantifiedFormula> enumerate_formulas(unsigned n_max, unsigned k_max,
                                                       unsigned lits_max) {
  std::vector<qbf::QuantifiedFormula> out;
  for (unsigned n = 1; n <= n_max; ++n) {
    const auto lits = all_literals(n);
    std::vector<qbf::Clause> clauses;
    for_each_sequence(lits.size(), lits_max, true, [&](const std::vector<std::size_t>& idx) {
      qbf::Clause c;
      for (std::size_t i : idx) c.literals.push_back(lits[i]);
      clauses.push_back(std::move(c));
    });
    for_each_sequence(clauses.size(), k_max, false, [&](const std::vector<std::size_t>& idx) {
      qbf::QuantifiedFormula f = alternating_prefix(n);
      for (std::size_t i : idx) f.clauses.push_back(clauses[i]);
      out.push_back(std::move(f));
    });
  }
  return out;
}

std::vector<qbf::QuantifiedFormula> sample_formulas(unsigned n, unsigned k, unsigned lits_max,
                                                    std::size_t count, std::uint64_t seed) {
  if (n == 0 || k == 0 || lits_max == 0) throw std::invalid_argument("empty sampling caps");
  std::mt19937_64 rng(seed);
  // Plain modulo keeps the stream identical across standard libraries.
  auto below = [&](std::uint64_t m) { return rng() % m; };
  const auto lits = all_literals(n);
  const std::size_t width = std::min<std::size_t>(lits_max, lits.size());

  std::vector<qbf::QuantifiedFormula> out;
  std::set<std::string> seen;
  std::size_t attempts = 0;
  while (out.size() < count) {
    if (++attempts > count * 1000 + 1000) {
      throw std::invalid_argument("cannot draw that many distinct formulas");
    }
    qbf::QuantifiedFormula f = alternating_prefix(n);
    for (unsigned j = 0; j < k; ++j) {
      const std::size_t size = 1 + below(width);
      std::vector<std::size_t> pool(lits.size());
      for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = i;
      std::vector<std::size_t> pick;
      for (std::size_t t = 0; t < size; ++t) {
        const std::size_t r = t + below(pool.size() - t);
        std::swap(pool[t], pool[r]);
        pick.push_back(pool[t]);
      }
      std::sort(pick.begin(), pick.end());
      qbf::Clause c;
      for (std::size_t i : pick) c.literals.push_back(lits[i]);
      f.clauses.push_back(std::move(c));
    }
    std::sort(f.clauses.begin(), f.clauses.end(),
              [](const qbf::Clause& a, const qbf::Clause& b) { return a.literals < b.literals; });
    if (seen.insert(qbf::serialize_qdimacs(f)).second) out.push_back(std::move(f));
  }
  return out;
}

}  // namespace slimetrail::verify
