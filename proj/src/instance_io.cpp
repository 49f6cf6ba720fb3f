#include "slimetrail/instance_io.hpp"

#include <charconv>
#include <optional>
#include <sstream>

#include "slimetrail/text_util.hpp"

namespace slimetrail {

namespace {

NodeId parse_node_id(std::string_view token, std::size_t line) {
  const auto value = parse_unsigned(token);
  if (!value || *value > UINT32_MAX - 1) {
    throw ParseError(line, "invalid node id '" + std::string(token) + "'");
  }
  return node(*value);
}

Player parse_player(std::string_view token, std::size_t line) {
  if (token == "blue") return Player::Blue;
  if (token == "red") return Player::Red;
  throw ParseError(line, "expected blue or red, got '" + std::string(token) + "'");
}

NodeColor parse_color(std::string_view token, std::size_t line) {
  if (token == "plain") return NodeColor::Plain;
  if (token == "blue") return NodeColor::BlueGoal;
  if (token == "red") return NodeColor::RedGoal;
  throw ParseError(line, "unknown node colour '" + std::string(token) + "'");
}

double parse_coordinate(std::string_view token, std::size_t line) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw ParseError(line, "invalid coordinate '" + std::string(token) + "'");
  }
  return value;
}

void expect_arity(const std::vector<std::string_view>& words, std::size_t n,
                  std::size_t line) {
  if (words.size() != n) {
    throw ParseError(line, "'" + std::string(words[0]) + "' expects " +
                               std::to_string(n - 1) + " argument(s)");
  }
}

}  // namespace

std::string format_coordinate(double value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

Instance parse_instance(std::string_view text) {
  const auto lines = split_lines(text);
  std::size_t index = 0;
  std::size_t header_line = 0;
  while (index < lines.size()) {
    auto words = split_words(strip_comment(lines[index], '#'));
    ++index;
    if (words.empty()) continue;
    if (words.size() != 2 || words[0] != "slimetrail" || words[1] != "v1") {
      throw ParseError(index, "expected header 'slimetrail v1'");
    }
    header_line = index;
    break;
  }
  if (header_line == 0) throw ParseError(0, "missing header 'slimetrail v1'");

  std::vector<std::optional<NodeColor>> colors;
  std::vector<std::optional<Point>> positions;
  std::vector<std::size_t> node_lines;
  std::vector<std::pair<Edge, std::size_t>> edges;
  std::optional<NodeId> token;
  std::optional<Player> turn;
  std::vector<std::pair<NodeId, std::size_t>> slimed;

  for (; index < lines.size(); ++index) {
    const std::size_t line = index + 1;
    auto words = split_words(strip_comment(lines[index], '#'));
    if (words.empty()) continue;
    const std::string_view directive = words[0];
    if (directive == "node") {
      if (words.size() != 3 && words.size() != 5) {
        throw ParseError(line, "'node' expects <id> <colour> [<x> <y>]");
      }
      const NodeId id = parse_node_id(words[1], line);
      if (id.index() >= colors.size()) {
        colors.resize(id.index() + 1);
        positions.resize(id.index() + 1);
        node_lines.resize(id.index() + 1, 0);
      }
      if (colors[id.index()]) {
        throw ParseError(line, "node " + std::string(words[1]) + " declared twice");
      }
      colors[id.index()] = parse_color(words[2], line);
      node_lines[id.index()] = line;
      if (words.size() == 5) {
        positions[id.index()] =
            Point{parse_coordinate(words[3], line), parse_coordinate(words[4], line)};
      }
    } else if (directive == "edge") {
      expect_arity(words, 3, line);
      edges.push_back({Edge{parse_node_id(words[1], line), parse_node_id(words[2], line)},
                       line});
    } else if (directive == "token") {
      expect_arity(words, 2, line);
      if (token) throw ParseError(line, "duplicate 'token'");
      token = parse_node_id(words[1], line);
    } else if (directive == "turn") {
      expect_arity(words, 2, line);
      if (turn) throw ParseError(line, "duplicate 'turn'");
      turn = parse_player(words[1], line);
    } else if (directive == "slimed") {
      expect_arity(words, 2, line);
      slimed.push_back({parse_node_id(words[1], line), line});
    } else {
      throw ParseError(line, "unknown directive '" + std::string(directive) + "'");
    }
  }

  const std::size_t eof_line = lines.size();
  if (colors.empty()) throw ParseError(eof_line, "no nodes declared");
  std::vector<NodeColor> dense(colors.size());
  for (std::size_t i = 0; i < colors.size(); ++i) {
    if (!colors[i]) {
      throw ParseError(eof_line, "node ids are not dense: " + std::to_string(i) +
                                     " is missing");
    }
    dense[i] = *colors[i];
  }
  auto check_ref = [&](NodeId id, std::size_t line) {
    if (id.index() >= dense.size()) {
      throw ParseError(line, "unknown node " + std::to_string(id.value));
    }
  };
  std::vector<Edge> edge_list;
  edge_list.reserve(edges.size());
  for (const auto& [e, line] : edges) {
    check_ref(e.u, line);
    check_ref(e.v, line);
    edge_list.push_back(e);
  }
  if (!token) throw ParseError(eof_line, "missing 'token'");
  check_ref(*token, eof_line);
  NodeSet slimed_set(dense.size());
  for (const auto& [id, line] : slimed) {
    check_ref(id, line);
    slimed_set.insert(id);
  }

  bool any_position = false;
  for (const auto& p : positions) any_position |= p.has_value();
  if (!any_position) positions.clear();

  auto graph = std::make_shared<const GameGraph>(
      GameGraph::create(std::move(dense), std::move(edge_list), *token, std::move(positions)));
  GameState state = GameState::from_position(graph, *token, turn.value_or(Player::Blue),
                                             std::move(slimed_set));
  return Instance{std::move(graph), std::move(state)};
}

std::string serialize_instance(const GameState& state) {
  const GameGraph& g = state.graph();
  std::ostringstream out;
  out << "slimetrail v1\n";
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    out << "node " << i << ' ' << to_string(g.color(node(i)));
    if (const auto& p = g.position(node(i))) {
      out << ' ' << format_coordinate(p->x) << ' ' << format_coordinate(p->y);
    }
    out << '\n';
  }
  for (const Edge& e : g.edges()) out << "edge " << e.u.value << ' ' << e.v.value << '\n';
  out << "token " << state.token().value << '\n';
  out << "turn " << to_string(state.to_move()) << '\n';
  for (NodeId n : state.slimed().members()) out << "slimed " << n.value << '\n';
  return out.str();
}

}  // namespace slimetrail
