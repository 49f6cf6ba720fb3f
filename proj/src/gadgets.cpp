#include "slimetrail/gadgets.hpp"

#include <algorithm>
#include <stdexcept>

namespace slimetrail::reduce {

std::string_view to_string(GadgetKind kind) noexcept {
  switch (kind) {
    case GadgetKind::OddVar:
      return "OddVar";
    case GadgetKind::EvenVar:
      return "EvenVar";
    case GadgetKind::Wire:
      return "Wire";
    case GadgetKind::Choice:
      return "Choice";
    case GadgetKind::Crossover:
      return "Crossover";
  }
  return "?";
}

std::size_t GadgetInstance::node_index(std::string_view role) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].role == role) return i;
  }
  throw std::out_of_range("gadget has no node '" + std::string(role) + "'");
}

std::size_t GadgetInstance::degree(std::string_view role) const {
  const std::size_t n = node_index(role);
  return static_cast<std::size_t>(std::count_if(
      edges.begin(), edges.end(), [n](const auto& e) { return e.first == n || e.second == n; }));
}

std::size_t GadgetInstance::goal_count(NodeColor color) const {
  return static_cast<std::size_t>(std::count_if(
      nodes.begin(), nodes.end(), [color](const LocalNode& n) { return n.color == color; }));
}

namespace {

class Builder {
 public:
  explicit Builder(GadgetKind kind) { g_.kind = kind; }

  Builder& add(std::string role, double x, double y, NodeColor color = NodeColor::Plain) {
    g_.nodes.push_back({std::move(role), color, Point{x, y}});
    return *this;
  }
  Builder& link(std::string_view a, std::string_view b) {
    g_.edges.emplace_back(g_.node_index(a), g_.node_index(b));
    return *this;
  }
  Builder& port(PortKind kind, std::string_view role, std::uint32_t index = 0) {
    g_.ports[PortRole{kind, index}] = g_.node_index(role);
    return *this;
  }
  GadgetInstance done() { return std::move(g_); }

 private:
  GadgetInstance g_;
};

}  // namespace

namespace {

constexpr double kRungPitch = 1.6;

// Ports p1..pr hanging below `first` on one side (sign -1 = a, +1 = b).
void add_ladder(Builder& b, double sign, const std::string& first, std::size_t ports,
                       double top_y, PortKind kind) {
  b.add(first, sign * 3, top_y);
  b.port(kind, first, 0);
  std::string last = first;
  for (std::size_t q = 1; q < ports; ++q) {
    const std::string tag = std::to_string(q);
    const std::string hub = first + ".h" + tag;
    const std::string goal = first + ".g" + tag;
    const std::string next = first + ".p" + std::to_string(q + 1);
    const double y = top_y - kRungPitch * static_cast<double>(q - 1) - kRungPitch / 2;
    b.add(hub, sign * 2.4, y)
        .add(goal, sign * 1.8, y, NodeColor::BlueGoal)
        .add(next, sign * 3, y - kRungPitch / 2)
        .link(last, hub)
        .link(hub, goal)
        .link(hub, next);
    b.port(kind, next, static_cast<std::uint32_t>(q));
    last = next;
  }
}

void check_ports(std::size_t pos_ports, std::size_t neg_ports) {
  if (pos_ports == 0 || neg_ports == 0) {
    throw std::invalid_argument("a variable gadget needs at least one port per side");
  }
}

}  // namespace

GadgetInstance build_odd_variable(std::size_t pos_ports, std::size_t neg_ports) {
  check_ports(pos_ports, neg_ports);
  const double extra = kRungPitch * static_cast<double>(std::max(pos_ports, neg_ports) - 1);
  Builder b(GadgetKind::OddVar);
  b.add("Start", 0, 0);
  for (const double sign : {-1.0, 1.0}) {
    const std::string s = sign < 0 ? "a" : "b";
    const std::string goal = sign < 0 ? "blue1" : "blue2";
    const bool pos_side = sign < 0;
    b.add(s + "1", sign * 1, -1);
    add_ladder(b, sign, s + "2", pos_side ? pos_ports : neg_ports, -2,
               pos_side ? PortKind::LiteralPortPos : PortKind::LiteralPortNeg);
    b.add(s + "3", sign * 2, -3 - extra)
        .add(s + "4", sign * 2.2, -4.4 - extra)
        .add(s + "5", sign * 1, -4.6 - extra)
        .add(goal, sign * 1.2, -2.6 - extra, NodeColor::BlueGoal);
  }
  b.add("Out", 0, -6 - extra);
  for (const char* side : {"a", "b"}) {
    const std::string s(side);
    const std::string goal = s == "a" ? "blue1" : "blue2";
    const std::size_t ports = s == "a" ? pos_ports : neg_ports;
    const std::string last = ports == 1 ? s + "2" : s + "2.p" + std::to_string(ports);
    b.link("Start", s + "1")
        .link(s + "1", s + "2")
        .link(last, s + "3")
        .link(s + "3", goal)
        .link(s + "3", s + "4")
        .link(s + "3", s + "5")
        .link(s + "4", s + "5")
        .link(s + "5", "Out");
  }
  return b.port(PortKind::VarStart, "Start").port(PortKind::VarOut, "Out").done();
}

GadgetInstance build_even_variable(std::size_t pos_ports, std::size_t neg_ports) {
  check_ports(pos_ports, neg_ports);
  const double extra = kRungPitch * static_cast<double>(std::max(pos_ports, neg_ports) - 1);
  Builder b(GadgetKind::EvenVar);
  b.add("Start", 0, 0).add("q0", 0, -1);
  for (const double sign : {-1.0, 1.0}) {
    const std::string s = sign < 0 ? "a" : "b";
    const std::string goal = sign < 0 ? "blue1" : "blue2";
    const bool pos_side = sign < 0;
    add_ladder(b, sign, s + "1", pos_side ? pos_ports : neg_ports, -2,
               pos_side ? PortKind::LiteralPortPos : PortKind::LiteralPortNeg);
    b.add(s + "2", sign * 2, -3 - extra)
        .add(s + "3", sign * 2.2, -4.4 - extra)
        .add(s + "4", sign * 1, -4.6 - extra)
        .add(goal, sign * 1.2, -2.6 - extra, NodeColor::BlueGoal);
  }
  b.add("Out", 0, -6 - extra);
  b.link("Start", "q0");
  for (const char* side : {"a", "b"}) {
    const std::string s(side);
    const std::string goal = s == "a" ? "blue1" : "blue2";
    const std::size_t ports = s == "a" ? pos_ports : neg_ports;
    const std::string last = ports == 1 ? s + "1" : s + "1.p" + std::to_string(ports);
    b.link("q0", s + "1")
        .link(last, s + "2")
        .link(s + "2", s + "3")
        .link(s + "2", goal)
        .link(s + "2", s + "4")
        .link(s + "3", s + "4")
        .link(s + "4", "Out");
  }
  return b.port(PortKind::VarStart, "Start").port(PortKind::VarOut, "Out").done();
}

GadgetInstance build_wire() {
  Builder b(GadgetKind::Wire);
  b.add("Start", 0, 0)
      .add("a1", -1, -1)
      .add("b1", 1, -1)
      .add("a2", -2.5, -1)
      .add("blue1", -3, -0.3, NodeColor::BlueGoal)
      .add("red1", -3, -1.7, NodeColor::RedGoal)
      .add("b2", 1, -2.5)
      .add("b3", 2.5, -2.5)
      .add("blue2", 3, -1.8, NodeColor::BlueGoal)
      .add("red2", 3, -3.2, NodeColor::RedGoal)
      .add("a3", -1, -2.5)
      .add("a4", -1, -4)
      .add("blue3", -2, -4, NodeColor::BlueGoal)
      .add("b4", 1, -4.5)
      .add("red3", 2, -4.5, NodeColor::RedGoal)
      .add("a5", -1, -5.5)
      .add("Out", 0, -7);
  b.link("Start", "a1")
      .link("Start", "b1")
      .link("a1", "a2")
      .link("a1", "a3")
      .link("b1", "b2")
      .link("a2", "blue1")
      .link("a2", "red1")
      .link("b2", "b3")
      .link("b2", "b4")
      .link("a3", "a4")
      .link("a4", "a5")
      .link("a4", "blue3")
      .link("a5", "Out")
      .link("b3", "blue2")
      .link("b3", "red2")
      .link("b4", "Out")
      .link("b4", "red3");
  return b.port(PortKind::WireStart, "Start").port(PortKind::WireOut, "Out").done();
}

GadgetInstance build_choice(std::size_t clause_count) {
  if (clause_count == 0) throw std::invalid_argument("choice gadget needs at least one clause");
  Builder b(GadgetKind::Choice);
  b.add("Start", 0, 0).add("c0", 0, -1);
  const double centre = (static_cast<double>(clause_count) + 1.0) / 2.0;
  for (std::size_t j = 1; j <= clause_count; ++j) {
    const double x = (static_cast<double>(j) - centre) * 2.0;
    b.add("c" + std::to_string(j), x, -3)
        .add("red" + std::to_string(j), x - 0.45, -3, NodeColor::RedGoal);
  }
  b.link("Start", "c0");
  for (std::size_t j = 1; j <= clause_count; ++j) {
    const std::string c = "c" + std::to_string(j);
    b.link("c0", c).link(c, "red" + std::to_string(j));
    b.port(PortKind::ClauseNode, c, static_cast<std::uint32_t>(j));
  }
  return b.port(PortKind::ChoiceStart, "Start").done();
}

GadgetInstance build_crossover() {
  Builder b(GadgetKind::Crossover);
  b.add("Start_a", 0, -1)
      .add("Start_b", 1, 0)
      .add("a1", 0, -0.7)
      .add("a2", 0, -0.35)
      .add("a3", 0, 0.4)
      .add("a4", 0, 1)
      .add("b1", 0.5, 0)
      .add("b2", -1, 0)
      .add("Cross", 0, 0)
      .add("blue1", -0.4, -0.35, NodeColor::BlueGoal)
      .add("blue3", -0.4, 0.4, NodeColor::BlueGoal)
      .add("red1", 0.5, 0.5, NodeColor::RedGoal)
      .add("red2", -0.8, -0.5, NodeColor::RedGoal)
      .add("red3", -0.4, 0.85, NodeColor::RedGoal);
  b.link("Start_a", "a1")
      .link("a1", "a2")
      .link("a2", "blue1")
      .link("a2", "Cross")
      .link("Start_b", "b1")
      .link("b1", "Cross")
      .link("b1", "red1")
      .link("Cross", "a3")
      .link("Cross", "b2")
      .link("a3", "blue3")
      .link("a3", "a4")
      .link("a4", "red3")
      .link("b2", "red2");
  return b.port(PortKind::CrossStartA, "Start_a")
      .port(PortKind::CrossStartB, "Start_b")
      .port(PortKind::CrossExitA4, "a4")
      .port(PortKind::CrossExitB2, "b2")
      .done();
}

}  // namespace slimetrail::reduce
