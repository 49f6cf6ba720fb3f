// Reusable subgraphs for compiling quantified formulas into Slime Trail
// boards. Each builder returns the gadget in its own local frame; the
// compiler renumbers nodes and places the layout.

#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "slimetrail/game.hpp"

namespace slimetrail::reduce {

enum class GadgetKind : std::uint8_t { OddVar, EvenVar, Wire, Choice, Crossover };

std::string_view to_string(GadgetKind kind) noexcept;

enum class PortKind : std::uint8_t {
  VarStart,
  VarOut,
  LiteralPortPos,
  LiteralPortNeg,
  WireStart,
  WireOut,
  ChoiceStart,
  ClauseNode,
  CrossStartA,
  CrossStartB,
  CrossExitA4,
  CrossExitB2,
};

struct PortRole {
  PortKind kind;
  // Clause number (1-based) for ClauseNode; rung number (0-based, top
  // first) for literal ports; 0 otherwise.
  std::uint32_t index = 0;

  friend constexpr auto operator<=>(const PortRole&, const PortRole&) = default;
};

struct LocalNode {
  std::string role;
  NodeColor color = NodeColor::Plain;
  Point position;
};

struct GadgetInstance {
  GadgetKind kind;
  std::vector<LocalNode> nodes;
  std::vector<std::pair<std::size_t, std::size_t>> edges;
  std::map<PortRole, std::size_t> ports;

  std::size_t node_index(std::string_view role) const;
  std::size_t port(PortRole role) const { return ports.at(role); }
  std::size_t degree(std::string_view role) const;
  std::size_t goal_count(NodeColor color) const;
};

// Odd (first player) variable. Choosing the a-side sets the variable false
// and slimes LiteralPortPos (a2); the b-side sets it true and slimes
// LiteralPortNeg (b2).
//
// A side that must host several literal occurrences gets a port ladder: the
// single port is replaced by ports p1..pr in series, separated by hubs that
// each touch their own blue goal (roles "a2" = p1, "a2.h1", "a2.g1",
// "a2.p2", ...). Every occurrence then owns a port, the ladder is slimed as
// a whole when its side is taken, and a player answering an entered port can
// only step onto a hub next to a blue goal. With one port per side the
// gadget is exactly the 14-node, 16-edge figure.
GadgetInstance build_odd_variable(std::size_t pos_ports = 1, std::size_t neg_ports = 1);

// Even (second player) variable: Start leads through q0 to the choice.
// LiteralPortPos = a1, LiteralPortNeg = b1; ladders as above, hanging off a1
// and b1.
GadgetInstance build_even_variable(std::size_t pos_ports = 1, std::size_t neg_ports = 1);

// Turn normaliser: whichever side enters Start, Red makes the move out of Out.
GadgetInstance build_wire();

// Red picks a clause c_j from c0; each c_j sits next to its own red goal.
GadgetInstance build_choice(std::size_t clause_count);

// Two routes cross at `Cross`: Start_a..a4 (5 edges) and Start_b..b2 (3 edges).
// The local frame is the square [-1,1]^2 with Start_a at the bottom, a4 at the
// top, Start_b on the right and b2 on the left.
GadgetInstance build_crossover();

}  // namespace slimetrail::reduce
