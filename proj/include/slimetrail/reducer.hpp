// Compiles a normalized quantified formula into a planar Slime Trail board.
//
// Gadgets are chained Var(x1) - Wire - Var(x2) - Wire - ... - Wire - Choice(k)
// and every clause literal is routed from its clause node to a literal port.
// Routes run through a two-layer channel below the choice gadget: clause
// slots on the upper layer, port slots on the lower layer. Two routes cross
// exactly when their slot orders are inverted, and every crossing is
// replaced by a crossover gadget.

#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "slimetrail/gadgets.hpp"
#include "slimetrail/game.hpp"
#include "slimetrail/qbf.hpp"

namespace slimetrail::reduce {

class NotNormalized : public std::invalid_argument {
 public:
  NotNormalized();
};

// A normalized formula the construction cannot express (no clauses or no
// variables).
class UnsupportedFormula : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class MissingEmbedding : public std::logic_error {
 public:
  MissingEmbedding();
};

struct GadgetRef {
  GadgetKind kind = GadgetKind::OddVar;
  std::uint32_t index = 0;  // 1-based within its kind
  friend bool operator==(const GadgetRef&, const GadgetRef&) = default;
};

struct Provenance {
  GadgetRef gadget;
  std::string role;
  friend bool operator==(const Provenance&, const Provenance&) = default;
};

// "<kind>#<index>.<role>", e.g. "OddVar#1.Start".
std::string to_string(const Provenance& p);

struct Embedding {
  std::vector<Point> positions;
  // Parallel to GameGraph::edges(); each polyline runs from the position of
  // edge.u to the position of edge.v.
  std::vector<std::vector<Point>> routes;
};

struct CrossingStep {
  std::uint32_t crossover = 0;  // 1-based crossover gadget index
  bool a_route = false;         // entered at Start_a (else Start_b)
};

struct LiteralRoute {
  std::uint32_t clause = 0;    // 1-based
  std::uint32_t position = 0;  // 0-based within the clause
  qbf::Literal literal;
  // Crossovers in traversal order from the clause node towards the port.
  std::vector<CrossingStep> crossings;
  NodeId clause_node;
  NodeId port;
  std::uint32_t rung = 0;  // which port of the variable's ladder (0 = top)
};

struct PlacedGadget {
  GadgetRef ref;
  std::vector<NodeId> nodes;  // local index -> global id
};

struct CompileOptions {
  // Debug: leave route crossings in place instead of inserting crossovers.
  bool insert_crossovers = true;
  // Give every literal occurrence its own port on a ladder. When false, all
  // occurrences of a literal attach to the one port of the plain gadget;
  // that wiring lets the player answering a port entry escape down a sibling
  // route and is unsound. Kept to demonstrate exactly that.
  bool port_ladders = true;
};

struct CompiledInstance {
  std::shared_ptr<const GameGraph> graph;
  GameState state0;
  std::optional<Embedding> embedding;
  std::vector<Provenance> provenance;  // indexed by node id
  std::vector<LiteralRoute> literal_routes;
  std::vector<PlacedGadget> gadgets;
  std::size_t crossover_count = 0;
  // Crossings of the canonical routing before any crossover was inserted.
  std::size_t computed_crossings = 0;
};

CompiledInstance compile(const qbf::QuantifiedFormula& formula, CompileOptions options = {});

// Endpoints of one route in the two-layer model: rank of its clause slot on
// the upper layer and of its port slot on the lower layer.
struct RouteEndpoints {
  std::size_t clause_rank = 0;
  std::size_t port_rank = 0;
};

// Number of route pairs whose endpoint orders strictly interleave.
std::size_t count_crossings(std::span<const RouteEndpoints> routes);

// Canonical endpoints for every literal occurrence of a normalized formula,
// in (clause, position) order. Port slots run a(x_n) ... a(x_1) b(x_1) ...
// b(x_n) along the channel; occurrences of one literal keep route order.
std::vector<RouteEndpoints> canonical_endpoints(const qbf::QuantifiedFormula& formula);

// No two edge polylines meet except at a shared endpoint, no polyline passes
// through a node, and the rotation system satisfies V - E + F = 2.
bool check_planar_embedding(const CompiledInstance& ci);
bool check_planar_embedding(const GameGraph& graph, const Embedding& embedding);

// Straight-line embedding from the node positions stored on a board.
Embedding straight_line_embedding(const GameGraph& graph);

std::string export_dot(const CompiledInstance& ci);
std::string export_dot(const GameGraph& graph);

// One "<id> <kind>#<index>.<role>" line per node.
std::string format_provenance(const CompiledInstance& ci);

}  // namespace slimetrail::reduce
