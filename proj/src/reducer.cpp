#include "slimetrail/reducer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <tuple>

#include "slimetrail/geometry.hpp"
#include "slimetrail/instance_io.hpp"

namespace slimetrail::reduce {

NotNormalized::NotNormalized()
    : std::invalid_argument("formula prefix must alternate, starting with an existential") {}

MissingEmbedding::MissingEmbedding() : std::logic_error("instance has no embedding") {}

std::string to_string(const Provenance& p) {
  return std::string(to_string(p.gadget.kind)) + "#" + std::to_string(p.gadget.index) + "." +
         p.role;
}

std::size_t count_crossings(std::span<const RouteEndpoints> routes) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < routes.size(); ++i) {
    for (std::size_t j = i + 1; j < routes.size(); ++j) {
      const auto& a = routes[i];
      const auto& b = routes[j];
      if ((a.clause_rank < b.clause_rank && a.port_rank > b.port_rank) ||
          (a.clause_rank > b.clause_rank && a.port_rank < b.port_rank)) {
        ++total;
      }
    }
  }
  return total;
}

namespace {

struct ValidatedFormula {
  std::size_t n = 0;
  // Prefix position (1-based) of each variable.
  std::vector<std::uint32_t> position_of;
};

ValidatedFormula validate(const qbf::QuantifiedFormula& f) {
  if (!f.is_normalized()) throw NotNormalized();
  if (f.prefix.empty()) throw UnsupportedFormula("formula has no quantified variables");
  if (f.clauses.empty()) throw UnsupportedFormula("formula has no clauses");
  ValidatedFormula v;
  v.n = f.prefix.size();
  v.position_of.assign(f.num_vars + 1, 0);
  for (std::size_t i = 0; i < f.prefix.size(); ++i) {
    v.position_of.at(f.prefix[i].variable) = static_cast<std::uint32_t>(i + 1);
  }
  for (const qbf::Clause& c : f.clauses) {
    if (c.literals.empty()) throw UnsupportedFormula("formula has an empty clause");
    for (const qbf::Literal& l : c.literals) {
      if (l.variable > f.num_vars || v.position_of[l.variable] == 0) {
        throw UnsupportedFormula("literal on unquantified variable " +
                                 std::to_string(l.variable));
      }
    }
  }
  return v;
}

// One literal occurrence and where it attaches in the two-layer channel.
struct Occurrence {
  std::uint32_t clause = 0;    // 1-based
  std::uint32_t position = 0;  // within the clause
  qbf::Literal literal;
  std::size_t var_position = 0;  // 1-based prefix position
  std::size_t occurrence = 0;    // index among occurrences of the same literal
  std::size_t rung = 0;          // ladder port it attaches to (0 = top)
  std::size_t slot_rank = 0;     // left-to-right order on the port layer
  std::size_t depth = 0;         // feeder nesting; 0 = innermost
  std::size_t approach = 0;      // fan position when several routes share a port
};

// Ports on the a-side (positive literals) face left and those on the b-side
// face right. Feeders nest with ports higher on the board outermost, which
// forces the port-layer order: left ports bottom-up, then right ports
// top-down. Each literal's occurrences take the ladder rungs in route order
// so that routes of one literal never cross each other.
std::vector<Occurrence> plan_routes(const qbf::QuantifiedFormula& f, const ValidatedFormula& v,
                                    bool ladders) {
  const std::size_t n = v.n;
  std::vector<Occurrence> occ;
  std::map<std::pair<std::size_t, bool>, std::size_t> uses;
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    const auto& lits = f.clauses[j].literals;
    for (std::size_t p = 0; p < lits.size(); ++p) {
      Occurrence o;
      o.clause = static_cast<std::uint32_t>(j + 1);
      o.position = static_cast<std::uint32_t>(p);
      o.literal = lits[p];
      o.var_position = v.position_of[lits[p].variable];
      o.occurrence = uses[{o.var_position, o.literal.negated}]++;
      occ.push_back(o);
    }
  }
  for (Occurrence& o : occ) {
    const std::size_t count = uses[{o.var_position, o.literal.negated}];
    if (!ladders) {
      o.rung = 0;
    } else {
      o.rung = o.literal.negated ? o.occurrence : count - 1 - o.occurrence;
    }
  }

  // (side, major, minor) sort keys; left side first.
  std::vector<std::size_t> order(occ.size());
  std::iota(order.begin(), order.end(), 0);
  const auto key = [&](std::size_t t) {
    const Occurrence& o = occ[t];
    const std::size_t major = o.literal.negated ? o.var_position - 1 : n - o.var_position;
    return std::tuple(o.literal.negated, major, o.occurrence);
  };
  std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return key(x) < key(y); });
  std::size_t left = 0;
  for (const Occurrence& o : occ) left += o.literal.negated ? 0 : 1;
  const std::size_t right = occ.size() - left;
  for (std::size_t r = 0; r < order.size(); ++r) {
    Occurrence& o = occ[order[r]];
    o.slot_rank = r;
    o.depth = o.literal.negated ? right - 1 - (r - left) : r;
  }
  if (!ladders) {
    // Routes sharing a port approach it fanned out, innermost lowest.
    std::map<std::pair<std::size_t, bool>, std::vector<std::size_t>> by_port;
    for (std::size_t t = 0; t < occ.size(); ++t) {
      by_port[{occ[t].var_position, occ[t].literal.negated}].push_back(t);
    }
    for (auto& [port, members] : by_port) {
      std::sort(members.begin(), members.end(),
                [&](std::size_t x, std::size_t y) { return occ[x].depth < occ[y].depth; });
      for (std::size_t i = 0; i < members.size(); ++i) occ[members[i]].approach = i;
    }
  }
  return occ;
}

}  // namespace

std::vector<RouteEndpoints> canonical_endpoints(const qbf::QuantifiedFormula& formula) {
  const ValidatedFormula v = validate(formula);
  std::vector<RouteEndpoints> out;
  std::size_t t = 0;
  for (const Occurrence& o : plan_routes(formula, v, true)) out.push_back({t++, o.slot_rank});
  return out;
}

namespace {

Point add(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
Point sub(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
Point scale(Point a, double s) { return {a.x * s, a.y * s}; }
Point unit(Point a) {
  const double len = std::hypot(a.x, a.y);
  return {a.x / len, a.y / len};
}

class BoardBuilder {
 public:
  template <class Transform>
  PlacedGadget& place(const GadgetInstance& g, Transform to_world) {
    PlacedGadget placed;
    placed.ref = GadgetRef{g.kind, ++counters_[g.kind]};
    for (const LocalNode& local : g.nodes) {
      const NodeId id = node(colors_.size());
      colors_.push_back(local.color);
      positions_.push_back(to_world(local.position));
      provenance_.push_back(Provenance{placed.ref, local.role});
      placed.nodes.push_back(id);
    }
    for (const auto& [a, b] : g.edges) connect(placed.nodes[a], placed.nodes[b], {});
    gadgets_.push_back(std::move(placed));
    return gadgets_.back();
  }

  void connect(NodeId a, NodeId b, std::vector<Point> bends) {
    std::vector<Point> route;
    route.push_back(positions_[a.index()]);
    route.insert(route.end(), bends.begin(), bends.end());
    route.push_back(positions_[b.index()]);
    edges_.push_back({a, b});
    routes_.push_back(std::move(route));
  }

  Point position(NodeId n) const { return positions_[n.index()]; }

  // Moves into `ci`; the builder is spent afterwards.
  void finish(CompiledInstance& ci, NodeId start) {
    std::vector<std::optional<Point>> pos(positions_.begin(), positions_.end());
    auto graph = std::make_shared<const GameGraph>(
        GameGraph::create(std::move(colors_), edges_, start, std::move(pos)));

    std::map<std::pair<std::uint32_t, std::uint32_t>, std::size_t> index;
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      index[{std::min(edges_[e].u.value, edges_[e].v.value),
             std::max(edges_[e].u.value, edges_[e].v.value)}] = e;
    }
    Embedding embedding;
    embedding.positions = positions_;
    for (const Edge& e : graph->edges()) {
      const std::size_t k = index.at({e.u.value, e.v.value});
      std::vector<Point> route = std::move(routes_[k]);
      if (edges_[k].u != e.u) std::reverse(route.begin(), route.end());
      embedding.routes.push_back(std::move(route));
    }

    ci.graph = graph;
    ci.state0 = GameState::initial(graph, Player::Blue);
    ci.embedding = std::move(embedding);
    ci.provenance = std::move(provenance_);
    ci.gadgets = std::move(gadgets_);
  }

 private:
  std::vector<NodeColor> colors_;
  std::vector<Point> positions_;
  std::vector<Provenance> provenance_;
  std::vector<Edge> edges_;
  std::vector<std::vector<Point>> routes_;
  std::vector<PlacedGadget> gadgets_;
  std::map<GadgetKind, std::uint32_t> counters_;
};

struct Crossing {
  std::size_t a = 0;  // route index taking the a-route (smaller rank)
  std::size_t b = 0;
  Point at;
};

struct ChannelLayout {
  std::vector<double> clause_slot_x;  // per route
  std::vector<double> port_slot_x;    // per route
  std::vector<Crossing> crossings;
  double clearance = 0;
};

// Lays the routes out as straight segments between the two layers and finds
// every crossing. Slot positions are jittered deterministically until no
// three routes come close to meeting at one point.
ChannelLayout layout_channel(const std::vector<Occurrence>& occ, double y1, double y2) {
  const double centre = (static_cast<double>(occ.size()) - 1.0) / 2.0;
  ChannelLayout best;
  best.clearance = -1;
  std::mt19937 rng(0x51113);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::uniform_real_distribution<double> jitter(-0.3, 0.3);
    const auto offset = [&] { return attempt == 0 ? 0.0 : jitter(rng); };

    ChannelLayout layout;
    for (std::size_t t = 0; t < occ.size(); ++t) {
      layout.clause_slot_x.push_back(static_cast<double>(t) - centre + offset());
    }
    for (std::size_t t = 0; t < occ.size(); ++t) {
      layout.port_slot_x.push_back(static_cast<double>(occ[t].slot_rank) - centre + offset());
    }
    const auto top = [&](std::size_t t) { return Point{layout.clause_slot_x[t], y1}; };
    const auto bottom = [&](std::size_t t) { return Point{layout.port_slot_x[t], y2}; };

    for (std::size_t a = 0; a < occ.size(); ++a) {
      for (std::size_t b = a + 1; b < occ.size(); ++b) {
        if (occ[a].slot_rank < occ[b].slot_rank) continue;
        const auto at = geom::intersection_point(top(a), bottom(a), top(b), bottom(b));
        if (!at) throw std::logic_error("interleaved routes failed to intersect");
        layout.crossings.push_back({a, b, *at});
      }
    }

    double clearance = std::numeric_limits<double>::infinity();
    for (const Crossing& c : layout.crossings) {
      clearance = std::min({clearance, y1 - c.at.y, c.at.y - y2});
      for (std::size_t t = 0; t < occ.size(); ++t) {
        if (t == c.a || t == c.b) continue;
        clearance = std::min(clearance, geom::point_segment_distance(c.at, top(t), bottom(t)));
      }
    }
    layout.clearance = clearance;
    if (clearance > best.clearance) best = std::move(layout);
    if (best.clearance >= 0.05) break;
  }
  if (best.clearance <= 1e-6) throw std::logic_error("could not separate route crossings");
  return best;
}

}  // namespace

CompiledInstance compile(const qbf::QuantifiedFormula& formula, CompileOptions options) {
  const ValidatedFormula vf = validate(formula);
  const std::size_t n = vf.n;
  const std::size_t k = formula.clauses.size();
  const std::vector<Occurrence> occ = plan_routes(formula, vf, options.port_ladders);

  // Ladder length per (variable position, negated).
  std::map<std::pair<std::size_t, bool>, std::size_t> rungs;
  if (options.port_ladders) {
    for (const Occurrence& o : occ) {
      auto& r = rungs[{o.var_position, o.literal.negated}];
      r = std::max(r, o.rung + 1);
    }
  }
  const auto rung_count = [&](std::size_t pos, bool negated) {
    const auto it = rungs.find({pos, negated});
    return it == rungs.end() ? std::size_t{1} : it->second;
  };

  BoardBuilder board;
  CompiledInstance ci;

  // Gadget chain, top to bottom along x = 0.
  constexpr double kGap = 1.5;
  double cursor = 0;
  std::vector<std::vector<NodeId>> pos_ports(n + 1), neg_ports(n + 1);
  std::optional<NodeId> previous_out;
  const auto chain = [&](const GadgetInstance& g, PortKind start, PortKind out) {
    double lowest = 0;
    for (const LocalNode& ln : g.nodes) lowest = std::min(lowest, ln.position.y);
    const double oy = cursor;
    PlacedGadget& placed = board.place(g, [oy](Point p) { return Point{p.x, p.y + oy}; });
    if (previous_out) board.connect(*previous_out, placed.nodes[g.port({start})], {});
    previous_out = placed.nodes[g.port({out})];
    cursor += lowest - kGap;
    return placed.nodes;
  };

  const GadgetInstance wire = build_wire();
  for (std::size_t i = 1; i <= n; ++i) {
    const std::size_t np = rung_count(i, false), nn = rung_count(i, true);
    const GadgetInstance g = i % 2 == 1 ? build_odd_variable(np, nn) : build_even_variable(np, nn);
    const std::vector<NodeId> ids = chain(g, PortKind::VarStart, PortKind::VarOut);
    for (std::size_t q = 0; q < np; ++q) {
      pos_ports[i].push_back(ids[g.port({PortKind::LiteralPortPos, static_cast<std::uint32_t>(q)})]);
    }
    for (std::size_t q = 0; q < nn; ++q) {
      neg_ports[i].push_back(ids[g.port({PortKind::LiteralPortNeg, static_cast<std::uint32_t>(q)})]);
    }
    chain(wire, PortKind::WireStart, PortKind::WireOut);
  }

  // Choice gadget: Start and c0 on the axis, clause nodes spread above their
  // clause slots.
  const double y_choice = cursor;
  const double y_clause = y_choice - 3;
  const double y1 = y_clause - 1.5;
  const double y2 = y1 - std::max(4.0, 0.5 * static_cast<double>(occ.size()));
  const ChannelLayout channel = layout_channel(occ, y1, y2);

  std::vector<double> clause_x(k + 1, 0);
  {
    std::vector<std::size_t> members(k + 1, 0);
    for (std::size_t t = 0; t < occ.size(); ++t) {
      clause_x[occ[t].clause] += channel.clause_slot_x[t];
      ++members[occ[t].clause];
    }
    for (std::size_t j = 1; j <= k; ++j) clause_x[j] /= static_cast<double>(members[j]);
  }
  const GadgetInstance choice = build_choice(k);
  std::vector<NodeId> clause_node(k + 1);
  {
    std::map<std::string, Point> where;
    where["Start"] = {0, y_choice};
    where["c0"] = {0, y_choice - 1};
    for (std::size_t j = 1; j <= k; ++j) {
      where["c" + std::to_string(j)] = {clause_x[j], y_clause};
      where["red" + std::to_string(j)] = {clause_x[j] - 0.45, y_clause};
    }
    std::vector<Point> placed_at;
    for (const LocalNode& ln : choice.nodes) placed_at.push_back(where.at(ln.role));
    std::size_t next = 0;
    PlacedGadget& placed = board.place(choice, [&](Point) { return placed_at[next++]; });
    board.connect(*previous_out, placed.nodes[choice.port({PortKind::ChoiceStart})], {});
    for (std::size_t j = 1; j <= k; ++j) {
      clause_node[j] = placed.nodes[choice.port({PortKind::ClauseNode, static_cast<std::uint32_t>(j)})];
    }
  }

  const auto top = [&](std::size_t t) { return Point{channel.clause_slot_x[t], y1}; };
  const auto bottom = [&](std::size_t t) { return Point{channel.port_slot_x[t], y2}; };

  // Crossovers along each route, keyed by distance from the clause end.
  struct Station {
    NodeId entry;
    NodeId exit;
    CrossingStep step;
  };
  std::vector<std::vector<std::pair<double, Station>>> stations(occ.size());
  ci.computed_crossings = channel.crossings.size();

  if (options.insert_crossovers) {
    const GadgetInstance cross = build_crossover();
    const double eps = std::min(0.3, channel.clearance / 5.0);
    for (const Crossing& c : channel.crossings) {
      const Point dir_a = unit(sub(bottom(c.a), top(c.a)));
      const Point dir_b = unit(sub(bottom(c.b), top(c.b)));
      PlacedGadget& placed = board.place(cross, [&](Point p) {
        return add(c.at, scale(add(scale(dir_b, -p.x), scale(dir_a, p.y)), eps));
      });
      const auto global = [&](PortKind kind) { return placed.nodes[cross.port({kind})]; };
      stations[c.a].push_back({geom::distance(top(c.a), c.at),
                               {global(PortKind::CrossStartA), global(PortKind::CrossExitA4),
                                {placed.ref.index, true}}});
      stations[c.b].push_back({geom::distance(top(c.b), c.at),
                               {global(PortKind::CrossStartB), global(PortKind::CrossExitB2),
                                {placed.ref.index, false}}});
    }
    ci.crossover_count = channel.crossings.size();
  }

  // Feeders: a U-shaped run from the port slot down, out to the side and up
  // to the port. Ports higher on the board get the outer feeders.
  double half_width = 4.0;
  for (double x : channel.clause_slot_x) half_width = std::max(half_width, std::abs(x) + 1);
  for (double x : channel.port_slot_x) half_width = std::max(half_width, std::abs(x) + 1);
  const auto feeder = [&](std::size_t t, NodeId port) {
    const Occurrence& o = occ[t];
    const double side = o.literal.negated ? 1.0 : -1.0;
    const double depth = static_cast<double>(o.depth);
    const double reach = side * (half_width + 1 + 0.5 * depth);
    const double floor_y = y2 - 1 - 0.5 * depth;
    const Point p = board.position(port);
    const double lift = 0.1 * static_cast<double>(o.approach);
    return std::vector<Point>{bottom(t),
                              Point{bottom(t).x, floor_y},
                              Point{reach, floor_y},
                              Point{reach, p.y + lift},
                              Point{p.x + side * 0.2, p.y + lift}};
  };

  std::vector<LiteralRoute> routes(occ.size());
  for (std::size_t t = 0; t < occ.size(); ++t) {
    auto& st = stations[t];
    std::sort(st.begin(), st.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    const Occurrence& o = occ[t];
    LiteralRoute& r = routes[t];
    r.clause = o.clause;
    r.position = o.position;
    r.literal = o.literal;
    r.rung = static_cast<std::uint32_t>(o.rung);
    r.clause_node = clause_node[o.clause];
    r.port = (o.literal.negated ? neg_ports : pos_ports)[o.var_position].at(o.rung);
    for (const auto& [d, station] : st) r.crossings.push_back(station.step);

    // clause -> [entry .. exit]* -> port; the first hop bends at the clause
    // slot and the last hop follows the feeder.
    std::vector<NodeId> hops{r.clause_node};
    for (const auto& [d, station] : st) {
      hops.push_back(station.entry);
      hops.push_back(station.exit);
    }
    hops.push_back(r.port);
    for (std::size_t h = 0; h + 1 < hops.size(); h += 2) {
      std::vector<Point> bends;
      if (h == 0) bends.push_back(top(t));
      if (h + 2 == hops.size()) {
        const auto tail = feeder(t, r.port);
        bends.insert(bends.end(), tail.begin(), tail.end());
      }
      board.connect(hops[h], hops[h + 1], std::move(bends));
    }
  }

  board.finish(ci, node(0));
  ci.literal_routes = std::move(routes);
  return ci;
}

// --- planarity -------------------------------------------------------------

Embedding straight_line_embedding(const GameGraph& graph) {
  Embedding e;
  for (const auto& p : graph.positions()) {
    if (!p) throw MissingEmbedding();
    e.positions.push_back(*p);
  }
  for (const Edge& edge : graph.edges()) {
    e.routes.push_back({e.positions[edge.u.index()], e.positions[edge.v.index()]});
  }
  return e;
}

namespace {

struct Segment {
  Point a, b;
  std::size_t edge;
  std::size_t index;  // position within the polyline
  bool first, last;
  double min_x, max_x, min_y, max_y;
};

// Segments s and t (from different edges) meet only at the shared node `at`.
bool meets_only_at(const Segment& s, const Segment& t, Point at) {
  const bool s_end = (s.first && s.a == at) || (s.last && s.b == at);
  const bool t_end = (t.first && t.a == at) || (t.last && t.b == at);
  if (!s_end || !t_end) return false;
  const Point s_other = s.a == at ? s.b : s.a;
  const Point t_other = t.a == at ? t.b : t.a;
  if (geom::orientation(at, s_other, t_other) != 0) return true;
  // Collinear: fine only if they leave `at` in opposite directions.
  const double dot = (s_other.x - at.x) * (t_other.x - at.x) + (s_other.y - at.y) * (t_other.y - at.y);
  return dot < 0;
}

}  // namespace

bool check_planar_embedding(const GameGraph& graph, const Embedding& emb) {
  const std::size_t V = graph.node_count();
  const auto edges = graph.edges();
  const std::size_t E = edges.size();
  if (emb.positions.size() != V || emb.routes.size() != E) return false;

  {
    std::vector<Point> sorted = emb.positions;
    std::sort(sorted.begin(), sorted.end(),
              [](Point a, Point b) { return a.x != b.x ? a.x < b.x : a.y < b.y; });
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) return false;
  }

  std::vector<Segment> segments;
  for (std::size_t e = 0; e < E; ++e) {
    const auto& route = emb.routes[e];
    if (route.size() < 2) return false;
    if (route.front() != emb.positions[edges[e].u.index()] ||
        route.back() != emb.positions[edges[e].v.index()]) {
      return false;
    }
    for (std::size_t i = 0; i + 1 < route.size(); ++i) {
      const Point a = route[i], b = route[i + 1];
      if (a == b) return false;
      segments.push_back({a, b, e, i, i == 0, i + 2 == route.size(), std::min(a.x, b.x),
                          std::max(a.x, b.x), std::min(a.y, b.y), std::max(a.y, b.y)});
    }
  }
  std::sort(segments.begin(), segments.end(),
            [](const Segment& s, const Segment& t) { return s.min_x < t.min_x; });

  for (std::size_t i = 0; i < segments.size(); ++i) {
    const Segment& s = segments[i];
    for (std::size_t j = i + 1; j < segments.size() && segments[j].min_x <= s.max_x; ++j) {
      const Segment& t = segments[j];
      if (t.min_y > s.max_y || t.max_y < s.min_y) continue;
      if (!geom::segments_intersect(s.a, s.b, t.a, t.b)) continue;
      if (s.edge == t.edge) {
        const std::size_t gap = s.index > t.index ? s.index - t.index : t.index - s.index;
        if (gap != 1) return false;
        // Consecutive pieces share a bend; they must not fold back.
        const Segment& lo = s.index < t.index ? s : t;
        const Segment& hi = s.index < t.index ? t : s;
        if (geom::orientation(lo.a, lo.b, hi.b) == 0 &&
            (hi.b.x - lo.b.x) * (lo.a.x - lo.b.x) + (hi.b.y - lo.b.y) * (lo.a.y - lo.b.y) > 0) {
          return false;
        }
        continue;
      }
      const Edge& es = edges[s.edge];
      const Edge& et = edges[t.edge];
      std::optional<NodeId> shared;
      for (NodeId x : {es.u, es.v}) {
        if (x == et.u || x == et.v) shared = x;
      }
      if (!shared || !meets_only_at(s, t, emb.positions[shared->index()])) return false;
    }
  }

  // No polyline may pass through a node it does not end at.
  for (std::size_t v = 0; v < V; ++v) {
    const Point p = emb.positions[v];
    for (const Segment& s : segments) {
      if (p.x < s.min_x || p.x > s.max_x || p.y < s.min_y || p.y > s.max_y) continue;
      const Edge& e = edges[s.edge];
      if (e.u.index() == v || e.v.index() == v) continue;
      if (geom::on_segment(p, s.a, s.b)) return false;
    }
  }

  // Rotation system from the first segment of each dart, then face tracing.
  // Dart 2e runs u->v, dart 2e+1 runs v->u.
  std::vector<std::vector<std::pair<double, std::size_t>>> rotation(V);
  for (std::size_t e = 0; e < E; ++e) {
    const auto& route = emb.routes[e];
    const Point u = route.front(), u_next = route[1];
    const Point v = route.back(), v_next = route[route.size() - 2];
    rotation[edges[e].u.index()].push_back({std::atan2(u_next.y - u.y, u_next.x - u.x), 2 * e});
    rotation[edges[e].v.index()].push_back({std::atan2(v_next.y - v.y, v_next.x - v.x), 2 * e + 1});
  }
  std::vector<std::size_t> slot(2 * E);
  for (auto& r : rotation) {
    std::sort(r.begin(), r.end());
    for (std::size_t i = 0; i < r.size(); ++i) slot[r[i].second] = i;
  }
  const auto head = [&](std::size_t dart) {
    const Edge& e = edges[dart / 2];
    return dart % 2 == 0 ? e.v : e.u;
  };
  std::vector<std::uint8_t> seen(2 * E, 0);
  std::size_t faces = 0;
  for (std::size_t d0 = 0; d0 < 2 * E; ++d0) {
    if (seen[d0]) continue;
    ++faces;
    for (std::size_t d = d0; !seen[d];) {
      seen[d] = 1;
      const std::size_t back = d ^ 1;  // same edge leaving the head
      const auto& r = rotation[head(d).index()];
      d = r[(slot[back] + 1) % r.size()].second;
    }
  }
  return static_cast<long long>(V) - static_cast<long long>(E) + static_cast<long long>(faces) == 2;
}

bool check_planar_embedding(const CompiledInstance& ci) {
  if (!ci.embedding) throw MissingEmbedding();
  return check_planar_embedding(*ci.graph, *ci.embedding);
}

// --- export ----------------------------------------------------------------

namespace {

std::string dot_colour(NodeColor c) {
  switch (c) {
    case NodeColor::BlueGoal:
      return "blue";
    case NodeColor::RedGoal:
      return "red";
    case NodeColor::Plain:
      break;
  }
  return "black";
}

std::string write_dot(const GameGraph& graph, const std::vector<Provenance>* provenance) {
  std::ostringstream out;
  out << "graph slimetrail {\n";
  out << "  node [shape=circle];\n";
  std::optional<GadgetRef> current;
  for (std::size_t i = 0; i < graph.node_count(); ++i) {
    const NodeId id = node(i);
    if (provenance && (!current || !(*current == (*provenance)[i].gadget))) {
      current = (*provenance)[i].gadget;
      out << "  // " << to_string(current->kind) << '#' << current->index << '\n';
    }
    out << "  n" << i << " [label=\"" << i << "\", color=" << dot_colour(graph.color(id));
    if (const auto& p = graph.position(id)) {
      out << ", pos=\"" << format_coordinate(p->x) << ',' << format_coordinate(p->y) << "!\"";
    }
    if (provenance) out << ", tooltip=\"" << to_string((*provenance)[i]) << '"';
    out << "];\n";
  }
  for (const Edge& e : graph.edges()) out << "  n" << e.u.value << " -- n" << e.v.value << ";\n";
  out << "}\n";
  return out.str();
}

}  // namespace

std::string export_dot(const GameGraph& graph) { return write_dot(graph, nullptr); }

std::string export_dot(const CompiledInstance& ci) { return write_dot(*ci.graph, &ci.provenance); }

std::string format_provenance(const CompiledInstance& ci) {
  std::ostringstream out;
  for (std::size_t i = 0; i < ci.provenance.size(); ++i) {
    out << i << ' ' << to_string(ci.provenance[i]) << '\n';
  }
  return out.str();
}

}  // namespace slimetrail::reduce
