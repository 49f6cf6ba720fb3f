#include "slimetrail/service.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <mutex>
#include <numbers>
#include <random>
#include <shared_mutex>
#include <unordered_map>
#include <vector>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "slimetrail/instance_io.hpp"
#include "slimetrail/qbf.hpp"
#include "slimetrail/reducer.hpp"
#include "slimetrail/solver.hpp"
#include "slimetrail/text_util.hpp"

namespace slimetrail::service {

namespace {

using json = nlohmann::ordered_json;

struct Session {
  std::mutex mutex;
  GameState state0;
  GameState current;
  std::vector<Move> history;
  std::vector<Point> layout;
  std::vector<std::string> provenance;         // QBF games only
  std::vector<std::vector<Point>> routes;      // QBF games only, parallel to edges
  std::int64_t created_ms = 0;
  std::int64_t updated_ms = 0;
};

std::int64_t now_ms() {
  return std::chrono::duration_cast<std::chrono::milliseconds>(
             std::chrono::system_clock::now().time_since_epoch())
      .count();
}

Response reply(int status, const json& body) { return Response{status, body.dump()}; }

Response error(int status, std::string_view kind, std::string_view detail) {
  return reply(status, json{{"error", kind}, {"detail", detail}});
}

// Stored coordinates where present, a circle otherwise.
std::vector<Point> board_layout(const GameGraph& g) {
  std::vector<Point> out(g.node_count());
  const double m = static_cast<double>(g.node_count());
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    if (const auto& p = g.position(node(i))) {
      out[i] = *p;
    } else {
      const double t = 2 * std::numbers::pi * static_cast<double>(i) / m;
      out[i] = Point{std::cos(t), std::sin(t)};
    }
  }
  return out;
}

std::string status_string(const Outcome& o) {
  if (o.ongoing()) return "ongoing";
  return "won:" + std::string(to_string(*o.winner));
}

json reason_json(TerminalClause c) {
  switch (c) {
    case TerminalClause::GoalCapture:
      return "goal";
    case TerminalClause::BlueGoalsCut:
      return "blue-goals-cut";
    case TerminalClause::RedGoalsCut:
      return "red-goals-cut";
    case TerminalClause::None:
      break;
  }
  return nullptr;
}

json state_json(const std::string& id, const Session& s) {
  const GameState& st = s.current;
  const GameGraph& g = st.graph();
  json nodes = json::array();
  for (std::size_t i = 0; i < g.node_count(); ++i) {
    nodes.push_back({{"id", i},
                     {"color", to_string(g.color(node(i)))},
                     {"x", s.layout[i].x},
                     {"y", s.layout[i].y},
                     {"slimed", st.is_slimed(node(i))}});
  }
  json edges = json::array();
  for (const Edge& e : g.edges()) edges.push_back({e.u.value, e.v.value});
  json history = json::array();
  for (const Move& m : s.history) history.push_back(m.to.value);

  json out{{"game_id", id},
           {"nodes", std::move(nodes)},
           {"edges", std::move(edges)},
           {"token", st.token().value},
           {"turn", to_string(st.to_move())},
           {"status", status_string(st.status())},
           {"status_reason", reason_json(st.status().clause)},
           {"history", std::move(history)},
           {"created_ms", s.created_ms},
           {"updated_ms", s.updated_ms}};
  if (!s.provenance.empty()) out["provenance"] = s.provenance;
  if (!s.routes.empty()) {
    json routes = json::array();
    for (const auto& r : s.routes) {
      json line = json::array();
      for (const Point& p : r) line.push_back({p.x, p.y});
      routes.push_back(std::move(line));
    }
    out["routes"] = std::move(routes);
  }
  return out;
}

std::vector<std::string_view> split_path(std::string_view path) {
  std::vector<std::string_view> parts;
  while (!path.empty()) {
    if (path.front() == '/') {
      path.remove_prefix(1);
      continue;
    }
    const auto slash = path.find('/');
    parts.push_back(path.substr(0, slash));
    if (slash == std::string_view::npos) break;
    path.remove_prefix(slash);
  }
  return parts;
}

// Builds a fresh session from a create payload. Throws ParseError,
// InvariantViolation or std::invalid_argument.
std::unique_ptr<Session> build_session(std::string_view kind, std::string_view payload) {
  auto s = std::make_unique<Session>();
  if (kind == "instance") {
    Instance inst = parse_instance(payload);
    s->state0 = inst.state;
    s->layout = board_layout(*inst.graph);
  } else if (kind == "qdimacs") {
    const qbf::QuantifiedFormula f = qbf::parse_qdimacs(payload);
    const reduce::CompiledInstance ci =
        reduce::compile(qbf::normalize_alternation(f).formula);
    s->state0 = ci.state0;
    s->layout = ci.embedding->positions;
    s->routes = ci.embedding->routes;
    for (const auto& p : ci.provenance) s->provenance.push_back(reduce::to_string(p));
  } else {
    throw std::invalid_argument("source_kind must be \"instance\" or \"qdimacs\"");
  }
  s->current = s->state0;
  s->created_ms = s->updated_ms = now_ms();
  return s;
}

}  // namespace

struct GameService::Impl {
  ServiceOptions options;
  mutable std::shared_mutex store_mutex;
  std::unordered_map<std::string, std::shared_ptr<Session>> sessions;
  std::mt19937_64 id_rng{std::random_device{}()};

  std::mutex journal_mutex;
  std::ofstream journal;

  std::shared_ptr<Session> find(const std::string& id) const {
    std::shared_lock lock(store_mutex);
    auto it = sessions.find(id);
    return it == sessions.end() ? nullptr : it->second;
  }

  // Caller holds store_mutex exclusively.
  std::string fresh_id() {
    while (true) {
      char buf[20];
      std::snprintf(buf, sizeof buf, "g%012llx",
                    static_cast<unsigned long long>(id_rng() & 0xffffffffffffULL));
      if (!sessions.count(buf)) return buf;
    }
  }

  void log(const json& entry) {
    if (!options.journal_path) return;
    std::lock_guard lock(journal_mutex);
    journal << entry.dump() << '\n';
    journal.flush();
  }

  void replay(const std::string& path) {
    std::ifstream in(path);
    if (!in) return;  // nothing journaled yet
    std::string line;
    std::size_t lineno = 0;
    std::vector<std::string> lines;
    while (std::getline(in, line)) lines.push_back(line);
    for (const std::string& text : lines) {
      ++lineno;
      if (text.empty()) continue;
      json e = json::parse(text, nullptr, false);
      if (e.is_discarded()) {
        // A torn final write is tolerated; anything earlier is corruption.
        if (lineno == lines.size()) break;
        throw std::runtime_error("journal line " + std::to_string(lineno) + " is not JSON");
      }
      const std::string op = e.value("op", "");
      const std::string id = e.value("id", "");
      if (op == "create") {
        sessions[id] = build_session(e.at("source_kind").get<std::string>(),
                                     e.at("payload").get<std::string>());
      } else if (op == "move") {
        // A move can race a delete of the same game; the delete wins.
        auto it = sessions.find(id);
        if (it == sessions.end()) continue;
        Session& s = *it->second;
        const Move m{node(e.at("to").get<std::uint32_t>())};
        s.current = apply_move(s.current, m);
        s.history.push_back(m);
      } else if (op == "delete") {
        sessions.erase(id);
      } else {
        throw std::runtime_error("journal line " + std::to_string(lineno) + ": unknown op");
      }
    }
  }

  Response create(std::string_view body) {
    json req = json::parse(body, nullptr, false);
    if (req.is_discarded() || !req.is_object()) return error(400, "bad request", "body is not a JSON object");
    if (!req.contains("source_kind") || !req["source_kind"].is_string() ||
        !req.contains("payload") || !req["payload"].is_string()) {
      return error(400, "bad request", "expected {source_kind, payload} strings");
    }
    const std::string kind = req["source_kind"].get<std::string>();
    const std::string payload = req["payload"].get<std::string>();
    std::unique_ptr<Session> built;
    try {
      built = build_session(kind, payload);
    } catch (const ParseError& e) {
      return reply(400, json{{"error", "parse error"},
                             {"line", e.line()},
                             {"detail", e.reason()}});
    } catch (const InvariantViolation& e) {
      return error(422, "invariant violation", e.what());
    } catch (const std::invalid_argument& e) {
      // Unknown source kind, or a formula the compiler cannot express.
      return error(kind == "instance" || kind == "qdimacs" ? 422 : 400, "unsupported", e.what());
    }
    std::shared_ptr<Session> session(std::move(built));
    std::string id;
    {
      std::unique_lock lock(store_mutex);
      id = fresh_id();
      sessions[id] = session;
      // Logged under the store lock so replay sees creates in id order.
      log(json{{"op", "create"}, {"id", id}, {"source_kind", kind}, {"payload", payload}});
    }
    std::lock_guard lock(session->mutex);
    return reply(201, json{{"game_id", id}, {"state", state_json(id, *session)}});
  }

  Response get_state(const std::string& id) {
    auto s = find(id);
    if (!s) return error(404, "not found", "unknown game " + id);
    std::lock_guard lock(s->mutex);
    return reply(200, state_json(id, *s));
  }

  Response get_moves(const std::string& id) {
    auto s = find(id);
    if (!s) return error(404, "not found", "unknown game " + id);
    std::lock_guard lock(s->mutex);
    json legal = json::array();
    for (const Move& m : legal_moves(s->current)) legal.push_back(m.to.value);
    return reply(200, json{{"legal", std::move(legal)}});
  }

  Response post_move(const std::string& id, std::string_view body) {
    json req = json::parse(body, nullptr, false);
    if (req.is_discarded() || !req.is_object() || !req.contains("to") ||
        !req["to"].is_number_unsigned()) {
      return error(400, "bad request", "expected {to: node id}");
    }
    auto s = find(id);
    if (!s) return error(404, "not found", "unknown game " + id);
    std::lock_guard lock(s->mutex);
    if (req.contains("expected_ply")) {
      if (!req["expected_ply"].is_number_unsigned() ||
          req["expected_ply"].get<std::uint64_t>() != s->history.size()) {
        return reply(409, json{{"error", "illegal move"},
                               {"reason", "stale"},
                               {"ply", s->history.size()}});
      }
    }
    const std::uint64_t to = req["to"].get<std::uint64_t>();
    std::optional<IllegalMoveReason> why;
    if (to >= s->current.graph().node_count()) {
      why = s->current.is_terminal() ? IllegalMoveReason::GameOver : IllegalMoveReason::NotAdjacent;
    } else {
      why = check_move(s->current, Move{node(to)});
    }
    if (why) return reply(409, json{{"error", "illegal move"}, {"reason", to_string(*why)}});
    const Move m{node(to)};
    s->current = apply_move(s->current, m);
    s->history.push_back(m);
    s->updated_ms = now_ms();
    log(json{{"op", "move"}, {"id", id}, {"to", to}});
    return reply(200, state_json(id, *s));
  }

  Response analysis(const std::string& id, const std::map<std::string, std::string>& query) {
    std::uint64_t budget = options.default_budget;
    if (auto it = query.find("budget"); it != query.end()) {
      const auto v = parse_unsigned(it->second);
      if (!v) return error(400, "bad request", "budget must be a non-negative integer");
      budget = *v;
    }
    auto s = find(id);
    if (!s) return error(404, "not found", "unknown game " + id);
    GameState snapshot;
    {
      std::lock_guard lock(s->mutex);
      snapshot = s->current;
    }
    if (snapshot.is_terminal()) return error(409, "game over", status_string(snapshot.status()));

    MemoSolver solver(SearchBudget{budget});
    SolveResult r;
    try {
      r = solver.solve(snapshot);
    } catch (const BudgetExhausted& e) {
      return reply(202, json{{"exhausted", true}, {"nodes_explored", e.nodes_explored()}});
    }
    json pv = json::array();
    try {
      for (const Move& m : solver.principal_variation(snapshot, snapshot.graph().node_count())) {
        pv.push_back(m.to.value);
      }
    } catch (const BudgetExhausted&) {
      pv = json::array({r.best_move->to.value});
    }
    return reply(200, json{{"winner", to_string(r.winner)},
                           {"best_move", r.best_move->to.value},
                           {"pv", std::move(pv)},
                           {"exhausted", false},
                           {"nodes_explored", solver.nodes_explored()}});
  }

  Response remove(const std::string& id) {
    std::unique_lock lock(store_mutex);
    if (!sessions.erase(id)) return error(404, "not found", "unknown game " + id);
    log(json{{"op", "delete"}, {"id", id}});
    return Response{204, {}};
  }
};

GameService::GameService(ServiceOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = std::move(options);
  if (impl_->options.journal_path) {
    impl_->replay(*impl_->options.journal_path);
    impl_->journal.open(*impl_->options.journal_path, std::ios::app);
    if (!impl_->journal) {
      throw std::runtime_error("cannot open journal " + *impl_->options.journal_path);
    }
  }
}

GameService::~GameService() = default;

std::size_t GameService::session_count() const {
  std::shared_lock lock(impl_->store_mutex);
  return impl_->sessions.size();
}

Response GameService::handle(std::string_view method, std::string_view path,
                             const std::map<std::string, std::string>& query,
                             std::string_view body) {
  const auto parts = split_path(path);
  if (parts.empty() || parts[0] != "games" || parts.size() > 3) {
    return error(404, "not found", "no such endpoint");
  }
  try {
    if (parts.size() == 1) {
      if (method == "POST") return impl_->create(body);
      return error(405, "method not allowed", std::string(method));
    }
    const std::string id(parts[1]);
    if (parts.size() == 2) {
      if (method == "GET") return impl_->get_state(id);
      if (method == "DELETE") return impl_->remove(id);
      return error(405, "method not allowed", std::string(method));
    }
    if (parts[2] == "moves") {
      if (method == "GET") return impl_->get_moves(id);
      if (method == "POST") return impl_->post_move(id, body);
      return error(405, "method not allowed", std::string(method));
    }
    if (parts[2] == "analysis") {
      if (method == "GET") return impl_->analysis(id, query);
      return error(405, "method not allowed", std::string(method));
    }
  } catch (const MemoryLimit& e) {
    return error(503, "memory limit", e.what());
  }
  return error(404, "not found", "no such endpoint");
}

bool serve(GameService& service, const std::string& host, int port) {
  httplib::Server server;
  auto dispatch = [&service](const httplib::Request& req, httplib::Response& res) {
    std::map<std::string, std::string> query;
    for (const auto& [k, v] : req.params) query.emplace(k, v);
    const Response r = service.handle(req.method, req.path, query, req.body);
    res.status = r.status;
    if (!r.body.empty()) res.set_content(r.body, "application/json");
  };
  server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                              {"Access-Control-Allow-Headers", "Content-Type"},
                              {"Access-Control-Allow-Methods", "GET, POST, DELETE, OPTIONS"}});
  server.Get(".*", dispatch);
  server.Post(".*", dispatch);
  server.Delete(".*", dispatch);
  server.Options(".*", [](const httplib::Request&, httplib::Response& res) { res.status = 204; });
  return server.listen(host, port);
}

}  // namespace slimetrail::service
