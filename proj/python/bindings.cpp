#include <optional>
#include <string>

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "slimetrail/instance_io.hpp"
#include "slimetrail/qbf.hpp"
#include "slimetrail/reducer.hpp"
#include "slimetrail/solver.hpp"
#include "slimetrail/verify.hpp"

namespace py = pybind11;
using namespace slimetrail;

namespace {

std::vector<std::uint32_t> ids(const std::vector<Move>& moves) {
  std::vector<std::uint32_t> out;
  for (const Move& m : moves) out.push_back(m.to.value);
  return out;
}

py::dict game_side_dict(const verify::GameSide& side) {
  py::dict d;
  d["winner"] = std::string(to_string(side.winner));
  d["best_move"] = side.best_move ? py::cast(side.best_move->to.value) : py::none();
  d["pv"] = ids(side.pv);
  d["nodes_explored"] = side.nodes_explored;
  return d;
}

SearchBudget budget_of(std::optional<std::uint64_t> nodes) { return SearchBudget{nodes}; }

}  // namespace

PYBIND11_MODULE(_slimetrail, m) {
  m.doc() = "Slime Trail rules engine, solver, QBF reduction and verifier";

  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<InvariantViolation>(m, "InvariantViolation", PyExc_ValueError);
  py::register_exception<IllegalMove>(m, "IllegalMove", PyExc_ValueError);
  py::register_exception<BudgetExhausted>(m, "BudgetExhausted", PyExc_RuntimeError);

  py::class_<GameState>(m, "Game")
      .def_static(
          "from_instance", [](const std::string& text) { return parse_instance(text).state; },
          py::arg("text"))
      .def_property_readonly("token", [](const GameState& s) { return s.token().value; })
      .def_property_readonly("to_move",
                             [](const GameState& s) { return std::string(to_string(s.to_move())); })
      .def_property_readonly("status",
                             [](const GameState& s) -> std::string {
                               if (s.status().ongoing()) return "ongoing";
                               return "won:" + std::string(to_string(*s.status().winner));
                             })
      .def_property_readonly("node_count",
                             [](const GameState& s) { return s.graph().node_count(); })
      .def_property_readonly("slimed",
                             [](const GameState& s) {
                               std::vector<std::uint32_t> out;
                               for (NodeId n : s.slimed().members()) out.push_back(n.value);
                               return out;
                             })
      .def("legal_moves", [](const GameState& s) { return ids(legal_moves(s)); })
      .def(
          "play", [](const GameState& s, std::uint32_t to) { return apply_move(s, Move{node(to)}); },
          py::arg("to"), "Returns the position after moving the token to `to`.")
      .def("serialize", [](const GameState& s) { return serialize_instance(s); })
      .def("__eq__", [](const GameState& a, const GameState& b) { return a == b; });

  m.def(
      "solve",
      [](const GameState& s, std::optional<std::uint64_t> budget) {
        verify::GameSide side;
        {
          py::gil_scoped_release release;
          side = verify::solve_game_side(s, budget_of(budget));
        }
        return game_side_dict(side);
      },
      py::arg("game"), py::arg("budget") = py::none(),
      "Exact solve: {'winner', 'best_move', 'pv', 'nodes_explored'}.");

  m.def(
      "evaluate_qdimacs",
      [](const std::string& text) { return qbf::eval_qbf_bruteforce(qbf::parse_qdimacs(text)); },
      py::arg("text"));

  m.def(
      "compile_qdimacs",
      [](const std::string& text, bool insert_crossovers) {
        reduce::CompileOptions options;
        options.insert_crossovers = insert_crossovers;
        const auto f = qbf::normalize_alternation(qbf::parse_qdimacs(text)).formula;
        const reduce::CompiledInstance ci = reduce::compile(f, options);
        py::dict d;
        d["game"] = ci.state0;
        d["instance"] = serialize_instance(ci.state0);
        std::vector<std::string> prov;
        for (const auto& p : ci.provenance) prov.push_back(reduce::to_string(p));
        d["provenance"] = prov;
        d["crossovers"] = ci.crossover_count;
        d["planar"] = reduce::check_planar_embedding(ci);
        d["dot"] = reduce::export_dot(ci);
        return d;
      },
      py::arg("text"), py::arg("insert_crossovers") = true);

  m.def(
      "verify_qdimacs",
      [](const std::string& text, std::optional<std::uint64_t> budget) {
        const auto f = qbf::parse_qdimacs(text);
        verify::VerifyReport r;
        {
          py::gil_scoped_release release;
          r = verify::verify_reduction(f, budget_of(budget.value_or(verify::kSweepBudget)));
        }
        py::dict d;
        d["formula"] = r.formula;
        d["qbf_value"] = r.qbf_value;
        d["game"] = r.game ? py::object(game_side_dict(*r.game)) : py::none();
        d["agree"] = r.agree;
        d["exhausted"] = r.exhausted;
        d["planar"] = r.planar;
        d["nodes"] = r.node_count;
        d["nodes_explored"] = r.nodes_explored;
        return d;
      },
      py::arg("text"), py::arg("budget") = py::none());

  m.def(
      "run_atlas",
      []() {
        std::vector<std::pair<std::string, bool>> out;
        for (const auto& s : verify::gadget_atlas()) {
          out.emplace_back(s.name, verify::run_scenario(s).passed);
        }
        return out;
      },
      "Runs the built-in gadget scenarios: [(name, passed)].");

  m.def(
      "enumerate_formulas",
      [](unsigned n, unsigned k, unsigned lits) {
        std::vector<std::string> out;
        for (const auto& f : verify::enumerate_formulas(n, k, lits)) {
          out.push_back(qbf::serialize_qdimacs(f));
        }
        return out;
      },
      py::arg("n_max"), py::arg("k_max"), py::arg("lits_max"),
      "Every small normalized formula, as QDIMACS text.");
}
