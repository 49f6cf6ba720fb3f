#include "slimetrail/cli.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "slimetrail/instance_io.hpp"
#include "slimetrail/qbf.hpp"
#include "slimetrail/reducer.hpp"
#include "slimetrail/service.hpp"
#include "slimetrail/solver.hpp"
#include "slimetrail/text_util.hpp"
#include "slimetrail/verify.hpp"

namespace slimetrail::cli {

namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

constexpr int kOk = 0;
constexpr int kDomainFailure = 1;
constexpr int kUsage = 2;

// Bad paths and the like, detected before any work starts.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Config {
  std::string input = "-";
  std::vector<std::string> inputs;
  std::string output;
  std::string provenance;
  std::string format = "text";
  std::optional<std::uint64_t> budget;
  std::uint64_t seed = 1;
  std::size_t samples = 30;
  bool no_crossover = false;
  bool sweep = false;
  std::string emit;
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string journal;
};

std::string read_input(const std::string& path, std::istream& in) {
  std::ostringstream buf;
  if (path == "-") {
    buf << in.rdbuf();
    return buf.str();
  }
  std::ifstream file(path, std::ios::binary);
  if (!file) throw UsageError("cannot read " + path);
  buf << file.rdbuf();
  return buf.str();
}

void check_readable(const std::string& path) {
  if (path != "-" && !fs::is_regular_file(path)) throw UsageError("no such file: " + path);
}

void check_writable(const std::string& path) {
  if (path.empty() || path == "-") return;
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty() && !fs::is_directory(parent)) {
    throw UsageError("output directory does not exist: " + parent.string());
  }
}

void write_output(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream file(path, std::ios::binary);
  if (!file || !(file << text)) throw std::runtime_error("cannot write " + path);
}

SearchBudget budget_or(const Config& c, std::uint64_t fallback) {
  return SearchBudget{c.budget.value_or(fallback)};
}

double ms_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

bool looks_like_instance(std::string_view text) {
  for (std::string_view line : split_lines(text)) {
    const auto words = split_words(strip_comment(line, '#'));
    if (words.empty()) continue;
    return words[0] == "slimetrail";
  }
  return false;
}

json game_side_json(const verify::GameSide& side) {
  json pv = json::array();
  for (const Move& m : side.pv) pv.push_back(m.to.value);
  return json{{"winner", to_string(side.winner)},
              {"best_move", side.best_move ? json(side.best_move->to.value) : json(nullptr)},
              {"pv", std::move(pv)}};
}

int do_compile(const Config& c, std::istream& in, std::ostream& out, std::ostream& err) {
  check_readable(c.input);
  check_writable(c.output);
  check_writable(c.provenance);
  const qbf::QuantifiedFormula f = qbf::parse_qdimacs(read_input(c.input, in));
  reduce::CompileOptions options;
  options.insert_crossovers = !c.no_crossover;
  const reduce::CompiledInstance ci = reduce::compile(qbf::normalize_alternation(f).formula, options);
  const std::string instance = serialize_instance(ci.state0);
  if (c.format == "json") {
    json prov = json::array();
    for (const auto& p : ci.provenance) prov.push_back(reduce::to_string(p));
    json j{{"formula", qbf::describe(f)},
           {"nodes", ci.graph->node_count()},
           {"edges", ci.graph->edges().size()},
           {"crossovers", ci.crossover_count},
           {"computed_crossings", ci.computed_crossings},
           {"instance", instance},
           {"provenance", std::move(prov)}};
    write_output(c.output, j.dump(2) + "\n", out);
  } else {
    write_output(c.output, instance, out);
  }
  if (!c.provenance.empty()) write_output(c.provenance, reduce::format_provenance(ci), out);
  err << "compiled " << qbf::describe(f) << ": " << ci.graph->node_count() << " nodes, "
      << ci.graph->edges().size() << " edges, " << ci.crossover_count << " crossovers\n";
  return kOk;
}

int do_solve(const Config& c, std::istream& in, std::ostream& out, std::ostream& err) {
  check_readable(c.input);
  check_writable(c.output);
  const Instance inst = parse_instance(read_input(c.input, in));
  const auto t0 = std::chrono::steady_clock::now();
  const verify::GameSide side = verify::solve_game_side(inst.state, budget_or(c, UINT64_MAX));
  err << "explored " << side.nodes_explored << " positions, depth " << side.max_depth << ", "
      << ms_since(t0) << " ms\n";
  if (c.format == "json") {
    write_output(c.output, game_side_json(side).dump(2) + "\n", out);
  } else {
    write_output(c.output, verify::format_game_side(side), out);
  }
  return kOk;
}

int do_sweep(const Config& c, std::ostream& out, std::ostream& err) {
  check_writable(c.output);
  std::vector<qbf::QuantifiedFormula> corpus = verify::enumerate_formulas(2, 2, 2);
  for (auto& f : verify::sample_formulas(3, 3, 3, c.samples, c.seed)) corpus.push_back(std::move(f));
  reduce::CompileOptions options;
  options.insert_crossovers = !c.no_crossover;

  std::size_t disagree = 0, exhausted = 0, nonplanar = 0;
  std::ostringstream text;
  json reports = json::array();
  const auto t0 = std::chrono::steady_clock::now();
  for (const auto& f : corpus) {
    const verify::VerifyReport r =
        verify::verify_reduction(f, budget_or(c, verify::kSweepBudget), options);
    disagree += !r.agree && !r.exhausted;
    exhausted += r.exhausted;
    nonplanar += !r.planar;
    text << "agree " << (r.agree ? "true " : "false") << " qbf " << (r.qbf_value ? "true " : "false")
         << " winner " << (r.game ? std::string(to_string(r.game->winner)) : "?   ") << " nodes "
         << r.node_count << " planar " << (r.planar ? "true" : "false") << " : " << r.formula
         << '\n';
    reports.push_back(json::parse(verify::report_json(r)));
  }
  text << "sweep: " << corpus.size() << " formulas, " << disagree << " disagreements, "
       << exhausted << " exhausted, " << nonplanar << " non-planar\n";
  err << "sweep took " << ms_since(t0) << " ms\n";
  write_output(c.output, c.format == "json" ? reports.dump(2) + "\n" : text.str(), out);
  const bool planarity_required = !c.no_crossover;
  return disagree || exhausted || (planarity_required && nonplanar) ? kDomainFailure : kOk;
}

int do_verify(const Config& c, std::istream& in, std::ostream& out, std::ostream& err) {
  if (c.sweep) return do_sweep(c, out, err);
  check_readable(c.input);
  check_writable(c.output);
  const qbf::QuantifiedFormula f = qbf::parse_qdimacs(read_input(c.input, in));
  reduce::CompileOptions options;
  options.insert_crossovers = !c.no_crossover;
  const verify::VerifyReport r =
      verify::verify_reduction(f, budget_or(c, verify::kSweepBudget), options);
  err << "verified in " << r.elapsed_ms << " ms\n";
  if (r.exhausted) err << "budget exhausted after " << r.nodes_explored << " positions\n";
  write_output(c.output, c.format == "json" ? verify::report_json(r) : verify::format_report(r),
               out);
  return r.agree ? kOk : kDomainFailure;
}

std::vector<std::string> scenario_files(const std::vector<std::string>& inputs) {
  std::vector<std::string> files;
  for (const std::string& p : inputs) {
    if (fs::is_directory(p)) {
      std::vector<std::string> found;
      for (const auto& entry : fs::directory_iterator(p)) {
        if (entry.is_regular_file() && entry.path().extension() == ".scenario") {
          found.push_back(entry.path().string());
        }
      }
      std::sort(found.begin(), found.end());
      files.insert(files.end(), found.begin(), found.end());
    } else if (fs::is_regular_file(p)) {
      files.push_back(p);
    } else {
      throw UsageError("no such file or directory: " + p);
    }
  }
  return files;
}

int do_scenarios(const Config& c, std::ostream& out, std::ostream& err) {
  check_writable(c.output);
  if (!c.emit.empty()) {
    fs::create_directories(c.emit);
    const auto atlas = verify::gadget_atlas();
    for (const auto& s : atlas) {
      write_output((fs::path(c.emit) / (s.name + ".scenario")).string(),
                   verify::serialize_scenario(s), out);
    }
    err << "wrote " << atlas.size() << " scenarios to " << c.emit << '\n';
    return kOk;
  }

  // Either the built-in atlas or scenario files, each run independently.
  struct Item {
    std::string label;
    std::optional<verify::Scenario> scenario;
    std::string load_error;
  };
  std::vector<Item> items;
  if (c.inputs.empty()) {
    for (auto& s : verify::gadget_atlas()) items.push_back({s.name, std::move(s), {}});
  } else {
    for (const std::string& file : scenario_files(c.inputs)) {
      Item item{file, std::nullopt, {}};
      try {
        item.scenario = verify::parse_scenario(read_input(file, std::cin));
        item.label = item.scenario->name;
      } catch (const std::exception& e) {
        item.load_error = e.what();
      }
      items.push_back(std::move(item));
    }
  }

  std::size_t passed = 0;
  std::ostringstream text;
  json results = json::array();
  for (const Item& item : items) {
    json entry{{"name", item.label}};
    std::string failure = item.load_error;
    if (item.scenario) {
      try {
        const verify::ScenarioResult r = verify::run_scenario(*item.scenario);
        json asserts = json::array();
        for (const auto& o : r.outcomes) {
          asserts.push_back(json{{"assert", verify::to_string(o.assertion)},
                                 {"passed", o.passed},
                                 {"detail", o.detail}});
          if (!o.passed) {
            failure += (failure.empty() ? "" : "; ") + verify::to_string(o.assertion) + " (" +
                       o.detail + ")";
          }
        }
        entry["assertions"] = std::move(asserts);
      } catch (const verify::IllegalPrefix& e) {
        failure = e.what();
      }
    }
    const bool ok = failure.empty();
    passed += ok;
    entry["passed"] = ok;
    if (!ok) entry["error"] = failure;
    results.push_back(std::move(entry));
    text << (ok ? "PASS " : "FAIL ") << item.label << (ok ? "" : ": " + failure) << '\n';
  }
  text << "scenarios: " << passed << " passed, " << items.size() - passed << " failed\n";
  write_output(c.output, c.format == "json" ? results.dump(2) + "\n" : text.str(), out);
  return passed == items.size() ? kOk : kDomainFailure;
}

int do_export_dot(const Config& c, std::istream& in, std::ostream& out) {
  check_readable(c.input);
  check_writable(c.output);
  const std::string text = read_input(c.input, in);
  if (looks_like_instance(text)) {
    write_output(c.output, reduce::export_dot(*parse_instance(text).graph), out);
  } else {
    reduce::CompileOptions options;
    options.insert_crossovers = !c.no_crossover;
    const auto f = qbf::parse_qdimacs(text);
    write_output(c.output,
                 reduce::export_dot(reduce::compile(qbf::normalize_alternation(f).formula, options)),
                 out);
  }
  return kOk;
}

int do_serve(const Config& c, std::ostream& err) {
  service::ServiceOptions options;
  if (c.budget) options.default_budget = *c.budget;
  if (!c.journal.empty()) options.journal_path = c.journal;
  service::GameService svc(options);
  err << "listening on http://" << c.host << ':' << c.port << '\n' << std::flush;
  if (!service::serve(svc, c.host, c.port)) {
    err << "slimetrail: cannot listen on " << c.host << ':' << c.port << '\n';
    return kDomainFailure;
  }
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
  Config c;
  CLI::App app{"Slime Trail toolkit: rules engine, exact solver, QBF reduction and verifier",
               "slimetrail"};
  app.require_subcommand(1, 1);

  auto add_format = [&](CLI::App* sub) {
    sub->add_option("--format", c.format, "Output format")
        ->check(CLI::IsMember({"text", "json"}));
  };
  auto add_output = [&](CLI::App* sub) {
    sub->add_option("-o,--output", c.output, "Write results here instead of standard output");
  };

  CLI::App* compile = app.add_subcommand("compile", "Compile a QDIMACS formula into a board");
  compile->add_option("input", c.input, "QDIMACS file, - for standard input");
  add_output(compile);
  compile->add_option("--provenance", c.provenance, "Write '<id> <gadget>.<role>' lines here");
  compile->add_flag("--no-crossover", c.no_crossover, "Debug: keep route crossings");
  add_format(compile);

  CLI::App* solve = app.add_subcommand("solve", "Solve a board position exactly");
  solve->add_option("input", c.input, "Instance file, - for standard input");
  add_output(solve);
  solve->add_option("--budget", c.budget, "Give up after this many positions");
  add_format(solve);

  CLI::App* verify_cmd = app.add_subcommand("verify", "Check a formula against its compiled game");
  verify_cmd->add_option("input", c.input, "QDIMACS file, - for standard input");
  add_output(verify_cmd);
  verify_cmd->add_option("--budget", c.budget, "Positions per solve (default 1e8)");
  verify_cmd->add_flag("--sweep", c.sweep,
                       "Verify every formula with <=2 variables, clauses and literals per "
                       "clause, plus sampled 3-variable formulas");
  verify_cmd->add_option("--seed", c.seed, "Sampling seed for --sweep");
  verify_cmd->add_option("--samples", c.samples, "Sampled formulas for --sweep");
  verify_cmd->add_flag("--no-crossover", c.no_crossover, "Debug: keep route crossings");
  add_format(verify_cmd);

  CLI::App* scenarios = app.add_subcommand("scenarios", "Run gadget walkthrough scenarios");
  scenarios->add_option("paths", c.inputs, "Scenario files or directories (default: built-in)");
  scenarios->add_option("--emit", c.emit, "Write the built-in scenarios into this directory");
  add_output(scenarios);
  add_format(scenarios);

  CLI::App* dot = app.add_subcommand("export-dot", "Render an instance or formula as Graphviz");
  dot->add_option("input", c.input, "Instance or QDIMACS file, - for standard input");
  add_output(dot);
  dot->add_flag("--no-crossover", c.no_crossover, "Debug: keep route crossings");

  CLI::App* serve = app.add_subcommand("serve", "Run the HTTP game service");
  serve->add_option("--port", c.port, "TCP port")->check(CLI::Range(1, 65535));
  serve->add_option("--host", c.host, "Address to bind");
  serve->add_option("--journal", c.journal, "Append-only session journal, replayed on start");
  serve->add_option("--budget", c.budget, "Default analysis budget (default 1e7)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*compile) return do_compile(c, in, out, err);
    if (*solve) return do_solve(c, in, out, err);
    if (*verify_cmd) return do_verify(c, in, out, err);
    if (*scenarios) return do_scenarios(c, out, err);
    if (*dot) return do_export_dot(c, in, out);
    if (*serve) return do_serve(c, err);
  } catch (const UsageError& e) {
    err << "slimetrail: " << e.what() << '\n';
    return kUsage;
  } catch (const ParseError& e) {
    err << "slimetrail: " << c.input << ": " << e.what() << '\n';
    return kDomainFailure;
  } catch (const BudgetExhausted& e) {
    err << "slimetrail: budget exhausted after " << e.nodes_explored() << " positions\n";
    return kDomainFailure;
  } catch (const std::exception& e) {
    err << "slimetrail: " << e.what() << '\n';
    return kDomainFailure;
  }
  return kUsage;
}

}  // namespace slimetrail::cli
