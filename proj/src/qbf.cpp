#include "slimetrail/qbf.hpp"

#include <algorithm>
#include <sstream>

#include "slimetrail/text_util.hpp"

namespace slimetrail::qbf {

UnquantifiedVariable::UnquantifiedVariable(std::size_t line, std::uint32_t variable)
    : ParseError(line, "variable " + std::to_string(variable) + " is not quantified"),
      variable_(variable) {}

EmptyClause::EmptyClause(std::size_t line) : ParseError(line, "empty clause") {}

CapExceeded::CapExceeded(std::size_t variables, std::size_t cap)
    : std::runtime_error("formula has " + std::to_string(variables) +
                         " quantified variables; brute-force cap is " +
                         std::to_string(cap)) {}

bool QuantifiedFormula::is_normalized() const noexcept {
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    const Quantifier expected = i % 2 == 0 ? Quantifier::Exists : Quantifier::ForAll;
    if (prefix[i].quantifier != expected) return false;
  }
  return true;
}

QuantifiedFormula parse_qdimacs(std::string_view text) {
  const auto lines = split_lines(text);
  QuantifiedFormula f;
  bool have_header = false;
  std::size_t declared_clauses = 0;
  std::vector<std::uint8_t> quantified;

  std::vector<Literal> pending;
  std::size_t pending_line = 0;
  bool in_matrix = false;

  for (std::size_t index = 0; index < lines.size(); ++index) {
    const std::size_t line = index + 1;
    const auto words = split_words(lines[index]);
    if (words.empty()) continue;
    if (words[0] == "c") continue;

    if (words[0] == "p") {
      if (have_header) throw ParseError(line, "duplicate problem line");
      if (words.size() != 4 || words[1] != "cnf") {
        throw ParseError(line, "expected 'p cnf <vars> <clauses>'");
      }
      const auto n = parse_unsigned(words[2]);
      const auto k = parse_unsigned(words[3]);
      if (!n || !k || *n > 1'000'000) throw ParseError(line, "invalid problem line counts");
      f.num_vars = static_cast<std::uint32_t>(*n);
      declared_clauses = static_cast<std::size_t>(*k);
      quantified.assign(f.num_vars + 1, 0);
      have_header = true;
      continue;
    }
    if (!have_header) throw ParseError(line, "missing 'p cnf' header");

    if (words[0] == "e" || words[0] == "a") {
      if (in_matrix) throw ParseError(line, "quantifier line after clauses");
      const Quantifier q = words[0] == "e" ? Quantifier::Exists : Quantifier::ForAll;
      if (words.size() < 2 || words.back() != "0") {
        throw ParseError(line, "quantifier line must end with 0");
      }
      for (std::size_t w = 1; w + 1 < words.size(); ++w) {
        const auto v = parse_unsigned(words[w]);
        if (!v || *v == 0) throw ParseError(line, "invalid variable '" + std::string(words[w]) + "'");
        if (*v > f.num_vars) {
          throw ParseError(line, "variable " + std::string(words[w]) + " exceeds declared range");
        }
        if (quantified[*v]) {
          throw ParseError(line, "variable " + std::string(words[w]) + " quantified twice");
        }
        quantified[*v] = 1;
        f.prefix.push_back({static_cast<std::uint32_t>(*v), q});
      }
      continue;
    }

    in_matrix = true;
    for (std::string_view word : words) {
      const auto lit = parse_signed(word);
      if (!lit) throw ParseError(line, "invalid literal '" + std::string(word) + "'");
      if (pending.empty()) pending_line = line;
      if (*lit == 0) {
        if (pending.empty()) throw EmptyClause(line);
        Clause clause;
        for (const Literal& l : pending) {
          if (std::find(clause.literals.begin(), clause.literals.end(), l) ==
              clause.literals.end()) {
            clause.literals.push_back(l);
          }
        }
        f.clauses.push_back(std::move(clause));
        pending.clear();
        continue;
      }
      const std::int64_t magnitude = *lit < 0 ? -*lit : *lit;
      if (magnitude > static_cast<std::int64_t>(f.num_vars)) {
        throw ParseError(line, "literal " + std::string(word) + " exceeds declared range");
      }
      const auto var = static_cast<std::uint32_t>(magnitude);
      if (!quantified[var]) throw UnquantifiedVariable(line, var);
      pending.push_back({var, *lit < 0});
    }
  }

  if (!have_header) throw ParseError(lines.size(), "missing 'p cnf' header");
  if (!pending.empty()) throw ParseError(pending_line, "clause not terminated by 0");
  if (f.clauses.size() != declared_clauses) {
    throw ParseError(lines.size(), "header declares " + std::to_string(declared_clauses) +
                                       " clauses, found " + std::to_string(f.clauses.size()));
  }
  return f;
}

std::string serialize_qdimacs(const QuantifiedFormula& f) {
  std::ostringstream out;
  out << "p cnf " << f.num_vars << ' ' << f.clauses.size() << '\n';
  for (std::size_t i = 0; i < f.prefix.size();) {
    const Quantifier q = f.prefix[i].quantifier;
    out << (q == Quantifier::Exists ? 'e' : 'a');
    for (; i < f.prefix.size() && f.prefix[i].quantifier == q; ++i) {
      out << ' ' << f.prefix[i].variable;
    }
    out << " 0\n";
  }
  for (const Clause& c : f.clauses) {
    for (const Literal& l : c.literals) out << (l.negated ? "-" : "") << l.variable << ' ';
    out << "0\n";
  }
  return out.str();
}

NormalizedFormula normalize_alternation(const QuantifiedFormula& formula) {
  NormalizedFormula result;
  QuantifiedFormula& f = result.formula;
  f.num_vars = formula.num_vars;
  f.clauses = formula.clauses;
  result.position_of.assign(formula.num_vars + 1, 0);

  for (const QuantifiedVariable& qv : formula.prefix) {
    const Quantifier expected =
        f.prefix.size() % 2 == 0 ? Quantifier::Exists : Quantifier::ForAll;
    if (qv.quantifier != expected) {
      const std::uint32_t dummy = ++f.num_vars;
      f.prefix.push_back({dummy, expected});
      result.dummies.push_back(dummy);
    }
    f.prefix.push_back(qv);
    result.position_of[qv.variable] = static_cast<std::uint32_t>(f.prefix.size());
  }
  return result;
}

namespace {

bool eval_matrix(const QuantifiedFormula& f, const std::vector<std::uint8_t>& value) {
  for (const Clause& c : f.clauses) {
    const bool satisfied = std::any_of(c.literals.begin(), c.literals.end(), [&](Literal l) {
      return (value[l.variable] != 0) != l.negated;
    });
    if (!satisfied) return false;
  }
  return true;
}

bool eval_from(const QuantifiedFormula& f, std::size_t depth, std::vector<std::uint8_t>& value) {
  if (depth == f.prefix.size()) return eval_matrix(f, value);
  const QuantifiedVariable& qv = f.prefix[depth];
  const bool exists = qv.quantifier == Quantifier::Exists;
  for (std::uint8_t choice : {0, 1}) {
    value[qv.variable] = choice;
    const bool sub = eval_from(f, depth + 1, value);
    if (sub == exists) return exists;
  }
  return !exists;
}

}  // namespace

bool eval_qbf_bruteforce(const QuantifiedFormula& formula, std::size_t cap) {
  if (formula.prefix.size() > cap) throw CapExceeded(formula.prefix.size(), cap);
  std::vector<std::uint8_t> value(formula.num_vars + 1, 0);
  return eval_from(formula, 0, value);
}

std::string describe(const QuantifiedFormula& f) {
  std::ostringstream out;
  for (std::size_t i = 0; i < f.prefix.size(); ++i) {
    if (i) out << ' ';
    out << (f.prefix[i].quantifier == Quantifier::Exists ? 'E' : 'A') << f.prefix[i].variable;
  }
  out << " :";
  for (std::size_t j = 0; j < f.clauses.size(); ++j) {
    out << (j ? " & (" : " (");
    const auto& lits = f.clauses[j].literals;
    for (std::size_t t = 0; t < lits.size(); ++t) {
      if (t) out << " | ";
      out << (lits[t].negated ? "-" : "") << lits[t].variable;
    }
    out << ')';
  }
  return out.str();
}

}  // namespace slimetrail::qbf
