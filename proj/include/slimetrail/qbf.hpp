// Prenex quantified Boolean formulas with a CNF matrix.

#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "slimetrail/errors.hpp"

namespace slimetrail::qbf {

enum class Quantifier : std::uint8_t { Exists, ForAll };

struct Literal {
  std::uint32_t variable = 0;  // 1-based
  bool negated = false;

  friend constexpr auto operator<=>(const Literal&, const Literal&) = default;
};

struct Clause {
  std::vector<Literal> literals;
  friend bool operator==(const Clause&, const Clause&) = default;
};

struct QuantifiedVariable {
  std::uint32_t variable = 0;
  Quantifier quantifier = Quantifier::Exists;
  friend bool operator==(const QuantifiedVariable&, const QuantifiedVariable&) = default;
};

// Q_1 v_1 Q_2 v_2 ... phi. The prefix lists every quantified variable once,
// outermost first; `num_vars` is the declared variable range.
struct QuantifiedFormula {
  std::uint32_t num_vars = 0;
  std::vector<QuantifiedVariable> prefix;
  std::vector<Clause> clauses;

  std::size_t prefix_length() const noexcept { return prefix.size(); }
  std::size_t clause_count() const noexcept { return clauses.size(); }

  // Strictly alternating and starting with Exists.
  bool is_normalized() const noexcept;

  friend bool operator==(const QuantifiedFormula&, const QuantifiedFormula&) = default;
};

class UnquantifiedVariable : public ParseError {
 public:
  UnquantifiedVariable(std::size_t line, std::uint32_t variable);
  std::uint32_t variable() const noexcept { return variable_; }

 private:
  std::uint32_t variable_;
};

class EmptyClause : public ParseError {
 public:
  explicit EmptyClause(std::size_t line);
};

class CapExceeded : public std::runtime_error {
 public:
  CapExceeded(std::size_t variables, std::size_t cap);
};

// QDIMACS subset: optional `c` comment lines, one `p cnf <n> <k>` header,
// `e`/`a` quantifier lines (blocks are flattened in order), then k clauses of
// nonzero literals each terminated by 0. Repeated literals inside a clause
// are dropped; tautologies are kept.
QuantifiedFormula parse_qdimacs(std::string_view text);

// Canonical QDIMACS: adjacent same-quantifier variables share a line, one
// clause per line.
std::string serialize_qdimacs(const QuantifiedFormula& formula);

struct NormalizedFormula {
  QuantifiedFormula formula;
  // position_of[v] = 1-based prefix position of original variable v in the
  // normalized prefix (0 when v is unquantified). Index 0 is unused.
  std::vector<std::uint32_t> position_of;
  // Fresh variables inserted to restore alternation, in prefix order.
  std::vector<std::uint32_t> dummies;
};

// Inserts fresh dummy variables (numbered above num_vars, used in no clause)
// wherever two adjacent quantifiers agree or the prefix starts with ForAll.
NormalizedFormula normalize_alternation(const QuantifiedFormula& formula);

inline constexpr std::size_t kDefaultEvalCap = 20;

// Recursive semantics over the prefix. Throws CapExceeded when the prefix is
// longer than `cap`.
bool eval_qbf_bruteforce(const QuantifiedFormula& formula,
                         std::size_t cap = kDefaultEvalCap);

// Human-readable rendering, e.g. "E1 A2 : (1 | -2) & (2)".
std::string describe(const QuantifiedFormula& formula);

}  // namespace slimetrail::qbf
