#include "slimetrail/errors.hpp"

namespace slimetrail {

ParseError::ParseError(std::size_t line, std::string reason)
    : std::runtime_error("line " + std::to_string(line) + ": " + reason),
      line_(line),
      reason_(std::move(reason)) {}

const char* to_string(IllegalMoveReason reason) noexcept {
  switch (reason) {
    case IllegalMoveReason::GameOver:
      return "game over";
    case IllegalMoveReason::NotAdjacent:
      return "not adjacent";
    case IllegalMoveReason::Slimed:
      return "slimed";
    case IllegalMoveReason::NoGoalReachable:
      return "reachability";
  }
  return "unknown";
}

IllegalMove::IllegalMove(IllegalMoveReason reason)
    : std::runtime_error(std::string("illegal move: ") + to_string(reason)),
      reason_(reason) {}

BudgetExhausted::BudgetExhausted(std::uint64_t nodes_explored)
    : std::runtime_error("search budget exhausted after " +
                         std::to_string(nodes_explored) + " nodes"),
      nodes_explored_(nodes_explored) {}

MemoryLimit::MemoryLimit(std::size_t entries)
    : std::runtime_error("transposition table limit of " +
                         std::to_string(entries) + " entries reached") {}

}  // namespace slimetrail
