#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace slimetrail {

// Malformed text input. `line` is 1-based; 0 means "end of input".
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t line, std::string reason);

  std::size_t line() const noexcept { return line_; }
  const std::string& reason() const noexcept { return reason_; }

 private:
  std::size_t line_;
  std::string reason_;
};

// A structurally valid input that breaks a board or position invariant.
class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class IllegalMoveReason : std::uint8_t {
  GameOver,
  NotAdjacent,
  Slimed,
  NoGoalReachable,
};

const char* to_string(IllegalMoveReason reason) noexcept;

class IllegalMove : public std::runtime_error {
 public:
  explicit IllegalMove(IllegalMoveReason reason);

  IllegalMoveReason reason() const noexcept { return reason_; }

 private:
  IllegalMoveReason reason_;
};

class BudgetExhausted : public std::runtime_error {
 public:
  explicit BudgetExhausted(std::uint64_t nodes_explored);

  std::uint64_t nodes_explored() const noexcept { return nodes_explored_; }

 private:
  std::uint64_t nodes_explored_;
};

class MemoryLimit : public std::runtime_error {
 public:
  explicit MemoryLimit(std::size_t entries);
};

}  // namespace slimetrail
