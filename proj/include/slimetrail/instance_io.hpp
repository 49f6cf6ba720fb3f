#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "slimetrail/game.hpp"

namespace slimetrail {

// `slimetrail v1` text format:
//
//   slimetrail v1
//   node <id> <plain|blue|red> [<x> <y>]
//   edge <id> <id>
//   token <id>
//   turn <blue|red>
//   slimed <id>          (optional, repeated)
//
// '#' starts a comment. Node ids must be dense, 0..m-1. `turn` defaults to
// blue when omitted.
struct Instance {
  std::shared_ptr<const GameGraph> graph;
  GameState state;
};

// Throws ParseError for malformed text and InvariantViolation for boards or
// positions that break the rules' invariants.
Instance parse_instance(std::string_view text);

// Canonical form: nodes ascending, edges ascending, then token, turn and
// slimed lines. parse_instance(serialize_instance(s)) == s.
std::string serialize_instance(const GameState& state);

std::string format_coordinate(double value);

}  // namespace slimetrail
