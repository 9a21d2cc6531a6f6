#pragma once

#include <string>

#include "vkm/diagram.hpp"

namespace vkm {

struct TdfSyntaxError : DiagramError {
  int line;
  TdfSyntaxError(int line_, const std::string& what_)
      : DiagramError("line " + std::to_string(line_) + ": " + what_), line(line_) {}
};

struct TdfValidationError : DiagramError {
  using DiagramError::DiagramError;
};

// Line-oriented tangle text format:
//   line 1:     `closed` or `tangle <n>`
//   node lines: `x <id> over=02|13`   classical crossing
//               `v <id>`              virtual crossing
//               `b <id>`              boundary point
//   edge lines: `e <node>.<slot> <node>.<slot>`  (direction = orientation,
//               slots counterclockwise)
//   `loop`      one crossingless circle component
//   tangles end with `boundary <id> <id> ...` (cyclic disk order)
//   `#` starts a comment.
TangleDiagram parse_tdf(const std::string& text);

// Deterministic serialization: nodes in canonical traversal order, so
// canonically equal diagrams serialize byte-identically.
std::string serialize_tdf(const TangleDiagram& d);

}  // namespace vkm
