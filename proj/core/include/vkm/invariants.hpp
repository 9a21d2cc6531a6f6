#pragma once

#include <cstdint>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "vkm/moves.hpp"
#include "vkm/rewrite.hpp"

namespace vkm {

struct NotClosedError : DiagramError {
  using DiagramError::DiagramError;
};
struct MultiComponentError : DiagramError {
  using DiagramError::DiagramError;
};

struct GaussEntry {
  int label;   // 1-based, in first-visit order
  bool over;   // this passage uses the over diagonal
  int sign;    // crossing sign
  friend bool operator==(const GaussEntry&, const GaussEntry&) = default;
};

// Classical-crossings-only traversal record of a closed one-component
// diagram, starting from the lowest-numbered edge. Virtual crossings are
// skipped. Each label appears exactly twice, once over and once under.
using GaussCode = std::vector<GaussEntry>;

GaussCode extract_gauss_code(const TangleDiagram& d);

// Sum of signs over the odd crossings: those whose two Gauss occurrences
// enclose an odd number of entries. Vanishes on classical diagrams.
int odd_writhe(const TangleDiagram& d);

// A named quantity evaluated on closed one-component diagrams.
struct Invariant {
  std::string name;
  std::function<long long(const TangleDiagram&)> evaluate;
};

Invariant odd_writhe_invariant();
// Deliberately not an invariant; the audit's negative control.
Invariant crossing_count_invariant();

// Seeded random closed diagram: `steps` moves applied to the crossingless
// unknot, drawn uniformly over every (schema, direction, site) available,
// biased 3:1 toward crossing-increasing applications. Bit-reproducible.
TangleDiagram random_diagram(const Catalog& catalog, std::uint64_t seed, int steps);

struct AuditRow {
  int diagram_index;
  MoveId move;
  Direction dir;
  int site;
  long long before;
  long long after;
  bool equal;
};

struct AuditReport {
  std::string invariant;
  std::vector<AuditRow> rows;
  std::uint64_t checks = 0;
  std::uint64_t violations = 0;
};

// Evaluates the invariant before and after every applicable move at every
// site, both directions, across the corpus.
AuditReport audit_invariance(const Catalog& catalog, const Invariant& inv,
                             const std::set<MoveId>& moves,
                             const std::vector<TangleDiagram>& corpus);

}  // namespace vkm
