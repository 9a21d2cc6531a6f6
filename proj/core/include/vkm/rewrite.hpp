#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "vkm/diagram.hpp"
#include "vkm/moves.hpp"

namespace vkm {

enum class Direction : std::uint8_t { Forward, Backward };

constexpr Direction opposite(Direction d) {
  return d == Direction::Forward ? Direction::Backward : Direction::Forward;
}
std::string to_string(Direction d);
std::optional<Direction> parse_direction(const std::string& s);

struct StaleSiteError : DiagramError {
  using DiagramError::DiagramError;
};

// How one pattern edge lands in the host.
enum class ImageKind : std::uint8_t {
  WholeEdge,  // internal pattern edge = an entire host edge
  Prefix,     // crossing->boundary edge = initial segment of a host edge
  Suffix,     // boundary->crossing edge = final segment of a host edge
  Interior,   // boundary->boundary arc = interior segment of a host edge
  LoopArc,    // boundary->boundary arc = segment of a crossingless loop
};

// An occurrence of a pattern tangle inside a host diagram: an injection of
// pattern crossings (with slot-frame offsets) plus, for each pattern edge,
// the host edge or free loop it cuts and its position among the cuts.
struct MatchSite {
  struct CrossingImage {
    NodeId host = kNoNode;
    int offset = 0;  // pattern slot s sits at host slot (s + offset) % 4
    friend auto operator<=>(const CrossingImage&, const CrossingImage&) = default;
  };
  struct EdgeImage {
    ImageKind kind = ImageKind::WholeEdge;
    std::uint32_t target = 0;  // host edge id, or loop index for LoopArc
    int order = 0;             // rank among Interior/LoopArc cuts on the target
    friend auto operator<=>(const EdgeImage&, const EdgeImage&) = default;
  };
  std::vector<CrossingImage> crossings;  // by pattern crossing (id order)
  std::vector<EdgeImage> edges;          // by pattern edge id

  friend auto operator<=>(const MatchSite&, const MatchSite&) = default;
};

// Every occurrence of the move's pattern side (lhs if Forward, rhs if
// Backward) whose excision leaves a disk-shaped hole, in deterministic
// order. Exhaustive: patterns carry at most three crossings.
std::vector<MatchSite> find_matches(const TangleDiagram& host, const MoveSchema& schema,
                                    Direction dir);

// Matching already computes each candidate's rewrite result to test
// legality; this variant hands the results back alongside the sites.
struct Match {
  MatchSite site;
  TangleDiagram result;
};
std::vector<Match> find_matches_with_results(const TangleDiagram& host, const MoveSchema& schema,
                                             Direction dir);

// Replaces the matched sub-tangle by the schema's other side, gluing along
// the boundary correspondence. The result is validated; a site that no
// longer matches raises StaleSiteError.
TangleDiagram apply_move(const TangleDiagram& host, const MoveSchema& schema,
                         const MatchSite& site, Direction dir);

namespace detail {

// Generalized rewrite: cut out `pattern` at `site`, glue in `replacement`
// (same boundary signature). Returns the raw result without validation.
TangleDiagram splice(const TangleDiagram& host, const TangleDiagram& pattern,
                     const TangleDiagram& replacement, const MatchSite& site);

// Independent legality check: contract the matched region to a single
// vertex whose rotation is the pattern's boundary order and test that every
// component of the contracted map still has Euler characteristic 2. Agrees
// with validate(splice(...)) by construction; kept as a cross-check.
bool site_region_is_disk(const TangleDiagram& host, const TangleDiagram& pattern,
                         const MatchSite& site);

}  // namespace detail

}  // namespace vkm
