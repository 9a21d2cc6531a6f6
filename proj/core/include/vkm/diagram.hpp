#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace vkm {

using NodeId = std::uint32_t;
using EdgeId = std::uint32_t;

inline constexpr NodeId kNoNode = static_cast<NodeId>(-1);
inline constexpr EdgeId kNoEdge = static_cast<EdgeId>(-1);

// Node kinds of the 4-valent planar map. Crossings own slots 0..3 in
// counterclockwise order; boundary points own the single slot 0.
enum class NodeKind : std::uint8_t { Classical, Virtual, Boundary };

// Which through-strand diagonal is the over strand at a classical crossing.
enum class OverDiagonal : std::uint8_t { Slots02, Slots13 };

constexpr OverDiagonal flipped(OverDiagonal d) {
  return d == OverDiagonal::Slots02 ? OverDiagonal::Slots13 : OverDiagonal::Slots02;
}

// Rotating a crossing's slot frame by an odd offset exchanges the diagonals.
constexpr OverDiagonal rotated(OverDiagonal d, int offset) {
  return (offset % 2) == 0 ? d : flipped(d);
}

struct Node {
  NodeKind kind = NodeKind::Virtual;
  OverDiagonal over = OverDiagonal::Slots02;  // meaningful for Classical only
};

constexpr int slot_count(NodeKind k) { return k == NodeKind::Boundary ? 1 : 4; }

struct EdgeEnd {
  NodeId node = kNoNode;
  std::uint8_t slot = 0;
  friend bool operator==(const EdgeEnd&, const EdgeEnd&) = default;
  friend auto operator<=>(const EdgeEnd&, const EdgeEnd&) = default;
};

// Directed edge; the direction is the strand orientation.
struct Edge {
  EdgeEnd from;
  EdgeEnd to;
  friend bool operator==(const Edge&, const Edge&) = default;
};

enum class StrandDir : std::uint8_t { In, Out };

// Cyclic in/out pattern around a tangle's disk boundary.
using BoundarySignature = std::vector<StrandDir>;

struct Violation {
  std::string rule;
  std::string detail;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

struct DiagramError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotAClassicalCrossing : DiagramError {
  using DiagramError::DiagramError;
};
struct ClosedDiagramError : DiagramError {
  using DiagramError::DiagramError;
};
struct InvalidDiagramError : DiagramError {
  using DiagramError::DiagramError;
};
struct SignatureMismatchError : DiagramError {
  using DiagramError::DiagramError;
};

// Where an edge end lands: which edge and whether it is the head (to) end.
struct SlotUse {
  EdgeId edge = kNoEdge;
  bool head = false;
  std::uint8_t count = 0;  // how many edge ends claim this slot
};

class DiagramBuilder;

// Immutable oriented tangle/knot diagram as a planar combinatorial map.
// Closed diagrams have an empty boundary. `free_loops` counts crossingless
// circle components, which have no nodes or edges of their own.
class TangleDiagram {
 public:
  TangleDiagram() = default;

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::vector<NodeId>& boundary() const { return boundary_; }
  int free_loops() const { return free_loops_; }

  bool closed() const { return boundary_.empty(); }
  std::size_t node_count() const { return nodes_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const Node& node(NodeId n) const { return nodes_[n]; }
  const Edge& edge(EdgeId e) const { return edges_[e]; }

  std::size_t crossing_count() const;
  std::size_t classical_count() const;
  std::size_t virtual_count() const;

  // Slot incidence. Only meaningful on structurally sound diagrams
  // (every slot used exactly once); validate() reports the rest.
  const SlotUse& slot_use(NodeId n, int slot) const { return slots_[n][slot]; }
  EdgeEnd other_end(NodeId n, int slot) const;
  bool slot_is_incoming(NodeId n, int slot) const { return slots_[n][slot].head; }

 private:
  friend class DiagramBuilder;
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<NodeId> boundary_;
  int free_loops_ = 0;
  std::vector<std::array<SlotUse, 4>> slots_;

  void index_slots();
};

class DiagramBuilder {
 public:
  NodeId add_classical(OverDiagonal over);
  NodeId add_virtual();
  NodeId add_boundary();

  // Adds the directed edge (from_node.from_slot) -> (to_node.to_slot).
  EdgeId connect(NodeId from_node, int from_slot, NodeId to_node, int to_slot);

  void set_boundary(std::vector<NodeId> order);
  void add_free_loops(int n) { free_loops_ += n; }

  // Builds without checking structural invariants (validate() explains why
  // a candidate is broken), only that ids and slot indices are in range.
  TangleDiagram build_unchecked() &&;

  // Builds and validates; throws InvalidDiagramError listing the violations.
  TangleDiagram build() &&;

 private:
  std::vector<Node> nodes_;
  std::vector<Edge> edges_;
  std::vector<NodeId> boundary_;
  int free_loops_ = 0;
};

// Checks every structural invariant: slot coverage, through-strand rule,
// boundary bookkeeping, and genus 0 per connected component (with the disk
// boundary closed off by a rim for tangles).
ValidationReport validate(const TangleDiagram& d);

// In/out pattern around the disk, in boundary order. Tangle only.
BoundarySignature boundary_signature(const TangleDiagram& d);

// Sign of a classical crossing under the right-hand convention: +1 iff the
// over strand's outgoing direction rotated 90 degrees counterclockwise
// points along the under strand's outgoing direction.
int crossing_sign(const TangleDiagram& d, NodeId n);

// Same diagram with the boundary sequence rotated: new[i] = old[(i+k) mod n].
TangleDiagram rotate_boundary(const TangleDiagram& d, int k);

std::string to_string(StrandDir s);
std::string to_string(const BoundarySignature& sig);

namespace detail {

// Connected components over nodes (rim edges join consecutive boundary
// points). Free loops are not included. Returns component index per node.
std::vector<int> node_components(const TangleDiagram& d, int& component_count);

// Per-component Euler characteristic of the rim-augmented rotation system.
// Requires slot coverage and arity to be intact.
std::vector<int> euler_characteristics(const TangleDiagram& d);

// For each edge, the ids of the faces on its two sides in the rim-augmented
// rotation system (equal ids if the same face touches both sides).
std::vector<std::array<int, 2>> edge_faces(const TangleDiagram& d);

// Component index of each edge (same numbering as node_components).
std::vector<int> edge_components(const TangleDiagram& d);

}  // namespace detail

}  // namespace vkm
