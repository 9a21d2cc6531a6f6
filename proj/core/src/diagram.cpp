#include "vkm/diagram.hpp"

#include <algorithm>
#include <numeric>

namespace vkm {

std::size_t TangleDiagram::crossing_count() const {
  std::size_t n = 0;
  for (const Node& nd : nodes_)
    if (nd.kind != NodeKind::Boundary) ++n;
  return n;
}

std::size_t TangleDiagram::classical_count() const {
  std::size_t n = 0;
  for (const Node& nd : nodes_)
    if (nd.kind == NodeKind::Classical) ++n;
  return n;
}

std::size_t TangleDiagram::virtual_count() const {
  std::size_t n = 0;
  for (const Node& nd : nodes_)
    if (nd.kind == NodeKind::Virtual) ++n;
  return n;
}

EdgeEnd TangleDiagram::other_end(NodeId n, int slot) const {
  const SlotUse& u = slots_[n][slot];
  const Edge& e = edges_[u.edge];
  return u.head ? e.from : e.to;
}

void TangleDiagram::index_slots() {
  slots_.assign(nodes_.size(), {});
  auto claim = [&](const EdgeEnd& end, EdgeId e, bool head) {
    SlotUse& u = slots_[end.node][end.slot];
    if (u.count == 0) {
      u.edge = e;
      u.head = head;
    }
    ++u.count;
  };
  for (EdgeId e = 0; e < edges_.size(); ++e) {
    claim(edges_[e].from, e, false);
    claim(edges_[e].to, e, true);
  }
}

NodeId DiagramBuilder::add_classical(OverDiagonal over) {
  nodes_.push_back({NodeKind::Classical, over});
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId DiagramBuilder::add_virtual() {
  nodes_.push_back({NodeKind::Virtual, OverDiagonal::Slots02});
  return static_cast<NodeId>(nodes_.size() - 1);
}

NodeId DiagramBuilder::add_boundary() {
  nodes_.push_back({NodeKind::Boundary, OverDiagonal::Slots02});
  return static_cast<NodeId>(nodes_.size() - 1);
}

EdgeId DiagramBuilder::connect(NodeId from_node, int from_slot, NodeId to_node,
                               int to_slot) {
  auto check = [&](NodeId n, int slot) {
    if (n >= nodes_.size()) throw DiagramError("edge references unknown node");
    if (slot < 0 || slot >= slot_count(nodes_[n].kind))
      throw DiagramError("edge references slot out of range");
  };
  check(from_node, from_slot);
  check(to_node, to_slot);
  edges_.push_back({{from_node, static_cast<std::uint8_t>(from_slot)},
                    {to_node, static_cast<std::uint8_t>(to_slot)}});
  return static_cast<EdgeId>(edges_.size() - 1);
}

void DiagramBuilder::set_boundary(std::vector<NodeId> order) {
  boundary_ = std::move(order);
}

TangleDiagram DiagramBuilder::build_unchecked() && {
  for (NodeId b : boundary_)
    if (b >= nodes_.size()) throw DiagramError("boundary references unknown node");
  TangleDiagram d;
  d.nodes_ = std::move(nodes_);
  d.edges_ = std::move(edges_);
  d.boundary_ = std::move(boundary_);
  d.free_loops_ = free_loops_;
  d.index_slots();
  return d;
}

TangleDiagram DiagramBuilder::build() && {
  TangleDiagram d = std::move(*this).build_unchecked();
  ValidationReport report = validate(d);
  if (!report.ok()) {
    std::string msg = "invalid diagram:";
    for (const Violation& v : report.violations) msg += " [" + v.rule + "] " + v.detail;
    throw InvalidDiagramError(msg);
  }
  return d;
}

namespace {

// Darts: 2e / 2e+1 are the tail / head ends of edge e. For tangles, rim
// edge i joins boundary[i] -> boundary[i+1]; its darts follow the real ones.
struct DartMap {
  const TangleDiagram* d;
  std::size_t real_darts;
  std::size_t total_darts;
  std::vector<int> boundary_pos;  // node -> index in boundary list, or -1

  explicit DartMap(const TangleDiagram& diagram) : d(&diagram) {
    real_darts = 2 * d->edge_count();
    total_darts = real_darts + 2 * d->boundary().size();
    boundary_pos.assign(d->node_count(), -1);
    for (std::size_t i = 0; i < d->boundary().size(); ++i)
      boundary_pos[d->boundary()[i]] = static_cast<int>(i);
  }

  std::size_t alpha(std::size_t dart) const { return dart ^ 1; }

  EdgeEnd end_of(std::size_t dart) const {
    const Edge& e = d->edge(static_cast<EdgeId>(dart / 2));
    return (dart & 1) ? e.to : e.from;
  }

  std::size_t dart_at(NodeId n, int slot) const {
    const SlotUse& u = d->slot_use(n, slot);
    return 2 * static_cast<std::size_t>(u.edge) + (u.head ? 1 : 0);
  }

  std::size_t rim_tail(int i) const { return real_darts + 2 * i; }
  std::size_t rim_head(int i) const { return real_darts + 2 * i + 1; }

  NodeId node_of(std::size_t dart) const {
    if (dart < real_darts) return end_of(dart).node;
    std::size_t r = dart - real_darts;
    int i = static_cast<int>(r / 2);
    int k = static_cast<int>(d->boundary().size());
    return (r & 1) ? d->boundary()[(i + 1) % k] : d->boundary()[i];
  }

  // Next dart counterclockwise around the node that `dart` is attached to.
  std::size_t sigma(std::size_t dart) const {
    NodeId n = node_of(dart);
    const Node& nd = d->node(n);
    if (nd.kind != NodeKind::Boundary) {
      int slot = end_of(dart).slot;
      return dart_at(n, (slot + 1) % 4);
    }
    // Boundary point i carries (rim toward i+1, strand, rim from i-1),
    // in counterclockwise order as seen with the tangle inside the disk.
    int i = boundary_pos[n];
    int k = static_cast<int>(d->boundary().size());
    std::size_t next_tail = rim_tail(i);
    std::size_t strand = dart_at(n, 0);
    std::size_t prev_head = rim_head((i - 1 + k) % k);
    if (dart == next_tail) return strand;
    if (dart == strand) return prev_head;
    return next_tail;
  }
};

}  // namespace

namespace detail {

std::vector<int> node_components(const TangleDiagram& d, int& component_count) {
  std::vector<int> comp(d.node_count(), -1);
  std::vector<NodeId> stack;
  int c = 0;
  // Rim adjacency: consecutive boundary points are connected.
  std::vector<NodeId> rim_next(d.node_count(), kNoNode), rim_prev(d.node_count(), kNoNode);
  const auto& b = d.boundary();
  for (std::size_t i = 0; i < b.size(); ++i) {
    rim_next[b[i]] = b[(i + 1) % b.size()];
    rim_prev[b[i]] = b[(i + b.size() - 1) % b.size()];
  }
  std::vector<std::vector<NodeId>> adj(d.node_count());
  for (const Edge& e : d.edges()) {
    adj[e.from.node].push_back(e.to.node);
    adj[e.to.node].push_back(e.from.node);
  }
  for (NodeId start = 0; start < d.node_count(); ++start) {
    if (comp[start] != -1) continue;
    comp[start] = c;
    stack.push_back(start);
    while (!stack.empty()) {
      NodeId n = stack.back();
      stack.pop_back();
      auto visit = [&](NodeId m) {
        if (m != kNoNode && comp[m] == -1) {
          comp[m] = c;
          stack.push_back(m);
        }
      };
      for (NodeId m : adj[n]) visit(m);
      visit(rim_next[n]);
      visit(rim_prev[n]);
    }
    ++c;
  }
  component_count = c;
  return comp;
}

std::vector<int> euler_characteristics(const TangleDiagram& d) {
  int components = 0;
  std::vector<int> comp = node_components(d, components);
  std::vector<int> verts(components, 0), edges(components, 0), faces(components, 0);
  for (NodeId n = 0; n < d.node_count(); ++n) ++verts[comp[n]];
  for (const Edge& e : d.edges()) ++edges[comp[e.from.node]];
  for (std::size_t i = 0; i < d.boundary().size(); ++i) ++edges[comp[d.boundary()[i]]];

  DartMap darts(d);
  std::vector<char> seen(darts.total_darts, 0);
  for (std::size_t start = 0; start < darts.total_darts; ++start) {
    if (seen[start]) continue;
    int owner = comp[darts.node_of(start)];
    std::size_t dart = start;
    do {
      seen[dart] = 1;
      dart = darts.sigma(darts.alpha(dart));
    } while (dart != start);
    ++faces[owner];
  }

  std::vector<int> chi(components);
  for (int c = 0; c < components; ++c) chi[c] = verts[c] - edges[c] + faces[c];
  return chi;
}

std::vector<std::array<int, 2>> edge_faces(const TangleDiagram& d) {
  DartMap darts(d);
  std::vector<int> face_of(darts.total_darts, -1);
  int nfaces = 0;
  for (std::size_t start = 0; start < darts.total_darts; ++start) {
    if (face_of[start] != -1) continue;
    std::size_t dart = start;
    do {
      face_of[dart] = nfaces;
      dart = darts.sigma(darts.alpha(dart));
    } while (dart != start);
    ++nfaces;
  }
  std::vector<std::array<int, 2>> out(d.edge_count());
  for (EdgeId e = 0; e < d.edge_count(); ++e) out[e] = {face_of[2 * e], face_of[2 * e + 1]};
  return out;
}

std::vector<int> edge_components(const TangleDiagram& d) {
  int n = 0;
  std::vector<int> comp = node_components(d, n);
  std::vector<int> out(d.edge_count());
  for (EdgeId e = 0; e < d.edge_count(); ++e) out[e] = comp[d.edge(e).from.node];
  return out;
}

}  // namespace detail

ValidationReport validate(const TangleDiagram& d) {
  ValidationReport report;
  auto fail = [&](std::string rule, std::string detail) {
    report.violations.push_back({std::move(rule), std::move(detail)});
  };

  // Slot coverage: every half-edge slot used by exactly one edge end.
  for (NodeId n = 0; n < d.node_count(); ++n) {
    int arity = slot_count(d.node(n).kind);
    for (int s = 0; s < 4; ++s) {
      std::uint8_t c = d.slot_use(n, s).count;
      if (s < arity && c != 1)
        fail("slot-coverage", "node " + std::to_string(n) + " slot " + std::to_string(s) +
                                  " used " + std::to_string(c) + " times");
      if (s >= arity && c != 0)
        fail("slot-arity", "node " + std::to_string(n) + " has no slot " + std::to_string(s));
    }
  }

  // Boundary bookkeeping: the boundary list is exactly the boundary nodes.
  {
    std::vector<int> listed(d.node_count(), 0);
    for (NodeId b : d.boundary()) ++listed[b];
    for (NodeId n = 0; n < d.node_count(); ++n) {
      bool is_b = d.node(n).kind == NodeKind::Boundary;
      if (is_b && listed[n] != 1)
        fail("boundary-list", "boundary node " + std::to_string(n) + " listed " +
                                  std::to_string(listed[n]) + " times");
      if (!is_b && listed[n] != 0)
        fail("boundary-list", "non-boundary node " + std::to_string(n) + " in boundary");
    }
  }

  if (d.free_loops() < 0) fail("free-loops", "negative free loop count");

  if (!report.ok()) return report;  // remaining checks need sound incidence

  // Through-strand rule: slots {0,2} and {1,3} each carry one incoming and
  // one outgoing end at every crossing.
  for (NodeId n = 0; n < d.node_count(); ++n) {
    if (d.node(n).kind == NodeKind::Boundary) continue;
    for (int pair = 0; pair < 2; ++pair) {
      bool in_a = d.slot_is_incoming(n, pair);
      bool in_b = d.slot_is_incoming(n, pair + 2);
      if (in_a == in_b)
        fail("through-strand", "node " + std::to_string(n) + " slots " +
                                   std::to_string(pair) + "/" + std::to_string(pair + 2) +
                                   (in_a ? " both incoming" : " both outgoing"));
    }
  }

  // Boundary balance: as many strands enter the disk as leave it.
  if (!d.boundary().empty()) {
    int in = 0, out = 0;
    for (NodeId b : d.boundary()) (d.slot_is_incoming(b, 0) ? in : out)++;
    if (in != out)
      fail("boundary-balance", "in=" + std::to_string(in) + " out=" + std::to_string(out));
  }

  if (!report.ok()) return report;

  // Planarity: every connected component is a sphere map once the disk
  // boundary is closed off by the rim.
  std::vector<int> chi = detail::euler_characteristics(d);
  for (std::size_t c = 0; c < chi.size(); ++c) {
    if (chi[c] != 2)
      fail("planarity", "component " + std::to_string(c) + " has Euler characteristic " +
                            std::to_string(chi[c]));
  }
  return report;
}

BoundarySignature boundary_signature(const TangleDiagram& d) {
  BoundarySignature sig;
  sig.reserve(d.boundary().size());
  for (NodeId b : d.boundary())
    sig.push_back(d.slot_is_incoming(b, 0) ? StrandDir::Out : StrandDir::In);
  return sig;
}

int crossing_sign(const TangleDiagram& d, NodeId n) {
  if (n >= d.node_count() || d.node(n).kind != NodeKind::Classical)
    throw NotAClassicalCrossing("node " + std::to_string(n) + " is not a classical crossing");
  int over_base = d.node(n).over == OverDiagonal::Slots02 ? 0 : 1;
  int under_base = 1 - over_base;
  int over_out = d.slot_is_incoming(n, over_base) ? over_base + 2 : over_base;
  int under_out = d.slot_is_incoming(n, under_base) ? under_base + 2 : under_base;
  return (over_out + 1) % 4 == under_out ? +1 : -1;
}

TangleDiagram rotate_boundary(const TangleDiagram& d, int k) {
  if (d.closed()) throw ClosedDiagramError("cannot rotate the boundary of a closed diagram");
  int n = static_cast<int>(d.boundary().size());
  k = ((k % n) + n) % n;
  DiagramBuilder b;
  for (const Node& nd : d.nodes()) {
    switch (nd.kind) {
      case NodeKind::Classical: b.add_classical(nd.over); break;
      case NodeKind::Virtual: b.add_virtual(); break;
      case NodeKind::Boundary: b.add_boundary(); break;
    }
  }
  for (const Edge& e : d.edges()) b.connect(e.from.node, e.from.slot, e.to.node, e.to.slot);
  std::vector<NodeId> order(d.boundary().size());
  for (int i = 0; i < n; ++i) order[i] = d.boundary()[(i + k) % n];
  b.set_boundary(std::move(order));
  b.add_free_loops(d.free_loops());
  return std::move(b).build_unchecked();
}

std::string to_string(StrandDir s) { return s == StrandDir::In ? "in" : "out"; }

std::string to_string(const BoundarySignature& sig) {
  std::string out;
  for (StrandDir s : sig) out += (s == StrandDir::In ? 'i' : 'o');
  return out;
}

}  // namespace vkm
