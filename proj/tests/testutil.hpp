#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

#include "vkm/diagram.hpp"

namespace vkm::test {

// Deterministic RNG helpers. Bounded sampling avoids std::uniform_int_
// distribution, which is not specified bit-for-bit across libraries.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed) : state(seed * 6364136223846793005ull + 1442695040888963407ull) {}
  std::uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  // Uniform in [0, n) by rejection.
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = ~0ull - (~0ull % n);
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }
};

inline TangleDiagram unknot() {
  DiagramBuilder b;
  b.add_free_loops(1);
  return std::move(b).build();
}

// A kinked arc: strand enters at b0, loops once through a virtual crossing,
// exits at b1. Chirality picks which way the loop curls.
inline TangleDiagram virtual_kink_tangle(int chirality = 0) {
  DiagramBuilder b;
  NodeId b0 = b.add_boundary();
  NodeId b1 = b.add_boundary();
  NodeId v = b.add_virtual();
  b.connect(b0, 0, v, 0);
  if (chirality == 0) {
    b.connect(v, 2, v, 1);
    b.connect(v, 3, b1, 0);
  } else {
    b.connect(v, 2, v, 3);
    b.connect(v, 1, b1, 0);
  }
  b.set_boundary({b0, b1});
  return std::move(b).build();
}

// Closed one-crossing diagram: the unknot with one classical kink.
inline TangleDiagram classical_kink_knot(OverDiagonal over = OverDiagonal::Slots02) {
  DiagramBuilder b;
  NodeId v = b.add_classical(over);
  b.connect(v, 2, v, 1);
  b.connect(v, 3, v, 0);
  return std::move(b).build();
}

// Closed one-crossing diagram with a virtual kink.
inline TangleDiagram virtual_kink_knot() {
  DiagramBuilder b;
  NodeId v = b.add_virtual();
  b.connect(v, 2, v, 1);
  b.connect(v, 3, v, 0);
  return std::move(b).build();
}

// Relabels nodes and edges and rotates every crossing's slot frame; the
// result is the same diagram re-encoded, so canonical data must not move.
inline TangleDiagram scramble(const TangleDiagram& d, Rng& rng) {
  std::vector<NodeId> perm(d.node_count());
  std::iota(perm.begin(), perm.end(), 0);
  for (std::size_t i = perm.size(); i > 1; --i)
    std::swap(perm[i - 1], perm[rng.below(i)]);

  std::vector<int> frame(d.node_count(), 0);
  DiagramBuilder b;
  std::vector<NodeId> inverse(d.node_count());
  for (std::size_t i = 0; i < perm.size(); ++i) inverse[perm[i]] = static_cast<NodeId>(i);

  // Build nodes in permuted order; old node inverse[j] becomes new node j.
  std::vector<NodeId> new_id(d.node_count());
  for (NodeId j = 0; j < d.node_count(); ++j) {
    NodeId old = inverse[j];
    const Node& nd = d.node(old);
    int off = 0;
    switch (nd.kind) {
      case NodeKind::Classical:
        off = static_cast<int>(rng.below(4));
        b.add_classical(rotated(nd.over, off));
        break;
      case NodeKind::Virtual:
        off = static_cast<int>(rng.below(4));
        b.add_virtual();
        break;
      case NodeKind::Boundary:
        b.add_boundary();
        break;
    }
    frame[old] = off;
    new_id[old] = j;
  }

  std::vector<EdgeId> eperm(d.edge_count());
  std::iota(eperm.begin(), eperm.end(), 0);
  for (std::size_t i = eperm.size(); i > 1; --i)
    std::swap(eperm[i - 1], eperm[rng.below(i)]);

  auto map_end = [&](const EdgeEnd& e) {
    int slot = d.node(e.node).kind == NodeKind::Boundary
                   ? 0
                   : (e.slot + frame[e.node]) % 4;
    return EdgeEnd{new_id[e.node], static_cast<std::uint8_t>(slot)};
  };
  for (EdgeId ei : eperm) {
    const Edge& e = d.edge(ei);
    EdgeEnd f = map_end(e.from), t = map_end(e.to);
    b.connect(f.node, f.slot, t.node, t.slot);
  }

  std::vector<NodeId> boundary;
  for (NodeId old : d.boundary()) boundary.push_back(new_id[old]);
  b.set_boundary(std::move(boundary));
  b.add_free_loops(d.free_loops());
  return std::move(b).build();
}

}  // namespace vkm::test
