#include "vkm/canonical.hpp"

#include <algorithm>
#include <deque>
#include <utility>

namespace vkm {

namespace {

struct Seed {
  NodeId node;
  int slot;  // pretend-arrival slot; frames anchor here
};

struct Traversal {
  std::vector<NodeId> order;   // new label -> old node
  std::vector<NodeId> label;   // old node -> new label (kNoNode if unvisited)
  std::vector<int> frame;      // old node -> old slot mapped to new slot 0
  int chir = +1;
};

int map_slot(const Traversal& t, const TangleDiagram& d, NodeId n, int old_slot) {
  if (d.node(n).kind == NodeKind::Boundary) return 0;
  int f = t.frame[n];
  return t.chir > 0 ? (old_slot - f + 4) % 4 : (f - old_slot + 4) % 4;
}

int unmap_slot(const Traversal& t, const TangleDiagram& d, NodeId n, int new_slot) {
  if (d.node(n).kind == NodeKind::Boundary) return 0;
  int f = t.frame[n];
  return t.chir > 0 ? (f + new_slot) % 4 : (f - new_slot + 4) % 4;
}

// BFS labeling. `prelabeled` seeds take labels 0..m-1 up front (tangle
// boundary order); `lazy` seeds start a fresh component whenever the queue
// drains. Children are visited in rotation order from the arrival slot.
Traversal traverse(const TangleDiagram& d, const std::vector<Seed>& prelabeled,
                   const std::vector<Seed>& lazy, int chir) {
  Traversal t;
  t.chir = chir;
  t.label.assign(d.node_count(), kNoNode);
  t.frame.assign(d.node_count(), 0);
  std::deque<NodeId> queue;
  std::size_t lazy_idx = 0;

  auto visit = [&](NodeId n, int arrival_slot) {
    t.label[n] = static_cast<NodeId>(t.order.size());
    t.order.push_back(n);
    t.frame[n] = d.node(n).kind == NodeKind::Boundary ? 0 : arrival_slot;
    queue.push_back(n);
  };

  for (const Seed& s : prelabeled) visit(s.node, s.slot);

  for (;;) {
    if (queue.empty()) {
      while (lazy_idx < lazy.size() && t.label[lazy[lazy_idx].node] != kNoNode) ++lazy_idx;
      if (lazy_idx == lazy.size()) break;
      visit(lazy[lazy_idx].node, lazy[lazy_idx].slot);
      ++lazy_idx;
      continue;
    }
    NodeId n = queue.front();
    queue.pop_front();
    int arity = slot_count(d.node(n).kind);
    for (int j = 0; j < arity; ++j) {
      int s = unmap_slot(t, d, n, j);
      EdgeEnd far = d.other_end(n, s);
      if (t.label[far.node] == kNoNode) visit(far.node, far.slot);
    }
  }
  return t;
}

OverDiagonal map_over(const Traversal& t, const TangleDiagram& d, NodeId n) {
  OverDiagonal o = rotated(d.node(n).over, t.frame[n]);
  return t.chir > 0 ? o : flipped(o);
}

void emit_body(const TangleDiagram& d, const Traversal& t, std::string& code,
               DiagramBuilder* rb) {
  for (std::size_t L = 0; L < t.order.size(); ++L) {
    NodeId n = t.order[L];
    if (L) code += ',';
    switch (d.node(n).kind) {
      case NodeKind::Boundary:
        code += 'b';
        if (rb) rb->add_boundary();
        break;
      case NodeKind::Virtual:
        code += 'v';
        if (rb) rb->add_virtual();
        break;
      case NodeKind::Classical: {
        OverDiagonal o = map_over(t, d, n);
        code += o == OverDiagonal::Slots02 ? "x02" : "x13";
        if (rb) rb->add_classical(o);
        break;
      }
    }
  }
  code += ':';
  std::vector<char> emitted(d.edge_count(), 0);
  bool first = true;
  for (std::size_t L = 0; L < t.order.size(); ++L) {
    NodeId n = t.order[L];
    int arity = slot_count(d.node(n).kind);
    for (int j = 0; j < arity; ++j) {
      int s = unmap_slot(t, d, n, j);
      const SlotUse& u = d.slot_use(n, s);
      if (emitted[u.edge]) continue;
      emitted[u.edge] = 1;
      const Edge& e = d.edge(u.edge);
      NodeId fl = t.label[e.from.node];
      int fs = map_slot(t, d, e.from.node, e.from.slot);
      NodeId tl = t.label[e.to.node];
      int ts = map_slot(t, d, e.to.node, e.to.slot);
      if (!first) code += ',';
      first = false;
      code += std::to_string(fl) + '.' + std::to_string(fs) + '>' + std::to_string(tl) + '.' +
              std::to_string(ts);
      if (rb) rb->connect(fl, fs, tl, ts);
    }
  }
}

// Emits code and the relabeled diagram; the traversal must cover all nodes.
CanonicalForm emit(const TangleDiagram& d, const Traversal& t) {
  std::string code = d.closed() ? "c" : "t" + std::to_string(d.boundary().size());
  code += ':';
  DiagramBuilder rb;
  emit_body(d, t, code, &rb);
  code += ":L" + std::to_string(d.free_loops());
  rb.add_free_loops(d.free_loops());
  if (!d.closed()) {
    std::vector<NodeId> bd(d.boundary().size());
    for (std::size_t i = 0; i < bd.size(); ++i) bd[i] = static_cast<NodeId>(i);
    rb.set_boundary(std::move(bd));
  }
  return {std::move(rb).build_unchecked(), std::move(code)};
}

// Structure-only code of the component containing `root`; used to rank roots.
std::string component_fragment(const TangleDiagram& d, Seed root, int chir) {
  Traversal t = traverse(d, {}, {root}, chir);
  std::string code;
  emit_body(d, t, code, nullptr);
  return code;
}

// Strand-connected components among nodes not yet visited.
std::vector<std::vector<NodeId>> strand_components(const TangleDiagram& d,
                                                   const std::vector<char>& skip) {
  std::vector<int> comp(d.node_count(), -1);
  std::vector<std::vector<NodeId>> out;
  for (NodeId start = 0; start < d.node_count(); ++start) {
    if (skip[start] || comp[start] != -1) continue;
    int c = static_cast<int>(out.size());
    out.emplace_back();
    std::vector<NodeId> stack{start};
    comp[start] = c;
    while (!stack.empty()) {
      NodeId n = stack.back();
      stack.pop_back();
      out[c].push_back(n);
      int arity = slot_count(d.node(n).kind);
      for (int s = 0; s < arity; ++s) {
        NodeId m = d.other_end(n, s).node;
        if (!skip[m] && comp[m] == -1) {
          comp[m] = c;
          stack.push_back(m);
        }
      }
    }
    std::sort(out[c].begin(), out[c].end());
  }
  return out;
}

Seed best_root(const TangleDiagram& d, const std::vector<NodeId>& component, int chir,
               std::string* fragment_out) {
  Seed best{component.front(), 0};
  std::string best_frag;
  bool have = false;
  for (NodeId n : component) {
    int arity = slot_count(d.node(n).kind);
    for (int s = 0; s < arity; ++s) {
      std::string frag = component_fragment(d, {n, s}, chir);
      if (!have || frag < best_frag) {
        have = true;
        best_frag = std::move(frag);
        best = {n, s};
      }
    }
  }
  if (fragment_out) *fragment_out = std::move(best_frag);
  return best;
}

// Minimal-fragment roots of every component under `chir`, in fragment order.
std::vector<Seed> sorted_roots(const TangleDiagram& d,
                               const std::vector<std::vector<NodeId>>& comps, int chir) {
  std::vector<std::pair<std::string, Seed>> picks;
  for (const auto& comp : comps) {
    std::string frag;
    Seed s = best_root(d, comp, chir, &frag);
    picks.push_back({std::move(frag), s});
  }
  std::sort(picks.begin(), picks.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<Seed> seeds;
  seeds.reserve(picks.size());
  for (auto& [frag, s] : picks) seeds.push_back(s);
  return seeds;
}

CanonicalForm canonicalize_validated(const TangleDiagram& d) {
  if (!d.closed()) {
    std::vector<Seed> bseeds;
    bseeds.reserve(d.boundary().size());
    for (NodeId b : d.boundary()) bseeds.push_back({b, 0});
    Traversal t = traverse(d, bseeds, {}, +1);
    if (t.order.size() < d.node_count()) {
      // Closed components floating inside the disk: the ambient orientation
      // is pinned by the boundary, so a single chirality applies.
      std::vector<char> visited(d.node_count(), 0);
      for (NodeId n : t.order) visited[n] = 1;
      std::vector<Seed> lazy = sorted_roots(d, strand_components(d, visited), +1);
      t = traverse(d, bseeds, lazy, +1);
    }
    return emit(d, t);
  }

  if (d.node_count() == 0)
    return {d, "c:::L" + std::to_string(d.free_loops())};

  std::vector<char> skip(d.node_count(), 0);
  auto comps = strand_components(d, skip);
  CanonicalForm best;
  bool have = false;
  for (int chir : {+1, -1}) {
    Traversal t = traverse(d, {}, sorted_roots(d, comps, chir), chir);
    CanonicalForm cand = emit(d, t);
    if (!have || cand.code < best.code) {
      have = true;
      best = std::move(cand);
    }
  }
  return best;
}

}  // namespace

CanonicalForm canonicalize(const TangleDiagram& d) {
  ValidationReport report = validate(d);
  if (!report.ok()) {
    std::string msg = "cannot canonicalize invalid diagram:";
    for (const Violation& v : report.violations) msg += " [" + v.rule + "] " + v.detail;
    throw InvalidDiagramError(msg);
  }
  return canonicalize_validated(d);
}

std::string canonical_code(const TangleDiagram& d) { return canonicalize(d).code; }

TangleDiagram diagram_from_code(const std::string& code) {
  auto fail = [&](const std::string& why) -> DiagramError {
    return DiagramError("bad canonical code (" + why + "): " + code);
  };
  std::vector<std::string> sections;
  std::size_t pos = 0;
  for (int i = 0; i < 3; ++i) {
    std::size_t next = code.find(':', pos);
    if (next == std::string::npos) throw fail("missing sections");
    sections.push_back(code.substr(pos, next - pos));
    pos = next + 1;
  }
  sections.push_back(code.substr(pos));

  DiagramBuilder b;
  bool closed;
  std::size_t boundary_count = 0;
  if (sections[0] == "c") {
    closed = true;
  } else if (!sections[0].empty() && sections[0][0] == 't') {
    closed = false;
    boundary_count = std::stoul(sections[0].substr(1));
  } else {
    throw fail("header");
  }

  auto split = [](const std::string& s, char sep) {
    std::vector<std::string> out;
    if (s.empty()) return out;
    std::size_t start = 0;
    for (;;) {
      std::size_t next = s.find(sep, start);
      out.push_back(s.substr(start, next - start));
      if (next == std::string::npos) break;
      start = next + 1;
    }
    return out;
  };

  std::size_t node_count = 0;
  for (const std::string& tok : split(sections[1], ',')) {
    if (tok == "b")
      b.add_boundary();
    else if (tok == "v")
      b.add_virtual();
    else if (tok == "x02")
      b.add_classical(OverDiagonal::Slots02);
    else if (tok == "x13")
      b.add_classical(OverDiagonal::Slots13);
    else
      throw fail("node token '" + tok + "'");
    ++node_count;
  }
  for (const std::string& tok : split(sections[2], ',')) {
    std::size_t gt = tok.find('>');
    if (gt == std::string::npos) throw fail("edge token '" + tok + "'");
    auto parse_end = [&](const std::string& part) {
      std::size_t dot = part.find('.');
      if (dot == std::string::npos) throw fail("edge end '" + part + "'");
      return std::pair<NodeId, int>{static_cast<NodeId>(std::stoul(part.substr(0, dot))),
                                    std::stoi(part.substr(dot + 1))};
    };
    auto [fn, fs] = parse_end(tok.substr(0, gt));
    auto [tn, ts] = parse_end(tok.substr(gt + 1));
    b.connect(fn, fs, tn, ts);
  }
  if (sections[3].empty() || sections[3][0] != 'L') throw fail("loop section");
  b.add_free_loops(std::stoi(sections[3].substr(1)));
  if (!closed) {
    if (boundary_count > node_count) throw fail("boundary count");
    std::vector<NodeId> bd(boundary_count);
    for (std::size_t i = 0; i < boundary_count; ++i) bd[i] = static_cast<NodeId>(i);
    b.set_boundary(std::move(bd));
  }
  return std::move(b).build_unchecked();
}

bool is_equivalent(const TangleDiagram& a, const TangleDiagram& b) {
  if (a.closed() != b.closed())
    throw SignatureMismatchError("closed diagram compared against tangle");
  if (!a.closed()) {
    BoundarySignature sa = boundary_signature(a), sb = boundary_signature(b);
    if (sa != sb)
      throw SignatureMismatchError("boundary signatures differ: " + to_string(sa) + " vs " +
                                   to_string(sb));
  }
  return canonical_code(a) == canonical_code(b);
}

}  // namespace vkm
