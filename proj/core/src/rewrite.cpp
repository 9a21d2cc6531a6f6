#include "vkm/rewrite.hpp"

#include <algorithm>
#include <cassert>
#include <map>
#include <optional>

#include "vkm/canonical.hpp"

namespace vkm {

std::string to_string(Direction d) { return d == Direction::Forward ? "forward" : "backward"; }

std::optional<Direction> parse_direction(const std::string& s) {
  if (s == "forward" || s == "fwd" || s == "f") return Direction::Forward;
  if (s == "backward" || s == "bwd" || s == "b") return Direction::Backward;
  return std::nullopt;
}

namespace {

struct PatternInfo {
  const TangleDiagram* p = nullptr;
  std::vector<NodeId> crossings;   // pattern crossings in id order
  std::vector<int> crossing_index; // node -> index into `crossings` or -1
  std::vector<int> boundary_index; // node -> position in pattern boundary or -1
};

PatternInfo pattern_info(const TangleDiagram& p) {
  PatternInfo info;
  info.p = &p;
  info.crossing_index.assign(p.node_count(), -1);
  info.boundary_index.assign(p.node_count(), -1);
  for (NodeId n = 0; n < p.node_count(); ++n) {
    if (p.node(n).kind != NodeKind::Boundary) {
      info.crossing_index[n] = static_cast<int>(info.crossings.size());
      info.crossings.push_back(n);
    }
  }
  for (std::size_t i = 0; i < p.boundary().size(); ++i)
    info.boundary_index[p.boundary()[i]] = static_cast<int>(i);
  return info;
}

bool is_crossing(const TangleDiagram& d, NodeId n) {
  return d.node(n).kind != NodeKind::Boundary;
}

// -----------------------------------------------------------------------
// Claims: per host edge / free loop, which pattern edges own which parts.
// -----------------------------------------------------------------------

struct EdgeClaims {
  EdgeId prefix_edge = kNoEdge;  // pattern edge taking [tail .. cut]
  EdgeId suffix_edge = kNoEdge;  // pattern edge taking [cut .. head]
  bool whole = false;
  EdgeId whole_edge = kNoEdge;
  std::vector<std::pair<int, EdgeId>> interior;  // (order, pattern edge)
};

struct SiteClaims {
  std::map<EdgeId, EdgeClaims> edges;
  std::map<std::uint32_t, std::vector<std::pair<int, EdgeId>>> loops;  // loop -> (order, pattern edge)
};

// Collects and sanity-checks the claim table; returns false if the site is
// structurally inconsistent against this host.
bool collect_claims(const TangleDiagram& host, const TangleDiagram& pattern,
                    const MatchSite& site, SiteClaims& out) {
  if (site.edges.size() != pattern.edge_count()) return false;
  for (EdgeId pe = 0; pe < pattern.edge_count(); ++pe) {
    const MatchSite::EdgeImage& im = site.edges[pe];
    const Edge& e = pattern.edge(pe);
    bool from_b = pattern.node(e.from.node).kind == NodeKind::Boundary;
    bool to_b = pattern.node(e.to.node).kind == NodeKind::Boundary;
    ImageKind expected = !from_b && !to_b ? ImageKind::WholeEdge
                         : !from_b        ? ImageKind::Prefix
                         : !to_b          ? ImageKind::Suffix
                                          : ImageKind::Interior;
    if (expected == ImageKind::Interior) {
      if (im.kind != ImageKind::Interior && im.kind != ImageKind::LoopArc) return false;
    } else if (im.kind != expected) {
      return false;
    }
    if (im.kind == ImageKind::LoopArc) {
      if (static_cast<int>(im.target) >= host.free_loops()) return false;
      out.loops[im.target].push_back({im.order, pe});
      continue;
    }
    if (im.target >= host.edge_count()) return false;
    EdgeClaims& c = out.edges[im.target];
    switch (im.kind) {
      case ImageKind::WholeEdge:
        if (c.whole) return false;
        c.whole = true;
        c.whole_edge = pe;
        break;
      case ImageKind::Prefix:
        if (c.prefix_edge != kNoEdge) return false;
        c.prefix_edge = pe;
        break;
      case ImageKind::Suffix:
        if (c.suffix_edge != kNoEdge) return false;
        c.suffix_edge = pe;
        break;
      case ImageKind::Interior:
        c.interior.push_back({im.order, pe});
        break;
      case ImageKind::LoopArc:
        break;
    }
  }
  for (auto& [e, c] : out.edges) {
    if (c.whole && (c.prefix_edge != kNoEdge || c.suffix_edge != kNoEdge || !c.interior.empty()))
      return false;
    std::sort(c.interior.begin(), c.interior.end());
    for (std::size_t i = 0; i < c.interior.size(); ++i)
      if (c.interior[i].first != static_cast<int>(i)) return false;
  }
  for (auto& [l, arcs] : out.loops) {
    std::sort(arcs.begin(), arcs.end());
    for (std::size_t i = 0; i < arcs.size(); ++i)
      if (arcs[i].first != static_cast<int>(i)) return false;
  }
  return true;
}

// -----------------------------------------------------------------------
// Excision: everything of the host that survives, as directed segments
// whose loose ends are numbered splice points (pattern boundary indices).
// -----------------------------------------------------------------------

struct SegEnd {
  bool is_splice = false;
  NodeId node = kNoNode;  // host node id (anchor) ...
  int slot = 0;
  int splice = -1;        // ... or pattern boundary index
};

struct Segment {
  SegEnd start, end;
};

struct Excision {
  std::vector<char> matched_node;  // host node excised?
  std::vector<Segment> segments;   // deterministic order
  int consumed_loops = 0;
  bool ok = false;
};

SegEnd anchor_end(const Edge& e, bool head) {
  const EdgeEnd& ee = head ? e.to : e.from;
  return SegEnd{false, ee.node, ee.slot, -1};
}

SegEnd splice_end(int idx) { return SegEnd{true, kNoNode, 0, idx}; }

// Boundary index of the boundary endpoint of pattern edge `pe`; `head` says
// which end. Returns -1 if that end is not a boundary point.
int boundary_end_index(const PatternInfo& pi, EdgeId pe, bool head) {
  const Edge& e = pi.p->edge(pe);
  NodeId n = head ? e.to.node : e.from.node;
  return pi.boundary_index[n];
}

Excision excise(const TangleDiagram& host, const PatternInfo& pi, const MatchSite& site) {
  Excision out;
  SiteClaims claims;
  if (!collect_claims(host, *pi.p, site, claims)) return out;

  out.matched_node.assign(host.node_count(), 0);
  if (site.crossings.size() != pi.crossings.size()) return out;
  for (const auto& ci : site.crossings) {
    if (ci.host >= host.node_count() || !is_crossing(host, ci.host)) return out;
    if (out.matched_node[ci.host]) return out;  // injectivity
    out.matched_node[ci.host] = 1;
  }

  // Whole host edges that survive untouched.
  for (EdgeId e = 0; e < host.edge_count(); ++e) {
    auto it = claims.edges.find(e);
    if (it != claims.edges.end()) continue;
    const Edge& he = host.edge(e);
    if (out.matched_node[he.from.node] || out.matched_node[he.to.node]) return out;
    out.segments.push_back({anchor_end(he, false), anchor_end(he, true)});
  }

  // Cut host edges: build the cut sequence and keep the outside pieces.
  for (auto& [e, c] : claims.edges) {
    const Edge& he = host.edge(e);
    if (c.whole) {
      // Fully excised; both endpoints must be matched crossings.
      if (!out.matched_node[he.from.node] || !out.matched_node[he.to.node]) return out;
      continue;
    }
    // Cut list in order along the edge: prefix cut, interior pairs, suffix.
    std::vector<std::pair<int, bool>> cuts;  // (splice index, strand exits here)
    if (c.prefix_edge != kNoEdge) {
      if (!out.matched_node[he.from.node]) return out;
      cuts.push_back({boundary_end_index(pi, c.prefix_edge, true), true});
    } else if (out.matched_node[he.from.node]) {
      return out;  // dart at a matched crossing must be claimed
    }
    for (auto& [order, pe] : c.interior) {
      cuts.push_back({boundary_end_index(pi, pe, false), false});  // strand enters
      cuts.push_back({boundary_end_index(pi, pe, true), true});    // strand exits
    }
    if (c.suffix_edge != kNoEdge) {
      if (!out.matched_node[he.to.node]) return out;
      cuts.push_back({boundary_end_index(pi, c.suffix_edge, false), false});
    } else if (out.matched_node[he.to.node]) {
      return out;
    }
    // Pieces: cuts.size()+1 of them; inside pieces are dropped.
    int t = static_cast<int>(cuts.size());
    for (int piece = 0; piece <= t; ++piece) {
      bool inside;
      if (piece == 0)
        inside = c.prefix_edge != kNoEdge;
      else if (piece == t)
        inside = c.suffix_edge != kNoEdge;
      else
        inside = !cuts[piece - 1].second;  // after an entry cut we are inside
      if (inside) continue;
      SegEnd s = piece == 0 ? anchor_end(he, false) : splice_end(cuts[piece - 1].first);
      SegEnd en = piece == t ? anchor_end(he, true) : splice_end(cuts[piece].first);
      out.segments.push_back({s, en});
    }
  }

  // Cut free loops: pieces run from each arc's exit to the next arc's entry.
  for (auto& [loop, arcs] : claims.loops) {
    int m = static_cast<int>(arcs.size());
    for (int i = 0; i < m; ++i) {
      EdgeId pe_this = arcs[i].second;
      EdgeId pe_next = arcs[(i + 1) % m].second;
      out.segments.push_back({splice_end(boundary_end_index(pi, pe_this, true)),
                              splice_end(boundary_end_index(pi, pe_next, false))});
    }
    ++out.consumed_loops;
  }

  // Verify exactly the pattern-boundary splice set got produced (each index
  // appears once as a segment start or end among splice ends).
  out.ok = true;
  return out;
}

}  // namespace

namespace detail {

TangleDiagram splice(const TangleDiagram& host, const TangleDiagram& pattern,
                     const TangleDiagram& replacement, const MatchSite& site) {
  PatternInfo pi = pattern_info(pattern);
  Excision ex = excise(host, pi, site);
  if (!ex.ok) throw StaleSiteError("site does not match the host");

  std::size_t k = pattern.boundary().size();
  if (replacement.boundary().size() != k)
    throw StaleSiteError("replacement boundary does not fit the pattern's");

  // Result nodes: surviving host nodes in order, then replacement crossings.
  std::vector<NodeId> host_map(host.node_count(), kNoNode);
  DiagramBuilder rb;
  for (NodeId n = 0; n < host.node_count(); ++n) {
    if (ex.matched_node[n]) continue;
    const Node& nd = host.node(n);
    switch (nd.kind) {
      case NodeKind::Classical: host_map[n] = rb.add_classical(nd.over); break;
      case NodeKind::Virtual: host_map[n] = rb.add_virtual(); break;
      case NodeKind::Boundary: host_map[n] = rb.add_boundary(); break;
    }
  }
  std::vector<NodeId> repl_map(replacement.node_count(), kNoNode);
  for (NodeId n = 0; n < replacement.node_count(); ++n) {
    const Node& nd = replacement.node(n);
    if (nd.kind == NodeKind::Boundary) continue;
    repl_map[n] = nd.kind == NodeKind::Classical ? rb.add_classical(nd.over) : rb.add_virtual();
  }

  // All segments: host leftovers (already anchored in host ids) plus the
  // replacement's edges, whose boundary endpoints become splice ends.
  struct RSeg {
    SegEnd start, end;  // anchors carry RESULT node ids here
  };
  std::vector<RSeg> segs;
  auto map_host_end = [&](const SegEnd& e) {
    if (e.is_splice) return e;
    SegEnd r = e;
    r.node = host_map[e.node];
    if (r.node == kNoNode) throw StaleSiteError("segment anchored at an excised node");
    return r;
  };
  for (const Segment& s : ex.segments) segs.push_back({map_host_end(s.start), map_host_end(s.end)});

  std::vector<int> repl_boundary_index(replacement.node_count(), -1);
  for (std::size_t i = 0; i < replacement.boundary().size(); ++i)
    repl_boundary_index[replacement.boundary()[i]] = static_cast<int>(i);
  for (EdgeId e = 0; e < replacement.edge_count(); ++e) {
    const Edge& re = replacement.edge(e);
    SegEnd s, en;
    if (repl_boundary_index[re.from.node] >= 0)
      s = splice_end(repl_boundary_index[re.from.node]);
    else
      s = SegEnd{false, repl_map[re.from.node], re.from.slot, -1};
    if (repl_boundary_index[re.to.node] >= 0)
      en = splice_end(repl_boundary_index[re.to.node]);
    else
      en = SegEnd{false, repl_map[re.to.node], re.to.slot, -1};
    segs.push_back({s, en});
  }

  // Stitch chains at splice points.
  std::vector<int> starts_at(k, -1), ends_at(k, -1);
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (segs[i].start.is_splice) {
      int j = segs[i].start.splice;
      if (j < 0 || j >= static_cast<int>(k) || starts_at[j] != -1)
        throw StaleSiteError("bad splice start");
      starts_at[j] = static_cast<int>(i);
    }
    if (segs[i].end.is_splice) {
      int j = segs[i].end.splice;
      if (j < 0 || j >= static_cast<int>(k) || ends_at[j] != -1)
        throw StaleSiteError("bad splice end");
      ends_at[j] = static_cast<int>(i);
    }
  }
  for (std::size_t j = 0; j < k; ++j)
    if (starts_at[j] == -1 || ends_at[j] == -1)
      throw StaleSiteError("splice point " + std::to_string(j) + " unmatched");

  std::vector<char> used(segs.size(), 0);
  int new_loops = 0;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (used[i] || segs[i].start.is_splice) continue;
    // Anchored chain.
    std::size_t cur = i;
    used[cur] = 1;
    while (segs[cur].end.is_splice) {
      cur = starts_at[segs[cur].end.splice];
      if (used[cur]) throw StaleSiteError("splice chain loops through a used segment");
      used[cur] = 1;
    }
    rb.connect(segs[i].start.node, segs[i].start.slot, segs[cur].end.node, segs[cur].end.slot);
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    if (used[i]) continue;
    // Closed chain: a fresh crossingless loop.
    std::size_t cur = i;
    while (!used[cur]) {
      used[cur] = 1;
      cur = starts_at[segs[cur].end.splice];
    }
    ++new_loops;
  }

  std::vector<NodeId> boundary;
  boundary.reserve(host.boundary().size());
  for (NodeId b : host.boundary()) boundary.push_back(host_map[b]);
  rb.set_boundary(std::move(boundary));
  rb.add_free_loops(host.free_loops() - ex.consumed_loops + new_loops);
  return std::move(rb).build_unchecked();
}

bool site_region_is_disk(const TangleDiagram& host, const TangleDiagram& pattern,
                         const MatchSite& site) {
  PatternInfo pi = pattern_info(pattern);
  Excision ex = excise(host, pi, site);
  if (!ex.ok) return false;
  std::size_t k = pattern.boundary().size();

  // Small rotation map: surviving host nodes + the contracted region vertex.
  // Vertex ids: host nodes (excised ones never referenced) then omega, then
  // nothing for loops (consumed loops live entirely in segments).
  std::size_t omega = host.node_count();
  std::size_t nverts = omega + 1;

  // Darts: two per segment, plus two per rim edge of the host boundary.
  std::size_t nsegs = ex.segments.size();
  std::size_t nrim = host.boundary().size();
  std::size_t ndarts = 2 * (nsegs + nrim);
  std::vector<std::size_t> dart_vertex(ndarts);
  auto seg_tail = [&](std::size_t s) { return 2 * s; };
  auto seg_head = [&](std::size_t s) { return 2 * s + 1; };
  auto rim_tail = [&](std::size_t r) { return 2 * nsegs + 2 * r; };
  auto rim_head = [&](std::size_t r) { return 2 * nsegs + 2 * r + 1; };

  // Rotation tables: host crossings have 4 ordered slots; host boundary
  // points have (rim-next, strand, rim-prev); omega has k slots in pattern
  // boundary order.
  std::vector<std::vector<std::size_t>> rot(nverts);
  std::vector<std::vector<std::size_t>> crossing_slots(host.node_count());
  std::vector<std::size_t> omega_slots(k, static_cast<std::size_t>(-1));
  std::vector<std::size_t> strand_dart(host.node_count(), static_cast<std::size_t>(-1));

  for (NodeId n = 0; n < host.node_count(); ++n)
    if (!ex.matched_node[n] && is_crossing(host, n))
      crossing_slots[n].assign(4, static_cast<std::size_t>(-1));

  auto place = [&](const SegEnd& e, std::size_t dart) {
    if (e.is_splice) {
      dart_vertex[dart] = omega;
      omega_slots[e.splice] = dart;
    } else {
      dart_vertex[dart] = e.node;
      if (is_crossing(host, e.node))
        crossing_slots[e.node][e.slot] = dart;
      else
        strand_dart[e.node] = dart;
    }
  };
  for (std::size_t s = 0; s < nsegs; ++s) {
    place(ex.segments[s].start, seg_tail(s));
    place(ex.segments[s].end, seg_head(s));
  }

  for (NodeId n = 0; n < host.node_count(); ++n) {
    if (ex.matched_node[n] || !is_crossing(host, n)) continue;
    for (int s = 0; s < 4; ++s) {
      if (crossing_slots[n][s] == static_cast<std::size_t>(-1)) return false;
      rot[n].push_back(crossing_slots[n][s]);
    }
  }
  for (std::size_t i = 0; i < nrim; ++i) {
    NodeId b = host.boundary()[i];
    std::size_t prev = (i + nrim - 1) % nrim;
    dart_vertex[rim_tail(i)] = b;
    dart_vertex[rim_head(i)] = host.boundary()[(i + 1) % nrim];
    if (strand_dart[b] == static_cast<std::size_t>(-1)) return false;
    rot[b] = {rim_tail(i), strand_dart[b], rim_head(prev)};
  }
  for (std::size_t j = 0; j < k; ++j) {
    if (omega_slots[j] == static_cast<std::size_t>(-1)) return false;
    rot[omega].push_back(omega_slots[j]);
  }

  // sigma: next dart around the vertex; alpha: the segment/rim mate.
  std::vector<std::size_t> next_at(ndarts, static_cast<std::size_t>(-1));
  for (const auto& cycle : rot) {
    for (std::size_t i = 0; i < cycle.size(); ++i)
      next_at[cycle[i]] = cycle[(i + 1) % cycle.size()];
  }
  auto alpha = [&](std::size_t d) { return d ^ 1; };

  // Components over vertices with darts.
  std::vector<int> comp(nverts, -1);
  int ncomp = 0;
  for (std::size_t v = 0; v < nverts; ++v) {
    if (rot[v].empty() || comp[v] != -1) continue;
    std::vector<std::size_t> stack{v};
    comp[v] = ncomp;
    while (!stack.empty()) {
      std::size_t cur = stack.back();
      stack.pop_back();
      for (std::size_t d : rot[cur]) {
        std::size_t w = dart_vertex[alpha(d)];
        if (comp[w] == -1) {
          comp[w] = ncomp;
          stack.push_back(w);
        }
      }
    }
    ++ncomp;
  }

  std::vector<int> verts(ncomp, 0), edges(ncomp, 0), faces(ncomp, 0);
  for (std::size_t v = 0; v < nverts; ++v)
    if (!rot[v].empty()) ++verts[comp[v]];
  for (std::size_t d = 0; d < ndarts; d += 2) {
    if (next_at[d] == static_cast<std::size_t>(-1)) return false;
    ++edges[comp[dart_vertex[d]]];
  }
  std::vector<char> seen(ndarts, 0);
  for (std::size_t d0 = 0; d0 < ndarts; ++d0) {
    if (seen[d0]) continue;
    std::size_t d = d0;
    do {
      seen[d] = 1;
      d = next_at[alpha(d)];
    } while (d != d0);
    ++faces[comp[dart_vertex[d0]]];
  }
  for (int c = 0; c < ncomp; ++c)
    if (verts[c] - edges[c] + faces[c] != 2) return false;
  return true;
}

}  // namespace detail

namespace {

// -----------------------------------------------------------------------
// Matching.
// -----------------------------------------------------------------------

struct Matcher {
  const TangleDiagram* host;
  const TangleDiagram* pattern;
  const TangleDiagram* replacement;
  PatternInfo pi;
  std::vector<NodeId> host_crossings;
  std::vector<Match> out;

  MatchSite site;
  std::vector<char> host_used;  // host crossing node -> taken

  void run() {
    site.crossings.assign(pi.crossings.size(), {});
    site.edges.assign(pattern->edge_count(), {});
    host_used.assign(host->node_count(), 0);
    assign_crossing(0);
    std::sort(out.begin(), out.end(),
              [](const Match& a, const Match& b) { return a.site < b.site; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Match& a, const Match& b) { return a.site == b.site; }),
              out.end());
  }

  // Kind/over compatibility of pattern crossing pc against host crossing hc
  // with slot offset `off`.
  bool crossing_compatible(NodeId pc, NodeId hc, int off) const {
    const Node& pn = pattern->node(pc);
    const Node& hn = host->node(hc);
    if (pn.kind != hn.kind) return false;
    if (pn.kind == NodeKind::Classical && rotated(pn.over, off) != hn.over) return false;
    return true;
  }

  // Checks pattern edges between crossing index k and already-assigned
  // crossings (plus self-loops at k).
  bool internal_edges_ok(std::size_t k) const {
    for (EdgeId pe = 0; pe < pattern->edge_count(); ++pe) {
      const Edge& e = pattern->edge(pe);
      int fi = pi.crossing_index[e.from.node];
      int ti = pi.crossing_index[e.to.node];
      if (fi < 0 || ti < 0) continue;  // not an internal edge
      if (static_cast<std::size_t>(std::max(fi, ti)) != k) continue;
      const auto& fim = site.crossings[fi];
      const auto& tim = site.crossings[ti];
      int hf = (e.from.slot + fim.offset) % 4;
      int ht = (e.to.slot + tim.offset) % 4;
      const SlotUse& uf = host->slot_use(fim.host, hf);
      const SlotUse& ut = host->slot_use(tim.host, ht);
      if (uf.edge != ut.edge) return false;
      if (uf.head || !ut.head) return false;  // direction must match
      const Edge& he = host->edge(uf.edge);
      if (he.from.node != fim.host || he.from.slot != hf) return false;
      if (he.to.node != tim.host || he.to.slot != ht) return false;
    }
    return true;
  }

  void assign_crossing(std::size_t k) {
    if (k == pi.crossings.size()) {
      assign_internal_and_anchored();
      return;
    }
    NodeId pc = pi.crossings[k];
    // A pattern edge linking k to an earlier crossing forces the image.
    std::optional<MatchSite::CrossingImage> forced;
    bool impossible = false;
    for (EdgeId pe = 0; pe < pattern->edge_count() && !impossible; ++pe) {
      const Edge& e = pattern->edge(pe);
      int fi = pi.crossing_index[e.from.node];
      int ti = pi.crossing_index[e.to.node];
      if (fi < 0 || ti < 0) continue;
      NodeId other;
      int my_slot, other_slot_assigned;
      bool i_am_to;
      if (static_cast<std::size_t>(fi) == k && ti >= 0 && static_cast<std::size_t>(ti) < k) {
        other = pi.crossings[ti];
        my_slot = e.from.slot;
        other_slot_assigned = e.to.slot;
        i_am_to = false;
      } else if (static_cast<std::size_t>(ti) == k && fi >= 0 && static_cast<std::size_t>(fi) < k) {
        other = pi.crossings[fi];
        my_slot = e.to.slot;
        other_slot_assigned = e.from.slot;
        i_am_to = true;
      } else {
        continue;
      }
      const auto& oim = site.crossings[pi.crossing_index[other]];
      int oslot = (other_slot_assigned + oim.offset) % 4;
      const SlotUse& u = host->slot_use(oim.host, oslot);
      const Edge& he = host->edge(u.edge);
      // The host edge at the assigned crossing's matching slot proposes a
      // (host crossing, offset) image for k via its far end.
      EdgeEnd far = i_am_to ? he.to : he.from;
      if (!is_crossing(*host, far.node)) {
        impossible = true;
        break;
      }
      MatchSite::CrossingImage cand{far.node, (far.slot - my_slot + 4) % 4};
      if (forced && !(forced->host == cand.host && forced->offset == cand.offset)) {
        impossible = true;
        break;
      }
      forced = cand;
    }
    if (impossible) return;

    auto try_candidate = [&](MatchSite::CrossingImage cand) {
      if (host_used[cand.host]) return;
      if (!crossing_compatible(pc, cand.host, cand.offset)) return;
      site.crossings[k] = cand;
      if (!internal_edges_ok(k)) return;
      host_used[cand.host] = 1;
      assign_crossing(k + 1);
      host_used[cand.host] = 0;
    };

    if (forced) {
      try_candidate(*forced);
      return;
    }
    for (NodeId hc : host_crossings)
      for (int off = 0; off < 4; ++off) try_candidate({hc, off});
  }

  std::vector<EdgeId> arcs;  // pattern through-arc edges, id order

  // Same-component host edges can host two through-arcs of one disk only if
  // a common face provides the corridor between them; different components
  // can always be nested. Sound prefilter; the splice validation decides.
  bool face_data_ready = false;
  std::vector<std::array<int, 2>> efaces;
  std::vector<int> ecomp;

  bool arcs_compatible(const MatchSite::EdgeImage& a, const MatchSite::EdgeImage& b) {
    if (a.kind != ImageKind::Interior || b.kind != ImageKind::Interior) return true;
    if (a.target == b.target) return true;
    if (!face_data_ready) {
      efaces = detail::edge_faces(*host);
      ecomp = detail::edge_components(*host);
      face_data_ready = true;
    }
    if (ecomp[a.target] != ecomp[b.target]) return true;
    const auto& fa = efaces[a.target];
    const auto& fb = efaces[b.target];
    return fa[0] == fb[0] || fa[0] == fb[1] || fa[1] == fb[0] || fa[1] == fb[1];
  }

  void assign_internal_and_anchored() {
    // Fill WholeEdge / Prefix / Suffix images; collect through-arcs.
    arcs.clear();
    for (EdgeId pe = 0; pe < pattern->edge_count(); ++pe) {
      const Edge& e = pattern->edge(pe);
      int fi = pi.crossing_index[e.from.node];
      int ti = pi.crossing_index[e.to.node];
      if (fi >= 0 && ti >= 0) {
        const auto& fim = site.crossings[fi];
        int hf = (e.from.slot + fim.offset) % 4;
        site.edges[pe] = {ImageKind::WholeEdge, host->slot_use(fim.host, hf).edge, 0};
      } else if (fi >= 0) {
        const auto& fim = site.crossings[fi];
        int hf = (e.from.slot + fim.offset) % 4;
        const SlotUse& u = host->slot_use(fim.host, hf);
        if (u.head) return;  // pattern edge leaves the crossing; host must too
        site.edges[pe] = {ImageKind::Prefix, u.edge, 0};
      } else if (ti >= 0) {
        const auto& tim = site.crossings[ti];
        int ht = (e.to.slot + tim.offset) % 4;
        const SlotUse& u = host->slot_use(tim.host, ht);
        if (!u.head) return;
        site.edges[pe] = {ImageKind::Suffix, u.edge, 0};
      } else {
        arcs.push_back(pe);
      }
    }
    assign_arc(0, 0);
  }

  void assign_arc(std::size_t idx, int loops_used) {
    if (idx == arcs.size()) {
      enumerate_orders();
      return;
    }
    EdgeId pe = arcs[idx];
    for (EdgeId he = 0; he < host->edge_count(); ++he) {
      site.edges[pe] = {ImageKind::Interior, he, 0};
      bool ok = true;
      for (std::size_t j = 0; j < idx && ok; ++j)
        ok = arcs_compatible(site.edges[arcs[j]], site.edges[pe]);
      if (ok) assign_arc(idx + 1, loops_used);
    }
    // Loops are interchangeable: reuse already-opened ones or open the next.
    int avail = std::min(loops_used + 1, host->free_loops());
    for (int l = 0; l < avail; ++l) {
      site.edges[pe] = {ImageKind::LoopArc, static_cast<std::uint32_t>(l), 0};
      assign_arc(idx + 1, std::max(loops_used, l + 1));
    }
  }

  // All rank assignments for interior arcs sharing a host edge (m! each) and
  // for arcs sharing a loop ((m-1)! with the first arc pinned at rank 0).
  void enumerate_orders() {
    std::map<std::uint32_t, std::vector<EdgeId>> edge_groups;
    std::map<std::uint32_t, std::vector<EdgeId>> loop_groups;
    for (EdgeId pe : arcs) {
      const auto& im = site.edges[pe];
      (im.kind == ImageKind::Interior ? edge_groups[im.target] : loop_groups[im.target])
          .push_back(pe);
    }
    std::vector<std::pair<std::vector<EdgeId>*, bool>> groups;  // (group, pin_first)
    for (auto& [t, g] : edge_groups) groups.push_back({&g, false});
    for (auto& [t, g] : loop_groups) groups.push_back({&g, true});
    permute_group(groups, 0);
  }

  void permute_group(std::vector<std::pair<std::vector<EdgeId>*, bool>>& groups,
                     std::size_t gi) {
    if (gi == groups.size()) {
      finalize();
      return;
    }
    auto& [members, pin_first] = groups[gi];
    int m = static_cast<int>(members->size());
    std::vector<int> ranks(m);
    for (int i = 0; i < m; ++i) ranks[i] = i;
    do {
      if (pin_first && ranks[0] != 0) continue;
      for (int i = 0; i < m; ++i) site.edges[(*members)[i]].order = ranks[i];
      permute_group(groups, gi + 1);
    } while (std::next_permutation(ranks.begin(), ranks.end()));
  }

  void finalize() {
    // Disk condition: the tentative rewrite must stay planar; validation of
    // the spliced result is exactly that check.
    try {
      TangleDiagram result = detail::splice(*host, *pattern, *replacement, site);
      if (!validate(result).ok()) return;
      out.push_back({site, std::move(result)});
    } catch (const StaleSiteError&) {
    }
  }
};

std::vector<Match> run_matcher(const TangleDiagram& host, const MoveSchema& schema,
                               Direction dir) {
  Matcher m;
  m.host = &host;
  m.pattern = dir == Direction::Forward ? &schema.lhs : &schema.rhs;
  m.replacement = dir == Direction::Forward ? &schema.rhs : &schema.lhs;
  m.pi = pattern_info(*m.pattern);
  for (NodeId n = 0; n < host.node_count(); ++n)
    if (is_crossing(host, n)) m.host_crossings.push_back(n);
  m.run();
  return m.out;
}

}  // namespace

std::vector<MatchSite> find_matches(const TangleDiagram& host, const MoveSchema& schema,
                                    Direction dir) {
  std::vector<Match> matches = run_matcher(host, schema, dir);
  std::vector<MatchSite> out;
  out.reserve(matches.size());
  for (Match& m : matches) out.push_back(std::move(m.site));
  return out;
}

std::vector<Match> find_matches_with_results(const TangleDiagram& host, const MoveSchema& schema,
                                             Direction dir) {
  return run_matcher(host, schema, dir);
}

TangleDiagram apply_move(const TangleDiagram& host, const MoveSchema& schema,
                         const MatchSite& site, Direction dir) {
  const TangleDiagram& pattern = dir == Direction::Forward ? schema.lhs : schema.rhs;
  const TangleDiagram& replacement = dir == Direction::Forward ? schema.rhs : schema.lhs;
  TangleDiagram result = detail::splice(host, pattern, replacement, site);
  ValidationReport report = validate(result);
  if (!report.ok()) {
    std::string msg = "rewrite produced an invalid diagram:";
    for (const Violation& v : report.violations) msg += " [" + v.rule + "] " + v.detail;
    throw StaleSiteError(msg);
  }
  return result;
}

}  // namespace vkm
