#include "vkm/invariants.hpp"

#include <algorithm>

#include "vkm/canonical.hpp"

namespace vkm {

namespace {

void require_closed_knot(const TangleDiagram& d) {
  if (!d.closed()) throw NotClosedError("diagram has boundary points");
  // One strand component: a single traversal covers every edge, and no
  // crossingless circles ride along (unless the diagram is only the circle).
  if (d.node_count() == 0) {
    if (d.free_loops() > 1) throw MultiComponentError("multiple crossingless circles");
    return;
  }
  if (d.free_loops() > 0) throw MultiComponentError("extra crossingless circle");
  std::size_t visited = 0;
  EdgeId start = 0;
  EdgeEnd at = d.edge(start).to;
  EdgeId cur = start;
  do {
    ++visited;
    int out_slot = (at.slot + 2) % 4;
    const SlotUse& u = d.slot_use(at.node, out_slot);
    cur = u.edge;
    at = d.edge(cur).to;
  } while (cur != start);
  if (visited != d.edge_count()) throw MultiComponentError("more than one strand");
}

}  // namespace

GaussCode extract_gauss_code(const TangleDiagram& d) {
  ValidationReport vr = validate(d);
  if (!vr.ok()) throw InvalidDiagramError("gauss code of invalid diagram");
  require_closed_knot(d);
  GaussCode code;
  if (d.node_count() == 0) return code;

  std::vector<int> label(d.node_count(), 0);
  int next_label = 1;
  EdgeId start = 0;
  EdgeEnd at = d.edge(start).to;
  EdgeId cur = start;
  do {
    NodeId n = at.node;
    if (d.node(n).kind == NodeKind::Classical) {
      if (!label[n]) label[n] = next_label++;
      bool over = (d.node(n).over == OverDiagonal::Slots02) == (at.slot % 2 == 0);
      code.push_back({label[n], over, crossing_sign(d, n)});
    }
    int out_slot = (at.slot + 2) % 4;
    cur = d.slot_use(n, out_slot).edge;
    at = d.edge(cur).to;
  } while (cur != start);
  return code;
}

int odd_writhe(const TangleDiagram& d) {
  GaussCode code = extract_gauss_code(d);
  int total = 0;
  for (std::size_t i = 0; i < code.size(); ++i) {
    for (std::size_t j = i + 1; j < code.size(); ++j) {
      if (code[j].label != code[i].label) continue;
      if ((j - i - 1) % 2 == 1) total += code[i].sign;
      break;
    }
  }
  return total;
}

Invariant odd_writhe_invariant() {
  return {"odd-writhe", [](const TangleDiagram& d) { return (long long)odd_writhe(d); }};
}

Invariant crossing_count_invariant() {
  return {"crossing-count",
          [](const TangleDiagram& d) { return (long long)d.crossing_count(); }};
}

namespace {

// xorshift with a splitmix-style seeding; sampling by rejection keeps the
// stream identical on every platform.
struct Rng {
  std::uint64_t state;
  explicit Rng(std::uint64_t seed)
      : state(seed * 6364136223846793005ull + 1442695040888963407ull) {
    if (state == 0) state = 0x9e3779b97f4a7c15ull;
  }
  std::uint64_t next() {
    state ^= state << 13;
    state ^= state >> 7;
    state ^= state << 17;
    return state;
  }
  std::uint64_t below(std::uint64_t n) {
    std::uint64_t limit = ~0ull - (~0ull % n);
    std::uint64_t v;
    do {
      v = next();
    } while (v >= limit);
    return v % n;
  }
};

}  // namespace

TangleDiagram random_diagram(const Catalog& catalog, std::uint64_t seed, int steps) {
  Rng rng(seed);
  CanonicalForm cur = canonicalize([] {
    DiagramBuilder b;
    b.add_free_loops(1);
    return std::move(b).build();
  }());

  struct Choice {
    MoveId move;
    Direction dir;
    int site;
    const TangleDiagram* result;
  };

  for (int step = 0; step < steps; ++step) {
    std::vector<std::vector<Match>> buckets;
    std::vector<Choice> grow, shrink;
    buckets.reserve(catalog.all().size() * 2);
    for (const MoveSchema& schema : catalog.all()) {
      for (Direction dir : {Direction::Forward, Direction::Backward}) {
        buckets.push_back(find_matches_with_results(cur.diagram, schema, dir));
        auto& matches = buckets.back();
        for (std::size_t i = 0; i < matches.size(); ++i) {
          Choice c{schema.id, dir, static_cast<int>(i), &matches[i].result};
          if (matches[i].result.crossing_count() > cur.diagram.crossing_count())
            grow.push_back(c);
          else
            shrink.push_back(c);
        }
      }
    }
    const std::vector<Choice>* pool;
    if (grow.empty())
      pool = &shrink;
    else if (shrink.empty())
      pool = &grow;
    else
      pool = rng.below(4) < 3 ? &grow : &shrink;
    const Choice& pick = (*pool)[rng.below(pool->size())];
    cur = canonicalize(*pick.result);
  }
  return cur.diagram;
}

AuditReport audit_invariance(const Catalog& catalog, const Invariant& inv,
                             const std::set<MoveId>& moves,
                             const std::vector<TangleDiagram>& corpus) {
  AuditReport report;
  report.invariant = inv.name;
  for (std::size_t di = 0; di < corpus.size(); ++di) {
    const TangleDiagram& d = corpus[di];
    long long before = inv.evaluate(d);
    for (MoveId id : moves) {
      const MoveSchema& schema = catalog.schema(id);
      for (Direction dir : {Direction::Forward, Direction::Backward}) {
        auto matches = find_matches_with_results(d, schema, dir);
        for (std::size_t si = 0; si < matches.size(); ++si) {
          long long after = inv.evaluate(matches[si].result);
          bool equal = after == before;
          ++report.checks;
          if (!equal) {
            ++report.violations;
            report.rows.push_back(
                {static_cast<int>(di), id, dir, static_cast<int>(si), before, after, false});
          } else {
            report.rows.push_back(
                {static_cast<int>(di), id, dir, static_cast<int>(si), before, after, true});
          }
        }
      }
    }
  }
  return report;
}

}  // namespace vkm
