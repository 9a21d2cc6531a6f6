#include "vkm/moves.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include "vkm/canonical.hpp"

#ifndef VKM_DEFAULT_MOVES_MAP
#define VKM_DEFAULT_MOVES_MAP "moves.map"
#endif

namespace vkm {

int variant_count(MoveFamily f) {
  switch (f) {
    case MoveFamily::C1: return 4;
    case MoveFamily::C2: return 4;
    case MoveFamily::C3: return 8;
    case MoveFamily::V1: return 2;
    case MoveFamily::V2: return 3;
    case MoveFamily::V3: return 4;
    case MoveFamily::V4: return 8;
  }
  return 0;
}

std::string to_string(MoveFamily f) {
  switch (f) {
    case MoveFamily::C1: return "C1";
    case MoveFamily::C2: return "C2";
    case MoveFamily::C3: return "C3";
    case MoveFamily::V1: return "V1";
    case MoveFamily::V2: return "V2";
    case MoveFamily::V3: return "V3";
    case MoveFamily::V4: return "V4";
  }
  return "?";
}

std::optional<MoveFamily> parse_family(const std::string& s) {
  if (s == "C1") return MoveFamily::C1;
  if (s == "C2") return MoveFamily::C2;
  if (s == "C3") return MoveFamily::C3;
  if (s == "V1") return MoveFamily::V1;
  if (s == "V2") return MoveFamily::V2;
  if (s == "V3") return MoveFamily::V3;
  if (s == "V4") return MoveFamily::V4;
  return std::nullopt;
}

std::string to_string(MoveId id) { return to_string(id.family) + std::string(1, id.letter); }

std::optional<MoveId> parse_move_id(const std::string& s) {
  if (s.size() != 3) return std::nullopt;
  auto fam = parse_family(s.substr(0, 2));
  if (!fam) return std::nullopt;
  char letter = s[2];
  if (letter < 'a' || letter >= 'a' + variant_count(*fam)) return std::nullopt;
  return MoveId{*fam, letter};
}

namespace {

// ---------------------------------------------------------------------------
// Seed construction. Each family's unoriented seed is drawn once; strand
// orientations (and the family's over/under choice) are parameters. Strand
// reversal flips every edge the strand owns, on both sides at once.
// ---------------------------------------------------------------------------

struct ProtoNode {
  NodeKind kind;
  OverDiagonal over = OverDiagonal::Slots02;
};

struct ProtoEdge {
  int from_node, from_slot, to_node, to_slot;
  int strand;
};

struct ProtoSide {
  std::vector<ProtoNode> nodes;
  std::vector<ProtoEdge> edges;
  std::vector<int> boundary;

  int add(NodeKind kind, OverDiagonal over = OverDiagonal::Slots02) {
    nodes.push_back({kind, over});
    return static_cast<int>(nodes.size() - 1);
  }
  void edge(int fn, int fs, int tn, int ts, int strand) {
    edges.push_back({fn, fs, tn, ts, strand});
  }

  TangleDiagram build(unsigned reversed_strands) const {
    DiagramBuilder b;
    for (const ProtoNode& n : nodes) {
      switch (n.kind) {
        case NodeKind::Classical: b.add_classical(n.over); break;
        case NodeKind::Virtual: b.add_virtual(); break;
        case NodeKind::Boundary: b.add_boundary(); break;
      }
    }
    for (const ProtoEdge& e : edges) {
      bool rev = (reversed_strands >> e.strand) & 1u;
      if (rev)
        b.connect(e.to_node, e.to_slot, e.from_node, e.from_slot);
      else
        b.connect(e.from_node, e.from_slot, e.to_node, e.to_slot);
    }
    std::vector<NodeId> bd(boundary.begin(), boundary.end());
    b.set_boundary(std::move(bd));
    return std::move(b).build();
  }
};

struct RawSchema {
  TangleDiagram lhs, rhs;
};

// V1/C1: plain arc <-> kink. Chirality A loops through slots (2 -> 1),
// chirality B through (2 -> 3); `over` only applies to the classical kink.
RawSchema kink_schema(bool classical, int chirality, OverDiagonal over, unsigned rev) {
  ProtoSide lhs;
  int a0 = lhs.add(NodeKind::Boundary);
  int a1 = lhs.add(NodeKind::Boundary);
  lhs.edge(a0, 0, a1, 0, 0);
  lhs.boundary = {a0, a1};

  ProtoSide rhs;
  int b0 = rhs.add(NodeKind::Boundary);
  int b1 = rhs.add(NodeKind::Boundary);
  int v = rhs.add(classical ? NodeKind::Classical : NodeKind::Virtual, over);
  rhs.edge(b0, 0, v, 0, 0);
  if (chirality == 0) {
    rhs.edge(v, 2, v, 1, 0);
    rhs.edge(v, 3, b1, 0, 0);
  } else {
    rhs.edge(v, 2, v, 3, 0);
    rhs.edge(v, 1, b1, 0, 0);
  }
  rhs.boundary = {b0, b1};
  return {lhs.build(rev), rhs.build(rev)};
}

// V2/C2: two side-by-side arcs <-> bigon with two crossings. Boundary reads
// counterclockwise (b0 SW, b1 SE, b2 NE, b3 NW); strand 0 runs b0->b3,
// strand 1 runs b1->b2. `over_left` picks the strand that stays on top at
// both classical crossings.
RawSchema bigon_schema(bool classical, bool over_left, unsigned rev) {
  ProtoSide lhs;
  int a0 = lhs.add(NodeKind::Boundary);
  int a1 = lhs.add(NodeKind::Boundary);
  int a2 = lhs.add(NodeKind::Boundary);
  int a3 = lhs.add(NodeKind::Boundary);
  lhs.edge(a0, 0, a3, 0, 0);
  lhs.edge(a1, 0, a2, 0, 1);
  lhs.boundary = {a0, a1, a2, a3};

  ProtoSide rhs;
  int b0 = rhs.add(NodeKind::Boundary);
  int b1 = rhs.add(NodeKind::Boundary);
  int b2 = rhs.add(NodeKind::Boundary);
  int b3 = rhs.add(NodeKind::Boundary);
  // Left strand holds slots {0,2} at u and {1,3} at w.
  OverDiagonal over_u = over_left ? OverDiagonal::Slots02 : OverDiagonal::Slots13;
  OverDiagonal over_w = over_left ? OverDiagonal::Slots13 : OverDiagonal::Slots02;
  NodeKind k = classical ? NodeKind::Classical : NodeKind::Virtual;
  int u = rhs.add(k, over_u);
  int w = rhs.add(k, over_w);
  rhs.edge(b0, 0, u, 0, 0);
  rhs.edge(u, 2, w, 1, 0);
  rhs.edge(w, 3, b3, 0, 0);
  rhs.edge(b1, 0, u, 1, 1);
  rhs.edge(u, 3, w, 0, 1);
  rhs.edge(w, 2, b2, 0, 1);
  rhs.boundary = {b0, b1, b2, b3};
  return {lhs.build(rev), rhs.build(rev)};
}

// Triangle families (V3, V4, C3). Strand A runs horizontally (b0 -> b3),
// B along the SSW-NNE diagonal (b1 -> b4), C along SSE-NNW (b2 -> b5).
// The lhs keeps A below the B*C crossing, the rhs above it. `kind_of(pair)`
// decides each crossing's kind and over value, where pair identifies the
// two strands meeting there (0 = A*B, 1 = A*C, 2 = B*C); the first strand
// of the pair holds slots {0,2}.
struct TriangleSpec {
  NodeKind kind[3];
  OverDiagonal over[3];
};

RawSchema triangle_schema(const TriangleSpec& spec, unsigned rev) {
  auto add_crossing = [&](ProtoSide& side, int pair) {
    return side.add(spec.kind[pair], spec.over[pair]);
  };

  ProtoSide lhs;
  {
    int b0 = lhs.add(NodeKind::Boundary), b1 = lhs.add(NodeKind::Boundary),
        b2 = lhs.add(NodeKind::Boundary), b3 = lhs.add(NodeKind::Boundary),
        b4 = lhs.add(NodeKind::Boundary), b5 = lhs.add(NodeKind::Boundary);
    int x = add_crossing(lhs, 0);  // A*B, lower left
    int y = add_crossing(lhs, 1);  // A*C, lower right
    int z = add_crossing(lhs, 2);  // B*C, top
    lhs.edge(b0, 0, x, 2, 0);
    lhs.edge(x, 0, y, 2, 0);
    lhs.edge(y, 0, b3, 0, 0);
    lhs.edge(b1, 0, x, 3, 1);
    lhs.edge(x, 1, z, 2, 1);
    lhs.edge(z, 0, b4, 0, 1);
    lhs.edge(b2, 0, y, 3, 2);
    lhs.edge(y, 1, z, 3, 2);
    lhs.edge(z, 1, b5, 0, 2);
    lhs.boundary = {b0, b1, b2, b3, b4, b5};
  }

  ProtoSide rhs;
  {
    int b0 = rhs.add(NodeKind::Boundary), b1 = rhs.add(NodeKind::Boundary),
        b2 = rhs.add(NodeKind::Boundary), b3 = rhs.add(NodeKind::Boundary),
        b4 = rhs.add(NodeKind::Boundary), b5 = rhs.add(NodeKind::Boundary);
    int xp = add_crossing(rhs, 1);  // A*C, upper left
    int yp = add_crossing(rhs, 0);  // A*B, upper right
    int z = add_crossing(rhs, 2);   // B*C, center
    rhs.edge(b0, 0, xp, 2, 0);
    rhs.edge(xp, 0, yp, 2, 0);
    rhs.edge(yp, 0, b3, 0, 0);
    rhs.edge(b1, 0, z, 2, 1);
    rhs.edge(z, 0, yp, 3, 1);
    rhs.edge(yp, 1, b4, 0, 1);
    rhs.edge(b2, 0, z, 3, 2);
    rhs.edge(z, 1, xp, 3, 2);
    rhs.edge(xp, 1, b5, 0, 2);
    rhs.boundary = {b0, b1, b2, b3, b4, b5};
  }
  return {lhs.build(rev), rhs.build(rev)};
}

std::vector<RawSchema> raw_variants(MoveFamily family) {
  std::vector<RawSchema> out;
  switch (family) {
    case MoveFamily::V1:
      for (int chir : {0, 1})
        for (unsigned rev : {0u, 1u}) out.push_back(kink_schema(false, chir, OverDiagonal::Slots02, rev));
      break;
    case MoveFamily::C1:
      for (int chir : {0, 1})
        for (OverDiagonal over : {OverDiagonal::Slots02, OverDiagonal::Slots13})
          for (unsigned rev : {0u, 1u}) out.push_back(kink_schema(true, chir, over, rev));
      break;
    case MoveFamily::V2:
      for (unsigned rev = 0; rev < 4; ++rev) out.push_back(bigon_schema(false, true, rev));
      break;
    case MoveFamily::C2:
      for (bool over_left : {true, false})
        for (unsigned rev = 0; rev < 4; ++rev) out.push_back(bigon_schema(true, over_left, rev));
      break;
    case MoveFamily::V3: {
      TriangleSpec spec{{NodeKind::Virtual, NodeKind::Virtual, NodeKind::Virtual}, {}};
      for (unsigned rev = 0; rev < 8; ++rev) out.push_back(triangle_schema(spec, rev));
      break;
    }
    case MoveFamily::V4: {
      for (OverDiagonal z_over : {OverDiagonal::Slots02, OverDiagonal::Slots13}) {
        TriangleSpec spec{{NodeKind::Virtual, NodeKind::Virtual, NodeKind::Classical},
                          {OverDiagonal::Slots02, OverDiagonal::Slots02, z_over}};
        for (unsigned rev = 0; rev < 8; ++rev) out.push_back(triangle_schema(spec, rev));
      }
      break;
    }
    case MoveFamily::C3: {
      // Height stacks A<B<C and C<B<A: the sliding strand passes under or
      // over both, the other two keep their relative height.
      for (bool a_lowest : {true, false}) {
        OverDiagonal ab = a_lowest ? OverDiagonal::Slots13 : OverDiagonal::Slots02;
        OverDiagonal ac = a_lowest ? OverDiagonal::Slots13 : OverDiagonal::Slots02;
        OverDiagonal bc = a_lowest ? OverDiagonal::Slots13 : OverDiagonal::Slots02;
        TriangleSpec spec{{NodeKind::Classical, NodeKind::Classical, NodeKind::Classical},
                          {ab, ac, bc}};
        for (unsigned rev = 0; rev < 8; ++rev) out.push_back(triangle_schema(spec, rev));
      }
      break;
    }
  }
  return out;
}

}  // namespace

std::vector<MoveSchema> enumerate_oriented_variants(MoveFamily family) {
  std::vector<RawSchema> raw = raw_variants(family);
  std::map<std::string, MoveSchema> orbit;  // orbit key -> representative
  for (const RawSchema& r : raw) {
    CanonicalForm cl = canonicalize(r.lhs);
    CanonicalForm cr = canonicalize(r.rhs);
    int half = static_cast<int>(r.lhs.boundary().size()) / 2;
    std::string rl = canonical_code(rotate_boundary(r.lhs, half));
    std::string rr = canonical_code(rotate_boundary(r.rhs, half));
    std::string keys[4] = {cl.code + "|" + cr.code, rl + "|" + rr, cr.code + "|" + cl.code,
                           rr + "|" + rl};
    std::string orbit_key = *std::min_element(keys, keys + 4);
    MoveSchema schema;
    schema.lhs = std::move(cl.diagram);
    schema.rhs = std::move(cr.diagram);
    schema.lhs_code = std::move(cl.code);
    schema.rhs_code = std::move(cr.code);
    auto it = orbit.find(orbit_key);
    if (it == orbit.end() || schema.code_pair() < it->second.code_pair())
      orbit[orbit_key] = std::move(schema);
  }
  std::vector<MoveSchema> out;
  out.reserve(orbit.size());
  for (auto& [key, schema] : orbit) out.push_back(std::move(schema));
  std::sort(out.begin(), out.end(), [](const MoveSchema& a, const MoveSchema& b) {
    return a.lhs_code != b.lhs_code ? a.lhs_code < b.lhs_code : a.rhs_code < b.rhs_code;
  });
  return out;
}

Catalog Catalog::load_text(const std::string& content) {
  std::map<std::string, MoveSchema> by_pair;
  for (MoveFamily f : {MoveFamily::C1, MoveFamily::C2, MoveFamily::C3, MoveFamily::V1,
                       MoveFamily::V2, MoveFamily::V3, MoveFamily::V4}) {
    for (MoveSchema& s : enumerate_oriented_variants(f)) {
      std::string key = s.code_pair();
      by_pair[std::move(key)] = std::move(s);
    }
  }

  std::map<MoveId, MoveSchema> labeled;
  std::istringstream in(content);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string id_tok, pair_tok;
    if (!(ls >> id_tok)) continue;
    if (id_tok[0] == '#') continue;
    if (!(ls >> pair_tok))
      throw MappingInconsistentError("moves.map line " + std::to_string(lineno) +
                                     ": missing code pair");
    auto id = parse_move_id(id_tok);
    if (!id)
      throw MappingInconsistentError("moves.map line " + std::to_string(lineno) +
                                     ": bad move id '" + id_tok + "'");
    auto it = by_pair.find(pair_tok);
    if (it == by_pair.end())
      throw MappingInconsistentError("moves.map line " + std::to_string(lineno) + ": " +
                                     id_tok + " labels a code pair no enumerated variant has");
    if (it->second.id.letter != 0)
      throw MappingInconsistentError("moves.map line " + std::to_string(lineno) + ": " +
                                     pair_tok + " labeled twice");
    if (labeled.count(*id))
      throw MappingInconsistentError("moves.map line " + std::to_string(lineno) + ": " +
                                     id_tok + " assigned twice");
    it->second.id = *id;
    labeled[*id] = it->second;
  }

  for (MoveFamily f : {MoveFamily::C1, MoveFamily::C2, MoveFamily::C3, MoveFamily::V1,
                       MoveFamily::V2, MoveFamily::V3, MoveFamily::V4}) {
    for (int i = 0; i < variant_count(f); ++i) {
      MoveId id{f, static_cast<char>('a' + i)};
      if (!labeled.count(id))
        throw MappingIncompleteError("moves.map does not label " + to_string(id));
    }
  }
  for (auto& [pair, schema] : by_pair) {
    if (schema.id.letter == 0)
      throw MappingIncompleteError("enumerated variant " + pair + " has no letter");
  }

  Catalog c;
  for (auto& [id, schema] : labeled) c.schemas_.push_back(std::move(schema));
  return c;
}

Catalog Catalog::load_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DiagramError("cannot open moves map '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return load_text(ss.str());
}

std::string Catalog::default_map_path() {
  if (const char* env = std::getenv("VKM_MOVES_MAP")) return env;
  std::ifstream local("moves.map");
  if (local) return "moves.map";
  return VKM_DEFAULT_MOVES_MAP;
}

const Catalog& Catalog::global() {
  static Catalog instance = Catalog::load_file(default_map_path());
  return instance;
}

const MoveSchema& Catalog::schema(MoveId id) const {
  auto it = std::lower_bound(schemas_.begin(), schemas_.end(), id,
                             [](const MoveSchema& s, MoveId v) { return s.id < v; });
  if (it == schemas_.end() || !(it->id == id))
    throw UnknownMoveIdError("move " + to_string(id) + " not in catalog");
  return *it;
}

std::optional<MoveId> Catalog::id_by_code_pair(const std::string& pair) const {
  for (const MoveSchema& s : schemas_)
    if (s.code_pair() == pair) return s.id;
  return std::nullopt;
}

const std::set<MoveId>& generator_ids() {
  static const std::set<MoveId> g = {{MoveFamily::V1, 'a'},
                                     {MoveFamily::V2, 'a'},
                                     {MoveFamily::V3, 'a'},
                                     {MoveFamily::V4, 'g'}};
  return g;
}

const std::set<MoveId>& classical_ids() {
  static const std::set<MoveId> ids = [] {
    std::set<MoveId> s;
    for (MoveFamily f : {MoveFamily::C1, MoveFamily::C2, MoveFamily::C3})
      for (int i = 0; i < variant_count(f); ++i) s.insert({f, static_cast<char>('a' + i)});
    return s;
  }();
  return ids;
}

const std::set<MoveId>& virtual_ids() {
  static const std::set<MoveId> ids = [] {
    std::set<MoveId> s;
    for (MoveFamily f : {MoveFamily::V1, MoveFamily::V2, MoveFamily::V3, MoveFamily::V4})
      for (int i = 0; i < variant_count(f); ++i) s.insert({f, static_cast<char>('a' + i)});
    return s;
  }();
  return ids;
}

}  // namespace vkm
