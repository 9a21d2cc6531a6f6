#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <set>

#include "testutil.hpp"
#include "vkm/canonical.hpp"
#include "vkm/moves.hpp"

using namespace vkm;

namespace {

// Boundary index of the strand's other end, following the through-strand
// rule from boundary point `i`.
int strand_partner(const TangleDiagram& d, int i) {
  std::map<NodeId, int> bindex;
  for (std::size_t j = 0; j < d.boundary().size(); ++j) bindex[d.boundary()[j]] = (int)j;
  NodeId n = d.boundary()[i];
  int slot = 0;
  for (int guard = 0; guard < 1000; ++guard) {
    EdgeEnd far = d.other_end(n, slot);
    if (d.node(far.node).kind == NodeKind::Boundary) return bindex[far.node];
    n = far.node;
    slot = (far.slot + 2) % 4;
  }
  FAIL("strand does not terminate");
  return -1;
}

std::vector<MoveSchema> family_variants(MoveFamily f) { return enumerate_oriented_variants(f); }

}  // namespace

TEST_CASE("oriented variant counts match the catalog totals") {
  CHECK(family_variants(MoveFamily::V1).size() == 2);
  CHECK(family_variants(MoveFamily::V2).size() == 3);
  CHECK(family_variants(MoveFamily::V3).size() == 4);
  CHECK(family_variants(MoveFamily::V4).size() == 8);
  CHECK(family_variants(MoveFamily::C1).size() == 4);
  CHECK(family_variants(MoveFamily::C2).size() == 4);
  CHECK(family_variants(MoveFamily::C3).size() == 8);
  std::size_t virt = family_variants(MoveFamily::V1).size() + family_variants(MoveFamily::V2).size() +
                     family_variants(MoveFamily::V3).size() + family_variants(MoveFamily::V4).size();
  std::size_t cls = family_variants(MoveFamily::C1).size() + family_variants(MoveFamily::C2).size() +
                    family_variants(MoveFamily::C3).size();
  CHECK(virt == 17);
  CHECK(cls == 16);
}

TEST_CASE("every schema side is a valid tangle with matched boundary") {
  for (MoveFamily f : {MoveFamily::C1, MoveFamily::C2, MoveFamily::C3, MoveFamily::V1,
                       MoveFamily::V2, MoveFamily::V3, MoveFamily::V4}) {
    for (const MoveSchema& s : family_variants(f)) {
      CHECK(validate(s.lhs).ok());
      CHECK(validate(s.rhs).ok());
      CHECK(boundary_signature(s.lhs) == boundary_signature(s.rhs));
      for (std::size_t i = 0; i < s.lhs.boundary().size(); ++i)
        CHECK(strand_partner(s.lhs, (int)i) == strand_partner(s.rhs, (int)i));
    }
  }
}

TEST_CASE("crossing counts per family") {
  auto check_counts = [](MoveFamily f, std::size_t l, std::size_t r) {
    for (const MoveSchema& s : family_variants(f)) {
      CHECK(s.lhs.crossing_count() == l);
      CHECK(s.rhs.crossing_count() == r);
    }
  };
  check_counts(MoveFamily::V1, 0, 1);
  check_counts(MoveFamily::C1, 0, 1);
  check_counts(MoveFamily::V2, 0, 2);
  check_counts(MoveFamily::C2, 0, 2);
  check_counts(MoveFamily::V3, 3, 3);
  check_counts(MoveFamily::C3, 3, 3);
  check_counts(MoveFamily::V4, 3, 3);
}

TEST_CASE("family crossing kinds: V pure virtual, C pure classical, V4 mixed") {
  for (const MoveSchema& s : family_variants(MoveFamily::V3)) {
    CHECK(s.lhs.virtual_count() == 3);
    CHECK(s.rhs.virtual_count() == 3);
  }
  for (const MoveSchema& s : family_variants(MoveFamily::C3)) {
    CHECK(s.lhs.classical_count() == 3);
    CHECK(s.rhs.classical_count() == 3);
  }
  for (const MoveSchema& s : family_variants(MoveFamily::V4)) {
    CHECK(s.lhs.classical_count() == 1);
    CHECK(s.lhs.virtual_count() == 2);
    CHECK(s.rhs.classical_count() == 1);
    CHECK(s.rhs.virtual_count() == 2);
  }
}

TEST_CASE("V4 keeps the classical crossing out of the sliding strand") {
  // The strand occupying boundary slots {0,3} slides; it must meet only
  // virtual crossings, and its crossings with the other two are virtual on
  // both sides.
  for (const MoveSchema& s : family_variants(MoveFamily::V4)) {
    for (const TangleDiagram* side : {&s.lhs, &s.rhs}) {
      // Walk the slider strand and record the kinds it meets.
      std::map<NodeId, int> bindex;
      for (std::size_t j = 0; j < side->boundary().size(); ++j)
        bindex[side->boundary()[j]] = (int)j;
      for (std::size_t i = 0; i < side->boundary().size(); ++i) {
        NodeId n = side->boundary()[i];
        int slot = 0;
        int classical_met = 0, virtual_met = 0;
        while (true) {
          EdgeEnd far = side->other_end(n, slot);
          if (side->node(far.node).kind == NodeKind::Boundary) break;
          if (side->node(far.node).kind == NodeKind::Classical)
            ++classical_met;
          else
            ++virtual_met;
          n = far.node;
          slot = (far.slot + 2) % 4;
        }
        // Each strand meets exactly two crossings; exactly one strand pair
        // meets the classical crossing, and no strand meets it twice.
        CHECK(classical_met + virtual_met == 2);
        CHECK(classical_met <= 1);
      }
    }
  }
}

TEST_CASE("no two catalog schemas are related by half-turn rotation") {
  std::vector<MoveSchema> all;
  for (MoveFamily f : {MoveFamily::C1, MoveFamily::C2, MoveFamily::C3, MoveFamily::V1,
                       MoveFamily::V2, MoveFamily::V3, MoveFamily::V4})
    for (MoveSchema& s : family_variants(f)) all.push_back(std::move(s));
  CHECK(all.size() == 33);

  std::set<std::string> keys;
  for (const MoveSchema& s : all) {
    int half = (int)s.lhs.boundary().size() / 2;
    std::string rl = canonical_code(rotate_boundary(s.lhs, half));
    std::string rr = canonical_code(rotate_boundary(s.rhs, half));
    std::string variants[4] = {s.lhs_code + "|" + s.rhs_code, rl + "|" + rr,
                               s.rhs_code + "|" + s.lhs_code, rr + "|" + rl};
    for (const std::string& v : variants) CHECK(keys.count(v) == 0);
    for (const std::string& v : variants) keys.insert(v);
  }
}

TEST_CASE("enumeration output order is deterministic and sorted") {
  for (MoveFamily f : {MoveFamily::V2, MoveFamily::V4}) {
    auto a = family_variants(f);
    auto b = family_variants(f);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].code_pair() == b[i].code_pair());
      if (i) CHECK(a[i - 1].code_pair() < a[i].code_pair());
    }
  }
}

TEST_CASE("catalog loading reports incomplete and inconsistent mappings") {
  CHECK_THROWS_AS(Catalog::load_text(""), MappingIncompleteError);
  CHECK_THROWS_AS(Catalog::load_text("V1a bogus|code\n"), MappingInconsistentError);
  auto v1 = family_variants(MoveFamily::V1);
  std::string one_line = "V1a " + v1[0].code_pair() + "\n";
  CHECK_THROWS_AS(Catalog::load_text(one_line), MappingIncompleteError);
  std::string twice = one_line + "V1a " + v1[1].code_pair() + "\n";
  CHECK_THROWS_AS(Catalog::load_text(twice), MappingInconsistentError);
}
