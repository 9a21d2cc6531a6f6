#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "testutil.hpp"
#include "vkm/canonical.hpp"
#include "vkm/moves.hpp"
#include "vkm/rewrite.hpp"

using namespace vkm;
using test::Rng;

namespace {

MoveSchema variant_with_signature(MoveFamily f, const std::string& sig) {
  for (MoveSchema& s : enumerate_oriented_variants(f))
    if (to_string(boundary_signature(s.lhs)) == sig) return std::move(s);
  FAIL("no variant of " << to_string(f) << " with signature " << sig);
  return {};
}

MoveSchema nth_variant(MoveFamily f, int i) {
  auto v = enumerate_oriented_variants(f);
  REQUIRE(i < (int)v.size());
  return v[i];
}

}  // namespace

TEST_CASE("a plain arc matches the crossingless unknot exactly once") {
  MoveSchema v1 = nth_variant(MoveFamily::V1, 0);
  auto sites = find_matches(test::unknot(), v1, Direction::Forward);
  CHECK(sites.size() == 1);
}

TEST_CASE("a triangle pattern cannot match the unknot") {
  MoveSchema v3 = nth_variant(MoveFamily::V3, 0);
  CHECK(find_matches(test::unknot(), v3, Direction::Forward).empty());
  CHECK(find_matches(test::unknot(), v3, Direction::Backward).empty());
}

TEST_CASE("kink move on the unknot adds one virtual crossing and consumes the loop") {
  MoveSchema v1 = nth_variant(MoveFamily::V1, 0);
  auto sites = find_matches(test::unknot(), v1, Direction::Forward);
  REQUIRE(sites.size() == 1);
  TangleDiagram out = apply_move(test::unknot(), v1, sites[0], Direction::Forward);
  CHECK(out.closed());
  CHECK(out.crossing_count() == 1);
  CHECK(out.virtual_count() == 1);
  CHECK(out.free_loops() == 0);
  CHECK(validate(out).ok());
}

TEST_CASE("kink removal restores the crossingless unknot") {
  MoveSchema v1 = nth_variant(MoveFamily::V1, 0);
  auto fwd = find_matches(test::unknot(), v1, Direction::Forward);
  TangleDiagram kinked = apply_move(test::unknot(), v1, fwd[0], Direction::Forward);
  auto bwd = find_matches(kinked, v1, Direction::Backward);
  REQUIRE(bwd.size() >= 1);
  TangleDiagram back = apply_move(kinked, v1, bwd[0], Direction::Backward);
  CHECK(back.crossing_count() == 0);
  CHECK(back.free_loops() == 1);
  CHECK(canonical_code(back) == canonical_code(test::unknot()));
}

TEST_CASE("parallel bigon creation needs antiparallel segments: no site on a circle") {
  // A crossingless circle presents two disjoint segments to a disk only in
  // the pattern (in,out,in,out); the parallel variant cannot land on it.
  MoveSchema parallel = variant_with_signature(MoveFamily::V2, "iioo");
  CHECK(find_matches(test::unknot(), parallel, Direction::Forward).empty());
  MoveSchema anti1 = variant_with_signature(MoveFamily::V2, "ioio");
  MoveSchema anti2 = variant_with_signature(MoveFamily::V2, "oioi");
  CHECK(find_matches(test::unknot(), anti1, Direction::Forward).size() >= 1);
  CHECK(find_matches(test::unknot(), anti2, Direction::Forward).size() >= 1);
}

TEST_CASE("antiparallel bigon then kink on the unknot yields 3 virtual crossings") {
  MoveSchema anti = variant_with_signature(MoveFamily::V2, "ioio");
  auto s1 = find_matches(test::unknot(), anti, Direction::Forward);
  REQUIRE(s1.size() >= 1);
  TangleDiagram d1 = apply_move(test::unknot(), anti, s1[0], Direction::Forward);
  CHECK(d1.crossing_count() == 2);
  MoveSchema v1 = nth_variant(MoveFamily::V1, 0);
  auto s2 = find_matches(d1, v1, Direction::Forward);
  REQUIRE(s2.size() >= 1);
  TangleDiagram d2 = apply_move(d1, v1, s2[0], Direction::Forward);
  CHECK(d2.crossing_count() == 3);
  CHECK(d2.virtual_count() == 3);
}

TEST_CASE("bigon created on a two-arc tangle is removable at the same spot") {
  MoveSchema v2 = variant_with_signature(MoveFamily::V2, "iioo");
  const TangleDiagram& host = v2.lhs;  // the two plain arcs
  auto fwd = find_matches(host, v2, Direction::Forward);
  REQUIRE(fwd.size() >= 1);
  bool reaches_rhs = false;
  for (const MatchSite& site : fwd) {
    TangleDiagram out = apply_move(host, v2, site, Direction::Forward);
    auto bwd = find_matches(out, v2, Direction::Backward);
    CHECK(bwd.size() >= 1);
    if (is_equivalent(out, v2.rhs)) reaches_rhs = true;
  }
  CHECK(reaches_rhs);
}

TEST_CASE("move application preserves the boundary signature") {
  Rng rng(23);
  for (MoveFamily f : {MoveFamily::V2, MoveFamily::V3, MoveFamily::V4, MoveFamily::C3}) {
    for (const MoveSchema& host_schema : enumerate_oriented_variants(f)) {
      const TangleDiagram& host = host_schema.rhs;
      BoundarySignature sig = boundary_signature(host);
      for (const MoveSchema& move : enumerate_oriented_variants(MoveFamily::V1)) {
        auto sites = find_matches(host, move, Direction::Forward);
        if (sites.empty()) continue;
        std::size_t pick = rng.below(sites.size());
        TangleDiagram out = apply_move(host, move, sites[pick], Direction::Forward);
        CHECK(boundary_signature(out) == sig);
        CHECK(validate(out).ok());
      }
    }
  }
}

TEST_CASE("involution: forward then backward at the image site restores the code") {
  Rng rng(71);
  int tried = 0;
  for (MoveFamily f : {MoveFamily::V1, MoveFamily::V2, MoveFamily::V3, MoveFamily::V4}) {
    for (const MoveSchema& move : enumerate_oriented_variants(f)) {
      // Hosts: every schema side of the family's own variants.
      for (const MoveSchema& hs : enumerate_oriented_variants(f)) {
        for (const TangleDiagram* host : {&hs.lhs, &hs.rhs}) {
          std::string code = canonical_code(*host);
          for (Direction dir : {Direction::Forward, Direction::Backward}) {
            auto sites = find_matches(*host, move, dir);
            if (sites.empty()) continue;
            std::size_t pick = rng.below(sites.size());
            TangleDiagram mid = apply_move(*host, move, sites[pick], dir);
            auto undo = find_matches(mid, move, opposite(dir));
            bool restored = false;
            for (const MatchSite& u : undo) {
              TangleDiagram back = apply_move(mid, move, u, opposite(dir));
              if (canonical_code(back) == code) {
                restored = true;
                break;
              }
            }
            CHECK(restored);
            ++tried;
          }
        }
      }
    }
  }
  CHECK(tried > 50);
}

TEST_CASE("every returned site passes the independent disk-region check") {
  for (MoveFamily f : {MoveFamily::V1, MoveFamily::V2, MoveFamily::V4}) {
    for (const MoveSchema& move : enumerate_oriented_variants(f)) {
      for (const MoveSchema& hs : enumerate_oriented_variants(MoveFamily::V4)) {
        const TangleDiagram& host = hs.lhs;
        for (Direction dir : {Direction::Forward, Direction::Backward}) {
          const TangleDiagram& pattern = dir == Direction::Forward ? move.lhs : move.rhs;
          for (const MatchSite& site : find_matches(host, move, dir))
            CHECK(detail::site_region_is_disk(host, pattern, site));
        }
      }
    }
  }
}

TEST_CASE("the parallel-arcs-on-a-circle site fails both legality routes") {
  // Hand-build the would-be site: both arcs of the parallel bigon pattern
  // on the single free loop. The splice result must be nonplanar and the
  // contraction test must refuse it.
  MoveSchema parallel = variant_with_signature(MoveFamily::V2, "iioo");
  TangleDiagram host = test::unknot();
  MatchSite site;
  site.edges.assign(parallel.lhs.edge_count(), {});
  REQUIRE(parallel.lhs.edge_count() == 2);
  site.edges[0] = {ImageKind::LoopArc, 0, 0};
  site.edges[1] = {ImageKind::LoopArc, 0, 1};
  CHECK_FALSE(detail::site_region_is_disk(host, parallel.lhs, site));
  TangleDiagram raw = detail::splice(host, parallel.lhs, parallel.rhs, site);
  CHECK_FALSE(validate(raw).ok());
}

TEST_CASE("match sites are deterministically ordered and duplicate-free") {
  MoveSchema v2 = variant_with_signature(MoveFamily::V2, "iioo");
  const TangleDiagram& host = v2.rhs;
  auto a = find_matches(host, v2, Direction::Backward);
  auto b = find_matches(host, v2, Direction::Backward);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
  for (std::size_t i = 1; i < a.size(); ++i) CHECK(a[i - 1] < a[i]);
}
