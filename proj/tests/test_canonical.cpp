#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "testutil.hpp"
#include "vkm/canonical.hpp"

using namespace vkm;
using test::Rng;

TEST_CASE("canonical code is stable under relabeling") {
  Rng rng(101);
  for (TangleDiagram d : {test::virtual_kink_tangle(0), test::virtual_kink_tangle(1),
                          test::classical_kink_knot(), test::virtual_kink_knot()}) {
    std::string code = canonical_code(d);
    std::set<std::string> codes{code};
    for (int i = 0; i < 200; ++i) codes.insert(canonical_code(test::scramble(d, rng)));
    CHECK(codes.size() == 1);
  }
}

TEST_CASE("canonicalize is idempotent") {
  for (TangleDiagram d : {test::virtual_kink_tangle(0), test::classical_kink_knot(),
                          test::unknot()}) {
    CanonicalForm f = canonicalize(d);
    CanonicalForm g = canonicalize(f.diagram);
    CHECK(f.code == g.code);
    CHECK(f.diagram.edges() == g.diagram.edges());
  }
}

TEST_CASE("kink chiralities get distinct codes") {
  CHECK(canonical_code(test::virtual_kink_tangle(0)) !=
        canonical_code(test::virtual_kink_tangle(1)));
}

TEST_CASE("classical kinks: over flip changes the code") {
  CHECK(canonical_code(test::classical_kink_knot(OverDiagonal::Slots02)) !=
        canonical_code(test::classical_kink_knot(OverDiagonal::Slots13)));
}

TEST_CASE("is_equivalent basics") {
  TangleDiagram a = test::virtual_kink_tangle(0);
  Rng rng(5);
  CHECK(is_equivalent(a, a));
  CHECK(is_equivalent(a, test::scramble(a, rng)));
  CHECK_FALSE(is_equivalent(a, test::virtual_kink_tangle(1)));
}

TEST_CASE("is_equivalent rejects mismatched signatures") {
  TangleDiagram a = test::virtual_kink_tangle(0);
  TangleDiagram r = rotate_boundary(a, 1);
  CHECK_THROWS_AS(is_equivalent(a, r), SignatureMismatchError);
  CHECK_THROWS_AS(is_equivalent(a, test::unknot()), SignatureMismatchError);
}

TEST_CASE("closed canonical code sees the sphere flip as one diagram") {
  // The flipped encoding of a closed kink: reversed rotations, over/under
  // swapped. Both present the same knot viewed from either side.
  DiagramBuilder b;
  NodeId v = b.add_classical(OverDiagonal::Slots13);  // over swapped
  b.connect(v, 2, v, 3);                              // rotation reversed
  b.connect(v, 1, v, 0);
  TangleDiagram flipped_kink = std::move(b).build();
  CHECK(canonical_code(flipped_kink) == canonical_code(test::classical_kink_knot()));
}

TEST_CASE("closed mirror image keeps a distinct code") {
  // Reversed rotations with over/under kept is the mirror kink (opposite
  // writhe); it must not collapse into the original.
  DiagramBuilder b;
  NodeId v = b.add_classical(OverDiagonal::Slots02);
  b.connect(v, 2, v, 3);
  b.connect(v, 1, v, 0);
  TangleDiagram mirror = std::move(b).build();
  CHECK(crossing_sign(mirror, 0) != crossing_sign(test::classical_kink_knot(), 0));
  CHECK(canonical_code(mirror) != canonical_code(test::classical_kink_knot()));
}

TEST_CASE("free loop count enters the code") {
  DiagramBuilder b;
  b.add_free_loops(2);
  TangleDiagram two = std::move(b).build();
  CHECK(canonical_code(two) != canonical_code(test::unknot()));
}
