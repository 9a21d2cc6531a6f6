#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"
#include "vkm/diagram.hpp"

using namespace vkm;
using test::Rng;

TEST_CASE("crossingless unknot validates") {
  TangleDiagram d = test::unknot();
  CHECK(validate(d).ok());
  CHECK(d.closed());
  CHECK(d.free_loops() == 1);
  CHECK(d.crossing_count() == 0);
}

TEST_CASE("virtual kink tangle validates with correct Euler count") {
  for (int chir : {0, 1}) {
    TangleDiagram d = test::virtual_kink_tangle(chir);
    ValidationReport r = validate(d);
    CHECK(r.ok());
    auto chi = detail::euler_characteristics(d);
    REQUIRE(chi.size() == 1);
    CHECK(chi[0] == 2);
  }
}

TEST_CASE("closed classical kink validates") {
  TangleDiagram d = test::classical_kink_knot();
  CHECK(validate(d).ok());
  CHECK(d.classical_count() == 1);
}

TEST_CASE("through-strand violation is reported") {
  // Two slots of the same diagonal both incoming.
  DiagramBuilder b;
  NodeId v = b.add_virtual();
  b.connect(v, 1, v, 0);
  b.connect(v, 3, v, 2);  // slot 0 and 2 both receive; 1 and 3 both send
  TangleDiagram d = std::move(b).build_unchecked();
  ValidationReport r = validate(d);
  REQUIRE_FALSE(r.ok());
  bool found = false;
  for (const Violation& v : r.violations)
    if (v.rule == "through-strand") found = true;
  CHECK(found);
}

TEST_CASE("slot coverage violation is reported") {
  DiagramBuilder b;
  NodeId v = b.add_virtual();
  b.connect(v, 0, v, 2);  // slots 1 and 3 unused
  TangleDiagram d = std::move(b).build_unchecked();
  ValidationReport r = validate(d);
  REQUIRE_FALSE(r.ok());
  CHECK(r.violations[0].rule == "slot-coverage");
}

TEST_CASE("nonplanar rotation system is rejected") {
  // Two crossings joined by four edges whose rotation system has two faces:
  // V - E + F = 2 - 4 + 2 = 0, a torus embedding.
  DiagramBuilder b;
  NodeId u = b.add_virtual();
  NodeId w = b.add_virtual();
  b.connect(u, 2, w, 0);
  b.connect(u, 3, w, 1);
  b.connect(w, 3, u, 1);
  b.connect(w, 2, u, 0);
  TangleDiagram d = std::move(b).build_unchecked();
  ValidationReport r = validate(d);
  REQUIRE_FALSE(r.ok());
  bool planarity = false;
  for (const Violation& v : r.violations)
    if (v.rule == "planarity") planarity = true;
  CHECK(planarity);
}

TEST_CASE("crossing sign follows the right-hand convention") {
  // Over strand exits slot 2; under strand exits slot 3.
  // (over_out + 1) % 4 == under_out  =>  +1.
  {
    DiagramBuilder b;
    NodeId v = b.add_classical(OverDiagonal::Slots02);
    NodeId b0 = b.add_boundary(), b1 = b.add_boundary(), b2 = b.add_boundary(),
           b3 = b.add_boundary();
    b.connect(b0, 0, v, 0);
    b.connect(v, 2, b1, 0);
    b.connect(b2, 0, v, 1);
    b.connect(v, 3, b3, 0);
    b.set_boundary({b0, b2, b1, b3});
    TangleDiagram d = std::move(b).build();
    CHECK(crossing_sign(d, 0) == +1);
  }
  // Flipping the over diagonal negates the sign.
  {
    DiagramBuilder b;
    NodeId v = b.add_classical(OverDiagonal::Slots13);
    NodeId b0 = b.add_boundary(), b1 = b.add_boundary(), b2 = b.add_boundary(),
           b3 = b.add_boundary();
    b.connect(b0, 0, v, 0);
    b.connect(v, 2, b1, 0);
    b.connect(b2, 0, v, 1);
    b.connect(v, 3, b3, 0);
    b.set_boundary({b0, b2, b1, b3});
    TangleDiagram d = std::move(b).build();
    CHECK(crossing_sign(d, 0) == -1);
  }
  // Reversing both strands keeps the sign.
  {
    DiagramBuilder b;
    NodeId v = b.add_classical(OverDiagonal::Slots02);
    NodeId b0 = b.add_boundary(), b1 = b.add_boundary(), b2 = b.add_boundary(),
           b3 = b.add_boundary();
    b.connect(v, 0, b0, 0);
    b.connect(b1, 0, v, 2);
    b.connect(v, 1, b2, 0);
    b.connect(b3, 0, v, 3);
    b.set_boundary({b0, b2, b1, b3});
    TangleDiagram d = std::move(b).build();
    CHECK(crossing_sign(d, 0) == +1);
  }
}

TEST_CASE("crossing sign requires a classical crossing") {
  TangleDiagram d = test::virtual_kink_knot();
  CHECK_THROWS_AS(crossing_sign(d, 0), NotAClassicalCrossing);
}

TEST_CASE("boundary signature reads in/out around the disk") {
  TangleDiagram d = test::virtual_kink_tangle();
  BoundarySignature sig = boundary_signature(d);
  REQUIRE(sig.size() == 2);
  CHECK(sig[0] == StrandDir::In);
  CHECK(sig[1] == StrandDir::Out);
  CHECK(to_string(sig) == "io");
}

TEST_CASE("rotate_boundary rejects closed diagrams") {
  CHECK_THROWS_AS(rotate_boundary(test::unknot(), 1), ClosedDiagramError);
}

TEST_CASE("rotate_boundary keeps validity and signature rotation") {
  TangleDiagram d = test::virtual_kink_tangle();
  TangleDiagram r = rotate_boundary(d, 1);
  CHECK(validate(r).ok());
  BoundarySignature sig = boundary_signature(r);
  CHECK(sig[0] == StrandDir::Out);
  CHECK(sig[1] == StrandDir::In);
  TangleDiagram full = rotate_boundary(d, 2);
  CHECK(boundary_signature(full) == boundary_signature(d));
}

TEST_CASE("crossing sign survives relabeling") {
  Rng rng(7);
  TangleDiagram d = test::classical_kink_knot();
  int sign = crossing_sign(d, 0);
  for (int i = 0; i < 50; ++i) {
    TangleDiagram s = test::scramble(d, rng);
    NodeId cls = kNoNode;
    for (NodeId n = 0; n < s.node_count(); ++n)
      if (s.node(n).kind == NodeKind::Classical) cls = n;
    REQUIRE(cls != kNoNode);
    CHECK(crossing_sign(s, cls) == sign);
  }
}
