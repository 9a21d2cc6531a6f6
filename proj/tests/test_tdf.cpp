#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "testutil.hpp"
#include "vkm/canonical.hpp"
#include "vkm/tdf.hpp"

using namespace vkm;

TEST_CASE("crossingless unknot serializes to the fixed two-line document") {
  std::string text = serialize_tdf(test::unknot());
  CHECK(text == "closed\nloop\n");
  TangleDiagram back = parse_tdf(text);
  CHECK(is_equivalent(back, test::unknot()));
}

TEST_CASE("serialization is deterministic and canonical") {
  test::Rng rng(11);
  TangleDiagram d = test::virtual_kink_tangle(0);
  std::string a = serialize_tdf(d);
  CHECK(a == serialize_tdf(d));
  CHECK(a == serialize_tdf(test::scramble(d, rng)));
}

TEST_CASE("round trip preserves equivalence") {
  for (TangleDiagram d : {test::virtual_kink_tangle(0), test::virtual_kink_tangle(1),
                          test::classical_kink_knot(), test::virtual_kink_knot()}) {
    TangleDiagram back = parse_tdf(serialize_tdf(d));
    CHECK(is_equivalent(back, d));
  }
}

TEST_CASE("hand-written tangle parses") {
  std::string text =
      "tangle 2\n"
      "b 10\n"
      "b 20\n"
      "v 5\n"
      "e 10.0 5.0\n"
      "e 5.2 5.1\n"
      "e 5.3 20.0\n"
      "boundary 10 20\n";
  TangleDiagram d = parse_tdf(text);
  CHECK(is_equivalent(d, test::virtual_kink_tangle(0)));
}

TEST_CASE("comments and blank lines are ignored") {
  std::string text =
      "# a kinked knot\n"
      "closed\n"
      "\n"
      "x 0 over=02  # the kink\n"
      "e 0.2 0.1\n"
      "e 0.3 0.0\n";
  CHECK(is_equivalent(parse_tdf(text), test::classical_kink_knot()));
}

TEST_CASE("slot out of range is a syntax error with a line number") {
  std::string text =
      "closed\n"
      "v 0\n"
      "e 0.4 0.1\n"
      "e 0.3 0.0\n";
  try {
    parse_tdf(text);
    FAIL("expected TdfSyntaxError");
  } catch (const TdfSyntaxError& e) {
    CHECK(e.line == 3);
  }
}

TEST_CASE("boundary slot above 0 is a syntax error") {
  std::string text =
      "tangle 2\n"
      "b 0\nb 1\n"
      "e 0.1 1.0\n"
      "boundary 0 1\n";
  CHECK_THROWS_AS(parse_tdf(text), TdfSyntaxError);
}

TEST_CASE("structurally broken documents raise validation errors") {
  std::string text =
      "closed\n"
      "v 0\n"
      "e 0.0 0.2\n"  // both diagonal slots of one strand U-turn
      "e 0.1 0.3\n";
  CHECK_THROWS_AS(parse_tdf(text), TdfValidationError);
}

TEST_CASE("unknown ids and malformed headers are rejected") {
  CHECK_THROWS_AS(parse_tdf("closed\ne 0.0 1.0\n"), TdfSyntaxError);
  CHECK_THROWS_AS(parse_tdf("ring\n"), TdfSyntaxError);
  CHECK_THROWS_AS(parse_tdf("tangle 2\nb 0\nb 1\ne 0.0 1.0\n"), TdfSyntaxError);
}
