#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vkm/diagram.hpp"

namespace vkm {

enum class MoveFamily : std::uint8_t { C1, C2, C3, V1, V2, V3, V4 };

constexpr bool is_classical_family(MoveFamily f) {
  return f == MoveFamily::C1 || f == MoveFamily::C2 || f == MoveFamily::C3;
}

// Letters available per family: C1 a-d, C2 a-d, C3 a-h, V1 a-b, V2 a-c,
// V3 a-d, V4 a-h.
int variant_count(MoveFamily f);

std::string to_string(MoveFamily f);
std::optional<MoveFamily> parse_family(const std::string& s);

struct MoveId {
  MoveFamily family;
  char letter;  // 'a'..

  friend bool operator==(const MoveId&, const MoveId&) = default;
  friend auto operator<=>(const MoveId&, const MoveId&) = default;
};

std::string to_string(MoveId id);
std::optional<MoveId> parse_move_id(const std::string& s);

struct UnknownMoveIdError : DiagramError {
  using DiagramError::DiagramError;
};
struct MappingIncompleteError : DiagramError {
  using DiagramError::DiagramError;
};
struct MappingInconsistentError : DiagramError {
  using DiagramError::DiagramError;
};

// A boundary-matched (lhs, rhs) pair of tangles. Both sides are stored as
// canonical forms; `lhs_code`/`rhs_code` cache their codes. `id` is unset
// (letter 0) until a mapping file attaches letters.
struct MoveSchema {
  MoveId id{MoveFamily::C1, 0};
  TangleDiagram lhs;
  TangleDiagram rhs;
  std::string lhs_code;
  std::string rhs_code;

  std::string code_pair() const { return lhs_code + "|" + rhs_code; }
};

// All oriented variants of a family's unoriented seed: every strand
// orientation (and over/under or crossing-type choice where the family has
// one), one representative per orbit under half-turn boundary rotation of
// (lhs, rhs) read in either direction. Sorted by (lhs code, rhs code).
std::vector<MoveSchema> enumerate_oriented_variants(MoveFamily family);

// The catalog: all 33 oriented move schemas with letters attached via a
// mapping file (lines `<MoveId> <lhs-code>|<rhs-code>`, `#` comments).
class Catalog {
 public:
  static Catalog load_file(const std::string& path);
  static Catalog load_text(const std::string& content);

  // $VKM_MOVES_MAP, else ./moves.map, else the path baked at build time.
  static std::string default_map_path();
  static const Catalog& global();  // loaded once from default_map_path()

  const MoveSchema& schema(MoveId id) const;  // throws UnknownMoveIdError
  const std::vector<MoveSchema>& all() const { return schemas_; }

  std::optional<MoveId> id_by_code_pair(const std::string& pair) const;

 private:
  std::vector<MoveSchema> schemas_;  // sorted by MoveId
};

// The four-element generating set of the virtual moves.
const std::set<MoveId>& generator_ids();

// All sixteen classical move ids.
const std::set<MoveId>& classical_ids();

// All seventeen virtual move ids.
const std::set<MoveId>& virtual_ids();

}  // namespace vkm
