#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "vkm/moves.hpp"
#include "vkm/rewrite.hpp"

namespace vkm {

struct BoundsTooTightError : DiagramError {
  using DiagramError::DiagramError;
};

// Derive `target` from `source` using only moves from `allowed`, never
// letting an intermediate diagram exceed `max_crossings` crossings or the
// step count exceed `max_depth`.
struct DerivationProblem {
  TangleDiagram source;
  TangleDiagram target;
  std::set<MoveId> allowed;
  int max_crossings = 0;
  int max_depth = 24;
};

// One rewrite step: the move, its direction, and the index of the site in
// find_matches(canonical form of the current diagram, move, direction).
struct Step {
  MoveId move;
  Direction dir;
  int site = 0;
};

struct Certificate {
  DerivationProblem problem;
  std::vector<Step> steps;
};

enum class BoundHit : std::uint8_t { None, Depth, Crossings };
std::string to_string(BoundHit b);

struct SearchStats {
  std::uint64_t states_expanded = 0;
  std::uint64_t states_seen = 0;
  std::uint64_t max_frontier = 0;
  double millis = 0;
  BoundHit bound_hit = BoundHit::None;
};

struct SearchResult {
  std::optional<Certificate> certificate;
  SearchStats stats;
  bool found() const { return certificate.has_value(); }
};

struct SearchOptions {
  int threads = 1;  // frontier expansion workers; result is thread-count invariant
  std::uint64_t max_states = 0;  // 0 = unlimited; else stop once seen states exceed this
};

// Bidirectional breadth-first search over canonical codes. Successors of a
// state are all apply_move results over allowed schemas, both directions,
// all sites, pruned at max_crossings. A returned certificate has minimal
// length; NotFound means the bounded space is exhausted (never a
// non-derivability proof). Throws SignatureMismatchError if the endpoints
// disagree, BoundsTooTightError if they already break max_crossings.
SearchResult search(const Catalog& catalog, const DerivationProblem& problem,
                    const SearchOptions& options = {});

struct CheckResult {
  bool ok = false;
  std::string reason;
  explicit operator bool() const { return ok; }
};

// Replays the steps: every site index must resolve against the canonical
// form of the current diagram, every move must be allowed, every
// intermediate must respect max_crossings, and the final diagram must be
// equivalent to the target.
CheckResult check_certificate(const Catalog& catalog, const Certificate& cert);

// Reverses a certificate by replaying it and inverting each step; the
// result derives problem.target -> problem.source.
Certificate invert_certificate(const Catalog& catalog, const Certificate& cert);

// Rewrites every step that uses `derived` into the steps of `expansion`
// (a certificate for `derived`'s lhs -> rhs), replayed in context. The
// output certificate never mentions `derived`.
Certificate expand_certificate(const Catalog& catalog, const Certificate& cert, MoveId derived,
                               const Certificate& expansion);

// Splices certificates into each other until every step only uses moves in
// `base`. Input certificates must arrive in dependency order (a certificate
// may use earlier targets). Returns target -> flattened certificate with
// allowed = base.
std::vector<std::pair<MoveId, Certificate>> expand_to_base(
    const Catalog& catalog, const std::vector<std::pair<MoveId, Certificate>>& certs,
    const std::set<MoveId>& base);

// ---------------------------------------------------------------------------
// Lemma manifests.
// ---------------------------------------------------------------------------

struct ManifestRow {
  MoveId target;
  std::set<MoveId> allowed;
  std::optional<int> max_crossings;  // default: lhs crossings + 6
  std::optional<int> max_depth;      // default: 24
};

// The manifest that mirrors the lemma table: each non-generator virtual
// move with its quoted helper set, in dependency order.
std::vector<ManifestRow> default_manifest();

// Manifest file format: `derive <MoveId> from <MoveId>,<MoveId>,...
// [max_crossings=N] [max_depth=M]`, `#` comments.
std::vector<ManifestRow> parse_manifest(const std::string& text);

struct ManifestRowResult {
  ManifestRow row;
  SearchResult result;
  bool certificate_ok = false;
  bool pass() const { return result.found() && certificate_ok; }
};

struct ManifestReport {
  std::vector<ManifestRowResult> rows;
  bool all_pass() const;
};

ManifestReport run_lemma_manifest(const Catalog& catalog, const std::vector<ManifestRow>& rows,
                                  const SearchOptions& options = {});

// Default bounds for a row, from the target's lhs.
int default_max_crossings(const Catalog& catalog, MoveId target);

// Builds the row's DerivationProblem (lhs -> rhs of the target move).
DerivationProblem problem_for_row(const Catalog& catalog, const ManifestRow& row);

// ---------------------------------------------------------------------------
// Certificate files.
// ---------------------------------------------------------------------------

// Header `problem <target> from <id>,<id>,...` with optional
// `bounds <max_crossings> <max_depth>`, then `step <MoveId> <dir> <site>`.
std::string serialize_certificate(const Certificate& cert, MoveId target);
Certificate parse_certificate(const Catalog& catalog, const std::string& text,
                              MoveId* target_out = nullptr);

}  // namespace vkm
