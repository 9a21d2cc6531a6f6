#include "vkm/derive.hpp"

#include <algorithm>
#include <chrono>
#include <future>
#include <map>
#include <sstream>

#include "vkm/canonical.hpp"

namespace vkm {

std::string to_string(BoundHit b) {
  switch (b) {
    case BoundHit::None: return "none";
    case BoundHit::Depth: return "depth";
    case BoundHit::Crossings: return "crossings";
  }
  return "?";
}

namespace {

struct ParentRec {
  std::string parent;  // empty for roots
  Step step{};         // step applied to parent's canonical form
  int depth = 0;
};

using Visited = std::map<std::string, ParentRec>;

struct Successor {
  Step step;
  std::string code;
};

// All one-step successors of a canonical form, in deterministic order:
// schemas by MoveId, forward before backward, sites in match order.
std::vector<Successor> successors(const Catalog& catalog, const std::vector<MoveId>& moves,
                                  const TangleDiagram& form, int max_crossings,
                                  bool* crossings_pruned) {
  std::vector<Successor> out;
  for (MoveId id : moves) {
    const MoveSchema& schema = catalog.schema(id);
    for (Direction dir : {Direction::Forward, Direction::Backward}) {
      auto matches = find_matches_with_results(form, schema, dir);
      for (std::size_t i = 0; i < matches.size(); ++i) {
        const TangleDiagram& next = matches[i].result;
        if (static_cast<int>(next.crossing_count()) > max_crossings) {
          if (crossings_pruned) *crossings_pruned = true;
          continue;
        }
        out.push_back({Step{id, dir, static_cast<int>(i)}, canonical_code(next)});
      }
    }
  }
  return out;
}

// Expands one frontier level. Deterministic regardless of thread count:
// workers only compute the per-state successor lists; discovery order is
// the sequential merge in frontier order.
std::vector<std::string> expand_level(const Catalog& catalog, const std::vector<MoveId>& moves,
                                      const std::vector<std::string>& frontier, Visited& visited,
                                      int depth, int max_crossings, int threads,
                                      bool* crossings_pruned, std::uint64_t* expanded) {
  std::vector<std::vector<Successor>> per_state(frontier.size());
  if (threads <= 1 || frontier.size() < 2) {
    for (std::size_t i = 0; i < frontier.size(); ++i)
      per_state[i] = successors(catalog, moves, diagram_from_code(frontier[i]), max_crossings,
                                crossings_pruned);
  } else {
    std::size_t nw = std::min<std::size_t>(threads, frontier.size());
    std::vector<std::future<bool>> futures;
    std::size_t chunk = (frontier.size() + nw - 1) / nw;
    for (std::size_t w = 0; w < nw; ++w) {
      std::size_t lo = w * chunk, hi = std::min(frontier.size(), lo + chunk);
      if (lo >= hi) break;
      futures.push_back(std::async(std::launch::async, [&, lo, hi] {
        bool pruned = false;
        for (std::size_t i = lo; i < hi; ++i)
          per_state[i] = successors(catalog, moves, diagram_from_code(frontier[i]), max_crossings,
                                    &pruned);
        return pruned;
      }));
    }
    for (auto& f : futures)
      if (f.get() && crossings_pruned) *crossings_pruned = true;
  }
  if (expanded) *expanded += frontier.size();

  std::vector<std::string> next;
  for (std::size_t i = 0; i < frontier.size(); ++i) {
    for (Successor& s : per_state[i]) {
      auto [it, fresh] = visited.try_emplace(s.code, ParentRec{frontier[i], s.step, depth});
      if (fresh) next.push_back(std::move(s.code));
    }
  }
  std::sort(next.begin(), next.end());
  return next;
}

std::vector<Step> path_from_root(const Visited& visited, const std::string& code) {
  std::vector<Step> steps;
  std::string cur = code;
  for (;;) {
    const ParentRec& rec = visited.at(cur);
    if (rec.parent.empty()) break;
    steps.push_back(rec.step);
    cur = rec.parent;
  }
  std::reverse(steps.begin(), steps.end());
  return steps;
}

// First step from `form` (canonical) via `move`/`dir` that lands on
// `expected`; exists whenever `expected` was produced by the inverse step.
Step matching_step(const Catalog& catalog, const TangleDiagram& form, MoveId move, Direction dir,
                   const std::string& expected) {
  const MoveSchema& schema = catalog.schema(move);
  auto sites = find_matches(form, schema, dir);
  for (std::size_t i = 0; i < sites.size(); ++i) {
    TangleDiagram next = apply_move(form, schema, sites[i], dir);
    if (canonical_code(next) == expected) return Step{move, dir, static_cast<int>(i)};
  }
  throw DiagramError("no step of " + to_string(move) + " " + to_string(dir) +
                     " reaches the expected state");
}

}  // namespace

SearchResult search(const Catalog& catalog, const DerivationProblem& problem,
                    const SearchOptions& options) {
  auto t0 = std::chrono::steady_clock::now();
  BoundarySignature ss =
      problem.source.closed() ? BoundarySignature{} : boundary_signature(problem.source);
  BoundarySignature ts =
      problem.target.closed() ? BoundarySignature{} : boundary_signature(problem.target);
  if (problem.source.closed() != problem.target.closed() || ss != ts)
    throw SignatureMismatchError("derivation endpoints have different boundaries");
  if (static_cast<int>(problem.source.crossing_count()) > problem.max_crossings ||
      static_cast<int>(problem.target.crossing_count()) > problem.max_crossings)
    throw BoundsTooTightError("max_crossings below an endpoint's crossing count");

  std::vector<MoveId> moves(problem.allowed.begin(), problem.allowed.end());

  SearchResult res;
  std::string source_code = canonical_code(problem.source);
  std::string target_code = canonical_code(problem.target);

  Visited vf, vb;
  vf.emplace(source_code, ParentRec{"", {}, 0});
  vb.emplace(target_code, ParentRec{"", {}, 0});
  std::vector<std::string> ff{source_code}, fb{target_code};
  int rf = 0, rb = 0;  // completed radii
  bool pruned = false;

  int best = -1;
  std::string best_meet;
  auto consider_meets = [&](const std::vector<std::string>& codes) {
    for (const std::string& c : codes) {
      auto itf = vf.find(c);
      auto itb = vb.find(c);
      if (itf == vf.end() || itb == vb.end()) continue;
      int len = itf->second.depth + itb->second.depth;
      if (len > problem.max_depth) continue;
      if (best < 0 || len < best || (len == best && c < best_meet)) {
        best = len;
        best_meet = c;
      }
    }
  };
  consider_meets(ff);

  while (best < 0 || best > rf + rb) {
    if (options.max_states && vf.size() + vb.size() > options.max_states) break;
    // A side with an exhausted frontier has seen every state reachable
    // within the crossing bound; if the frontiers never met, no path exists.
    if (best < 0 && (ff.empty() || fb.empty())) break;
    bool can_f = !ff.empty() && rf + 1 + rb <= problem.max_depth;
    bool can_b = !fb.empty() && rf + rb + 1 <= problem.max_depth;
    if (!can_f && !can_b) break;
    bool take_f;
    if (can_f && can_b)
      take_f = ff.size() <= fb.size();
    else
      take_f = can_f;
    if (take_f) {
      ff = expand_level(catalog, moves, ff, vf, rf + 1, problem.max_crossings, options.threads,
                        &pruned, &res.stats.states_expanded);
      ++rf;
      res.stats.max_frontier = std::max<std::uint64_t>(res.stats.max_frontier, ff.size());
      consider_meets(ff);
    } else {
      fb = expand_level(catalog, moves, fb, vb, rb + 1, problem.max_crossings, options.threads,
                        &pruned, &res.stats.states_expanded);
      ++rb;
      res.stats.max_frontier = std::max<std::uint64_t>(res.stats.max_frontier, fb.size());
      consider_meets(fb);
    }
  }

  bool side_exhausted = ff.empty() || fb.empty();
  res.stats.states_seen = vf.size() + vb.size();
  if (best >= 0) {
    Certificate cert;
    cert.problem = problem;
    cert.steps = path_from_root(vf, best_meet);
    // Backward half: invert the target-side parent chain.
    std::string cur = best_meet;
    while (!vb.at(cur).parent.empty()) {
      const ParentRec& rec = vb.at(cur);
      TangleDiagram form = diagram_from_code(cur);
      cert.steps.push_back(
          matching_step(catalog, form, rec.step.move, opposite(rec.step.dir), rec.parent));
      cur = rec.parent;
    }
    res.certificate = std::move(cert);
  } else if (side_exhausted) {
    // Every state reachable under the crossing cap was enumerated.
    res.stats.bound_hit = pruned ? BoundHit::Crossings : BoundHit::None;
  } else {
    res.stats.bound_hit = BoundHit::Depth;
  }
  res.stats.millis =
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

CheckResult check_certificate(const Catalog& catalog, const Certificate& cert) {
  try {
    CanonicalForm cur = canonicalize(cert.problem.source);
    int step_no = 0;
    for (const Step& step : cert.steps) {
      ++step_no;
      if (!cert.problem.allowed.count(step.move))
        return {false, "step " + std::to_string(step_no) + " uses " + to_string(step.move) +
                           " outside the allowed set"};
      const MoveSchema& schema = catalog.schema(step.move);
      auto sites = find_matches(cur.diagram, schema, step.dir);
      if (step.site < 0 || step.site >= static_cast<int>(sites.size()))
        return {false, "step " + std::to_string(step_no) + ": site " + std::to_string(step.site) +
                           " of " + std::to_string(sites.size()) + " does not resolve"};
      TangleDiagram next = apply_move(cur.diagram, schema, sites[step.site], step.dir);
      if (static_cast<int>(next.crossing_count()) > cert.problem.max_crossings)
        return {false, "step " + std::to_string(step_no) + " exceeds max_crossings"};
      cur = canonicalize(next);
    }
    if (!is_equivalent(cur.diagram, cert.problem.target))
      return {false, "final diagram is not equivalent to the target"};
    return {true, ""};
  } catch (const DiagramError& e) {
    return {false, e.what()};
  }
}

Certificate invert_certificate(const Catalog& catalog, const Certificate& cert) {
  // Replay forward, then invert each edge of the state chain.
  std::vector<std::string> codes;
  CanonicalForm cur = canonicalize(cert.problem.source);
  codes.push_back(cur.code);
  for (const Step& step : cert.steps) {
    const MoveSchema& schema = catalog.schema(step.move);
    auto sites = find_matches(cur.diagram, schema, step.dir);
    if (step.site < 0 || step.site >= static_cast<int>(sites.size()))
      throw DiagramError("certificate does not replay; cannot invert");
    cur = canonicalize(apply_move(cur.diagram, schema, sites[step.site], step.dir));
    codes.push_back(cur.code);
  }
  Certificate inv;
  inv.problem = cert.problem;
  std::swap(inv.problem.source, inv.problem.target);
  for (std::size_t i = cert.steps.size(); i-- > 0;) {
    TangleDiagram form = diagram_from_code(codes[i + 1]);
    inv.steps.push_back(matching_step(catalog, form, cert.steps[i].move,
                                      opposite(cert.steps[i].dir), codes[i]));
  }
  return inv;
}

Certificate expand_certificate(const Catalog& catalog, const Certificate& cert, MoveId derived,
                               const Certificate& expansion) {
  Certificate out;
  out.problem = cert.problem;
  out.problem.allowed.erase(derived);
  for (MoveId id : expansion.problem.allowed) out.problem.allowed.insert(id);

  CanonicalForm cur = canonicalize(cert.problem.source);
  int max_seen = static_cast<int>(cur.diagram.crossing_count());
  for (const Step& step : cert.steps) {
    const MoveSchema& schema = catalog.schema(step.move);
    auto sites = find_matches(cur.diagram, schema, step.dir);
    if (step.site < 0 || step.site >= static_cast<int>(sites.size()))
      throw DiagramError("certificate does not replay; cannot expand");
    TangleDiagram next = apply_move(cur.diagram, schema, sites[step.site], step.dir);
    CanonicalForm next_form = canonicalize(next);

    if (!(step.move == derived)) {
      out.steps.push_back(step);
      cur = std::move(next_form);
      max_seen = std::max(max_seen, static_cast<int>(cur.diagram.crossing_count()));
      continue;
    }

    // Replace the derived-move step by its expansion, replayed in context:
    // each expansion state is glued into the hole the match cut out.
    const MatchSite& site = sites[step.site];
    const TangleDiagram& pattern = step.dir == Direction::Forward ? schema.lhs : schema.rhs;
    Certificate sub =
        step.dir == Direction::Forward ? expansion : invert_certificate(catalog, expansion);

    CanonicalForm sigma = canonicalize(sub.problem.source);
    CanonicalForm ctx_state = cur;
    for (const Step& sub_step : sub.steps) {
      const MoveSchema& sub_schema = catalog.schema(sub_step.move);
      auto sub_sites = find_matches(sigma.diagram, sub_schema, sub_step.dir);
      if (sub_step.site < 0 || sub_step.site >= static_cast<int>(sub_sites.size()))
        throw DiagramError("expansion does not replay; cannot expand");
      CanonicalForm sigma_next = canonicalize(
          apply_move(sigma.diagram, sub_schema, sub_sites[sub_step.site], sub_step.dir));
      CanonicalForm glued =
          canonicalize(detail::splice(cur.diagram, pattern, sigma_next.diagram, site));
      out.steps.push_back(
          matching_step(catalog, ctx_state.diagram, sub_step.move, sub_step.dir, glued.code));
      sigma = std::move(sigma_next);
      ctx_state = std::move(glued);
      max_seen = std::max(max_seen, static_cast<int>(ctx_state.diagram.crossing_count()));
    }
    if (ctx_state.code != next_form.code)
      throw DiagramError("expansion of " + to_string(derived) + " did not reproduce the step");
    cur = std::move(next_form);
    max_seen = std::max(max_seen, static_cast<int>(cur.diagram.crossing_count()));
  }
  out.problem.max_crossings = std::max(out.problem.max_crossings, max_seen);
  out.problem.max_depth = std::max<int>(out.problem.max_depth, static_cast<int>(out.steps.size()));
  return out;
}

std::vector<std::pair<MoveId, Certificate>> expand_to_base(
    const Catalog& catalog, const std::vector<std::pair<MoveId, Certificate>>& certs,
    const std::set<MoveId>& base) {
  std::map<MoveId, Certificate> flat;
  std::vector<std::pair<MoveId, Certificate>> out;
  for (const auto& [target, original] : certs) {
    Certificate cert = original;
    for (;;) {
      std::optional<MoveId> pending;
      for (const Step& s : cert.steps) {
        if (!base.count(s.move)) {
          pending = s.move;
          break;
        }
      }
      if (!pending) break;
      auto it = flat.find(*pending);
      if (it == flat.end())
        throw DiagramError("certificate for " + to_string(target) + " uses " +
                           to_string(*pending) + " before it was derived");
      cert = expand_certificate(catalog, cert, *pending, it->second);
    }
    cert.problem.allowed = base;
    flat[target] = cert;
    out.push_back({target, std::move(cert)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Manifests.
// ---------------------------------------------------------------------------

namespace {

MoveId mid(const char* s) { return *parse_move_id(s); }

std::set<MoveId> ids(std::initializer_list<const char*> names) {
  std::set<MoveId> out;
  for (const char* n : names) out.insert(mid(n));
  return out;
}

}  // namespace

std::vector<ManifestRow> default_manifest() {
  std::vector<ManifestRow> rows;
  rows.push_back({mid("V2b"), ids({"V1a", "V2a", "V3a"}), {}, {}});
  rows.push_back({mid("V1b"), ids({"V1a", "V2b"}), {}, {}});
  rows.push_back({mid("V2c"), ids({"V1b", "V2a", "V3a"}), {}, {}});
  rows.push_back({mid("V3b"), ids({"V2b", "V2c", "V3a"}), {}, {}});
  rows.push_back({mid("V3c"), ids({"V2b", "V2c", "V3a"}), {}, {}});
  rows.push_back({mid("V3d"), ids({"V2b", "V2c", "V3a"}), {}, {}});
  rows.push_back({mid("V4a"), ids({"V2b", "V2c", "V4g"}), {}, {}});
  rows.push_back({mid("V4b"), ids({"V2a", "V4g"}), {}, {}});
  rows.push_back({mid("V4c"), ids({"C2a", "C2b", "V4g"}), {}, {}});
  rows.push_back({mid("V4d"), ids({"V2a", "V4c"}), {}, {}});
  rows.push_back({mid("V4e"), ids({"C2c", "C2d", "V4b"}), {}, {}});
  rows.push_back({mid("V4f"), ids({"V2a", "V4d"}), {}, {}});
  rows.push_back({mid("V4h"), ids({"V2a", "V4g"}), {}, {}});
  return rows;
}

std::vector<ManifestRow> parse_manifest(const std::string& text) {
  std::vector<ManifestRow> rows;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    if (tok != "derive")
      throw DiagramError("manifest line " + std::to_string(lineno) + ": expected 'derive'");
    std::string target_tok, from_tok, list_tok;
    if (!(ls >> target_tok >> from_tok) || from_tok != "from")
      throw DiagramError("manifest line " + std::to_string(lineno) +
                         ": expected 'derive <id> from <ids>'");
    auto target = parse_move_id(target_tok);
    if (!target)
      throw DiagramError("manifest line " + std::to_string(lineno) + ": bad move id '" +
                         target_tok + "'");
    if (!(ls >> list_tok))
      throw DiagramError("manifest line " + std::to_string(lineno) + ": missing allowed list");
    ManifestRow row{*target, {}, {}, {}};
    std::istringstream items(list_tok);
    std::string item;
    while (std::getline(items, item, ',')) {
      auto id = parse_move_id(item);
      if (!id)
        throw DiagramError("manifest line " + std::to_string(lineno) + ": bad move id '" + item +
                           "'");
      row.allowed.insert(*id);
    }
    std::string opt;
    while (ls >> opt) {
      if (opt.rfind("max_crossings=", 0) == 0)
        row.max_crossings = std::stoi(opt.substr(14));
      else if (opt.rfind("max_depth=", 0) == 0)
        row.max_depth = std::stoi(opt.substr(10));
      else
        throw DiagramError("manifest line " + std::to_string(lineno) + ": unknown option '" + opt +
                           "'");
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

int default_max_crossings(const Catalog& catalog, MoveId target) {
  return static_cast<int>(catalog.schema(target).lhs.crossing_count()) + 6;
}

DerivationProblem problem_for_row(const Catalog& catalog, const ManifestRow& row) {
  const MoveSchema& schema = catalog.schema(row.target);
  DerivationProblem p;
  p.source = schema.lhs;
  p.target = schema.rhs;
  p.allowed = row.allowed;
  p.max_crossings = row.max_crossings.value_or(default_max_crossings(catalog, row.target));
  p.max_depth = row.max_depth.value_or(24);
  return p;
}

bool ManifestReport::all_pass() const {
  for (const ManifestRowResult& r : rows)
    if (!r.pass()) return false;
  return !rows.empty();
}

ManifestReport run_lemma_manifest(const Catalog& catalog, const std::vector<ManifestRow>& rows,
                                  const SearchOptions& options) {
  ManifestReport report;
  for (const ManifestRow& row : rows) {
    ManifestRowResult r{row, {}, false};
    DerivationProblem p = problem_for_row(catalog, row);
    r.result = search(catalog, p, options);
    if (r.result.found())
      r.certificate_ok = check_certificate(catalog, *r.result.certificate).ok;
    report.rows.push_back(std::move(r));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Certificate files.
// ---------------------------------------------------------------------------

std::string serialize_certificate(const Certificate& cert, MoveId target) {
  std::string out = "problem " + to_string(target) + " from ";
  bool first = true;
  for (MoveId id : cert.problem.allowed) {
    if (!first) out += ',';
    first = false;
    out += to_string(id);
  }
  out += "\nbounds " + std::to_string(cert.problem.max_crossings) + " " +
         std::to_string(cert.problem.max_depth) + "\n";
  for (const Step& s : cert.steps)
    out +=
        "step " + to_string(s.move) + " " + to_string(s.dir) + " " + std::to_string(s.site) + "\n";
  return out;
}

Certificate parse_certificate(const Catalog& catalog, const std::string& text,
                              MoveId* target_out) {
  Certificate cert;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool have_problem = false;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok[0] == '#') continue;
    if (tok == "problem") {
      std::string target_tok, from_tok, list_tok;
      if (!(ls >> target_tok >> from_tok >> list_tok) || from_tok != "from")
        throw DiagramError("certificate line " + std::to_string(lineno) + ": bad header");
      auto target = parse_move_id(target_tok);
      if (!target)
        throw DiagramError("certificate line " + std::to_string(lineno) + ": bad target id");
      const MoveSchema& schema = catalog.schema(*target);
      cert.problem.source = schema.lhs;
      cert.problem.target = schema.rhs;
      cert.problem.max_crossings = default_max_crossings(catalog, *target);
      std::istringstream items(list_tok);
      std::string item;
      while (std::getline(items, item, ',')) {
        auto id = parse_move_id(item);
        if (!id)
          throw DiagramError("certificate line " + std::to_string(lineno) + ": bad move id '" +
                             item + "'");
        cert.problem.allowed.insert(*id);
      }
      if (target_out) *target_out = *target;
      have_problem = true;
    } else if (tok == "bounds") {
      int mc, md;
      if (!(ls >> mc >> md))
        throw DiagramError("certificate line " + std::to_string(lineno) + ": bad bounds");
      cert.problem.max_crossings = mc;
      cert.problem.max_depth = md;
    } else if (tok == "step") {
      std::string move_tok, dir_tok;
      int site;
      if (!(ls >> move_tok >> dir_tok >> site))
        throw DiagramError("certificate line " + std::to_string(lineno) + ": bad step");
      auto move = parse_move_id(move_tok);
      auto dir = parse_direction(dir_tok);
      if (!move || !dir)
        throw DiagramError("certificate line " + std::to_string(lineno) + ": bad step");
      cert.steps.push_back({*move, *dir, site});
    } else {
      throw DiagramError("certificate line " + std::to_string(lineno) + ": unknown directive '" +
                         tok + "'");
    }
  }
  if (!have_problem) throw DiagramError("certificate has no problem header");
  return cert;
}

}  // namespace vkm
