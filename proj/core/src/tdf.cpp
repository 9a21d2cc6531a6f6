#include "vkm/tdf.hpp"

#include <map>
#include <sstream>
#include <vector>

#include "vkm/canonical.hpp"

namespace vkm {

namespace {

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) {
    if (tok[0] == '#') break;
    out.push_back(tok);
  }
  return out;
}

struct EndSpec {
  std::string id;
  int slot;
};

EndSpec parse_end(const std::string& tok, int line) {
  auto dot = tok.rfind('.');
  if (dot == std::string::npos || dot == 0 || dot + 1 == tok.size())
    throw TdfSyntaxError(line, "expected <node>.<slot>, got '" + tok + "'");
  std::string id = tok.substr(0, dot);
  std::string slot_str = tok.substr(dot + 1);
  if (slot_str.size() != 1 || slot_str[0] < '0' || slot_str[0] > '9')
    throw TdfSyntaxError(line, "bad slot in '" + tok + "'");
  return {id, slot_str[0] - '0'};
}

}  // namespace

TangleDiagram parse_tdf(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  int lineno = 0;

  bool have_header = false;
  bool closed = false;
  int boundary_count = 0;

  DiagramBuilder b;
  std::map<std::string, NodeId> ids;
  std::map<std::string, int> kind_arity;
  std::vector<NodeId> boundary_order;
  bool have_boundary_line = false;

  auto node_of = [&](const std::string& id, int line) -> NodeId {
    auto it = ids.find(id);
    if (it == ids.end()) throw TdfSyntaxError(line, "unknown node id '" + id + "'");
    return it->second;
  };

  while (std::getline(in, line)) {
    ++lineno;
    std::vector<std::string> tok = tokenize(line);
    if (tok.empty()) continue;

    if (!have_header) {
      if (tok[0] == "closed" && tok.size() == 1) {
        closed = true;
      } else if (tok[0] == "tangle" && tok.size() == 2) {
        try {
          boundary_count = std::stoi(tok[1]);
        } catch (...) {
          throw TdfSyntaxError(lineno, "bad boundary count '" + tok[1] + "'");
        }
        if (boundary_count <= 0) throw TdfSyntaxError(lineno, "boundary count must be positive");
      } else {
        throw TdfSyntaxError(lineno, "expected 'closed' or 'tangle <n>'");
      }
      have_header = true;
      continue;
    }

    const std::string& op = tok[0];
    if (op == "x" || op == "v" || op == "b") {
      if (tok.size() < 2) throw TdfSyntaxError(lineno, "missing node id");
      const std::string& id = tok[1];
      if (ids.count(id)) throw TdfSyntaxError(lineno, "duplicate node id '" + id + "'");
      if (op == "x") {
        if (tok.size() != 3 || (tok[2] != "over=02" && tok[2] != "over=13"))
          throw TdfSyntaxError(lineno, "classical node needs over=02|13");
        ids[id] = b.add_classical(tok[2] == "over=02" ? OverDiagonal::Slots02
                                                      : OverDiagonal::Slots13);
        kind_arity[id] = 4;
      } else if (op == "v") {
        if (tok.size() != 2) throw TdfSyntaxError(lineno, "virtual node takes only an id");
        ids[id] = b.add_virtual();
        kind_arity[id] = 4;
      } else {
        if (tok.size() != 2) throw TdfSyntaxError(lineno, "boundary node takes only an id");
        ids[id] = b.add_boundary();
        kind_arity[id] = 1;
      }
    } else if (op == "e") {
      if (tok.size() != 3) throw TdfSyntaxError(lineno, "edge needs two endpoints");
      EndSpec from = parse_end(tok[1], lineno);
      EndSpec to = parse_end(tok[2], lineno);
      NodeId fn = node_of(from.id, lineno);
      NodeId tn = node_of(to.id, lineno);
      if (from.slot >= kind_arity[from.id])
        throw TdfSyntaxError(lineno, "slot " + std::to_string(from.slot) + " out of range for '" +
                                         from.id + "'");
      if (to.slot >= kind_arity[to.id])
        throw TdfSyntaxError(lineno, "slot " + std::to_string(to.slot) + " out of range for '" +
                                         to.id + "'");
      b.connect(fn, from.slot, tn, to.slot);
    } else if (op == "loop") {
      if (tok.size() != 1) throw TdfSyntaxError(lineno, "loop takes no arguments");
      b.add_free_loops(1);
    } else if (op == "boundary") {
      if (closed) throw TdfSyntaxError(lineno, "closed diagrams have no boundary line");
      if (have_boundary_line) throw TdfSyntaxError(lineno, "duplicate boundary line");
      have_boundary_line = true;
      for (std::size_t i = 1; i < tok.size(); ++i)
        boundary_order.push_back(node_of(tok[i], lineno));
      if (static_cast<int>(boundary_order.size()) != boundary_count)
        throw TdfSyntaxError(lineno, "boundary line lists " +
                                         std::to_string(boundary_order.size()) + " points, header says " +
                                         std::to_string(boundary_count));
    } else {
      throw TdfSyntaxError(lineno, "unknown directive '" + op + "'");
    }
  }

  if (!have_header) throw TdfSyntaxError(lineno, "empty document");
  if (!closed && !have_boundary_line)
    throw TdfSyntaxError(lineno, "tangle document missing boundary line");

  b.set_boundary(std::move(boundary_order));
  TangleDiagram d = std::move(b).build_unchecked();
  ValidationReport report = validate(d);
  if (!report.ok()) {
    std::string msg = "document is not a valid diagram:";
    for (const Violation& v : report.violations) msg += " [" + v.rule + "] " + v.detail;
    throw TdfValidationError(msg);
  }
  return d;
}

std::string serialize_tdf(const TangleDiagram& d) {
  CanonicalForm canon = canonicalize(d);
  const TangleDiagram& f = canon.diagram;
  std::string out;
  if (f.closed())
    out = "closed\n";
  else
    out = "tangle " + std::to_string(f.boundary().size()) + "\n";
  for (NodeId n = 0; n < f.node_count(); ++n) {
    const Node& nd = f.node(n);
    switch (nd.kind) {
      case NodeKind::Classical:
        out += "x " + std::to_string(n) +
               (nd.over == OverDiagonal::Slots02 ? " over=02\n" : " over=13\n");
        break;
      case NodeKind::Virtual:
        out += "v " + std::to_string(n) + "\n";
        break;
      case NodeKind::Boundary:
        out += "b " + std::to_string(n) + "\n";
        break;
    }
  }
  for (const Edge& e : f.edges()) {
    out += "e " + std::to_string(e.from.node) + "." + std::to_string(e.from.slot) + " " +
           std::to_string(e.to.node) + "." + std::to_string(e.to.slot) + "\n";
  }
  for (int i = 0; i < f.free_loops(); ++i) out += "loop\n";
  if (!f.closed()) {
    out += "boundary";
    for (NodeId b : f.boundary()) out += " " + std::to_string(b);
    out += "\n";
  }
  return out;
}

}  // namespace vkm
