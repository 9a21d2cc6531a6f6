#pragma once

#include <string>

#include "vkm/diagram.hpp"

namespace vkm {

// A diagram relabeled into its canonical presentation plus the code string.
// The code is a complete, relabel-invariant fingerprint: equal codes mean
// equal canonical forms (identical node/edge data), and the form is what
// deterministic site ordering is defined against.
struct CanonicalForm {
  TangleDiagram diagram;
  std::string code;
};

// Tangles: one breadth-first traversal seeded at boundary point 0 (the whole
// boundary enters the queue in disk order), children visited in rotation
// order from the arrival slot. Closed diagrams: minimum code over every
// starting edge end and both traversal chiralities on the sphere (the flipped
// traversal reverses rotation order and swaps over/under, i.e. the diagram
// seen from the far side of the sphere; a true mirror keeps a distinct code).
// Components not reachable from the boundary are canonicalized on their own
// roots and appended in sorted order. Throws InvalidDiagramError.
CanonicalForm canonicalize(const TangleDiagram& d);

std::string canonical_code(const TangleDiagram& d);

// Rebuilds the diagram a code describes (codes are complete serializations).
// Inverse of canonicalize on canonical forms. Throws DiagramError on
// malformed input.
TangleDiagram diagram_from_code(const std::string& code);

// Code equality on canonical forms. Tangles must agree on the boundary
// signature first; otherwise SignatureMismatchError.
bool is_equivalent(const TangleDiagram& a, const TangleDiagram& b);

}  // namespace vkm
