#pragma once

#include "eqps/graph.hpp"

namespace eqps {

/// Bundled desk-scale fixtures:
///   TRIV_SMOOTH   one exceptional component, trivial group, divisorial mark
///   CUSP23_DIV    minimal resolution of the (2,3) cusp, divisorial mark
///   CUSP23_CURVE  the cusp branch itself as a curve valuation
///   Z2SCALAR      Z/2 acting by the scalar -1, one component, divisorial
///   Z2AXES        Z/2 fixing two axes, two components, divisorial mark
///   Z2SWAP        Z/2 swapping the axes, orbit of a line as one curve mark
///   HOPF          two smooth transversal branches, trivial group
std::vector<std::string> corpus_names();
EquivariantResolutionGraph corpus_graph(const std::string& name);

} // namespace eqps
