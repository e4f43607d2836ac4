#pragma once

#include <string>

#include "secgraph/graph.hpp"

namespace secgraph {

/// Graphviz rendering of a public view: one cluster per user holding its
/// snodes labeled by public tag only, one line per edge. Emits exactly one
/// node line per snode and one edge line per edge.
std::string export_dot(const PublicView& view);

}  // namespace secgraph
