#include "secgraph/dot.hpp"

#include <sstream>

namespace secgraph {

namespace {

std::string escaped(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (const char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string export_dot(const PublicView& view) {
  std::ostringstream out;
  out << "graph public_view {\n";
  std::size_t cluster = 0;
  for (const auto& user : view.users) {
    out << "  subgraph cluster_" << cluster++ << " {\n";
    out << "    label=\"" << escaped(user) << "\";\n";
    for (const auto& [id, snode] : view.snodes) {
      if (snode.owner != user) continue;
      out << "    \"" << escaped(id.str()) << "\" [label=\"" << escaped(snode.public_tag)
          << "\"];\n";
    }
    out << "  }\n";
  }
  for (const auto& e : view.edges)
    out << "  \"" << escaped(e.a.str()) << "\" -- \"" << escaped(e.b.str()) << "\";\n";
  out << "}\n";
  return out.str();
}

}  // namespace secgraph
