#pragma once

// Canonical JSON forms. Object keys are emitted sorted and every collection
// is written in a fixed order, so equal values serialize to identical bytes.

#include <string>

#include <nlohmann/json.hpp>

#include "secgraph/access.hpp"
#include "secgraph/graph.hpp"

namespace secgraph {

inline constexpr int kFormatVersion = 1;

nlohmann::json graph_to_json(const Graph& graph);
Graph graph_from_json(const nlohmann::json& doc);

nlohmann::json public_view_to_json(const PublicView& view);

nlohmann::json policy_to_json(const Policy& policy);
Policy policy_from_json(const Graph& graph, const nlohmann::json& doc);

/// Canonical bytes for any of the document forms above (sorted keys,
/// two-space indent, trailing newline).
std::string canonical_dump(const nlohmann::json& doc);

std::string serialize_graph(const Graph& graph);
Graph deserialize_graph(const std::string& bytes);
std::string serialize_public_view(const PublicView& view);

}  // namespace secgraph
