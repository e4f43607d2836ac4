#include "secgraph/serialize.hpp"

#include <set>

namespace secgraph {

namespace {

using nlohmann::json;

const json& member(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) fail(Errc::malformed_input, std::string("missing key '") + key + "'");
  return *it;
}

void expect_keys(const json& doc, const std::set<std::string>& allowed, const char* what) {
  if (!doc.is_object()) fail(Errc::malformed_input, std::string(what) + " must be an object");
  for (const auto& [key, value] : doc.items())
    if (!allowed.count(key))
      fail(Errc::malformed_input, std::string("unexpected key '") + key + "' in " + what);
}

template <typename T>
T as(const json& value, const char* what) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    fail(Errc::malformed_input, std::string("bad value for ") + what);
  }
}

void check_version(const json& doc) {
  const json& v = member(doc, "version");
  if (!v.is_number_integer() || v.get<int>() != kFormatVersion)
    fail(Errc::version_mismatch, "expected format version " + std::to_string(kFormatVersion));
}

json edge_to_json(const Edge& e) { return json{{"a", e.a.str()}, {"b", e.b.str()}}; }

Edge edge_from_json(const json& doc) {
  expect_keys(doc, {"a", "b"}, "edge");
  return Edge(SnodeId::parse(as<std::string>(member(doc, "a"), "edge endpoint")),
              SnodeId::parse(as<std::string>(member(doc, "b"), "edge endpoint")));
}

}  // namespace

std::string canonical_dump(const json& doc) { return doc.dump(2) + "\n"; }

json graph_to_json(const Graph& graph) {
  json users = json::array();
  for (const auto& [uid, user] : graph.users()) {
    json groups = json::array();
    for (const auto& group : user.groups) {
      json members = json::array();
      for (const auto& m : group.members) members.push_back(m.str());
      json g{{"label", group.key.label},
             {"instance", group.key.instance},
             {"capacity", group.capacity()},
             {"members", members}};
      if (group.key.subtype) g["subtype"] = *group.key.subtype;
      groups.push_back(std::move(g));
    }
    users.push_back(json{{"id", uid},
                         {"threshold", user.threshold},
                         {"type_count", user.type_count()},
                         {"snode_count", user.snode_count()},
                         {"groups", groups}});
  }

  json secretaries = json::array();
  for (const auto& [id, snode] : graph.secretaries()) {
    secretaries.push_back(json{{"id", id.str()},
                               {"owner", snode.owner},
                               {"public_tag", snode.public_tag},
                               {"group", snode.private_tag.str()},
                               {"creation_index", snode.creation_index}});
  }

  json edges = json::array();
  for (const auto& e : graph.edges()) edges.push_back(edge_to_json(e));

  json pending = json::array();
  for (const auto& [id, req] : graph.pending()) {
    pending.push_back(json{{"id", id},
                           {"requester", req.requester},
                           {"group", req.requester_group.str()},
                           {"target", req.target}});
  }

  return json{{"version", kFormatVersion}, {"seed", graph.seed()},  {"users", users},
              {"secretaries", secretaries}, {"edges", edges},       {"pending", pending}};
}

Graph graph_from_json(const json& doc) {
  expect_keys(doc, {"version", "seed", "users", "secretaries", "edges", "pending"}, "graph");
  check_version(doc);
  const auto seed = as<std::uint64_t>(member(doc, "seed"), "seed");

  std::map<SnodeId, Secretary> secretaries;
  for (const json& s : member(doc, "secretaries")) {
    expect_keys(s, {"id", "owner", "public_tag", "group", "creation_index"}, "secretary");
    Secretary snode;
    snode.id = SnodeId::parse(as<std::string>(member(s, "id"), "snode id"));
    snode.owner = as<std::string>(member(s, "owner"), "owner");
    snode.public_tag = as<std::string>(member(s, "public_tag"), "public_tag");
    snode.private_tag = GroupKey::parse(as<std::string>(member(s, "group"), "group"));
    snode.creation_index = as<std::uint32_t>(member(s, "creation_index"), "creation_index");
    if (!secretaries.emplace(snode.id, std::move(snode)).second)
      fail(Errc::malformed_input, "duplicate secretary");
  }

  std::map<UserId, User> users;
  for (const json& u : member(doc, "users")) {
    expect_keys(u, {"id", "threshold", "type_count", "snode_count", "groups"}, "user");
    User user;
    user.id = as<std::string>(member(u, "id"), "user id");
    user.threshold = as<std::uint32_t>(member(u, "threshold"), "threshold");
    for (const json& g : member(u, "groups")) {
      expect_keys(g, {"label", "instance", "capacity", "members", "subtype"}, "group");
      RelationshipGroup group;
      group.key.label = as<std::string>(member(g, "label"), "label");
      group.key.instance = as<std::uint32_t>(member(g, "instance"), "instance");
      if (g.contains("subtype")) group.key.subtype = as<std::string>(g["subtype"], "subtype");
      for (const json& m : member(g, "members"))
        group.members.push_back(SnodeId::parse(as<std::string>(m, "member")));
      if (group.capacity() != as<std::uint32_t>(member(g, "capacity"), "capacity"))
        fail(Errc::malformed_input, "group capacity disagrees with its member list");
      user.groups.push_back(std::move(group));
    }
    if (user.type_count() != as<std::uint32_t>(member(u, "type_count"), "type_count") ||
        user.snode_count() != as<std::uint32_t>(member(u, "snode_count"), "snode_count"))
      fail(Errc::malformed_input, "user counts disagree with its groups");
    if (!users.emplace(user.id, std::move(user)).second)
      fail(Errc::malformed_input, "duplicate user");
  }

  std::set<Edge> edges;
  for (const json& e : member(doc, "edges"))
    if (!edges.insert(edge_from_json(e)).second) fail(Errc::malformed_input, "duplicate edge");

  std::map<std::uint64_t, PendingRequest> pending;
  for (const json& r : member(doc, "pending")) {
    expect_keys(r, {"id", "requester", "group", "target"}, "pending request");
    PendingRequest req;
    req.id = as<std::uint64_t>(member(r, "id"), "request id");
    req.requester = as<std::string>(member(r, "requester"), "requester");
    req.requester_group = GroupKey::parse(as<std::string>(member(r, "group"), "request group"));
    req.target = as<std::string>(member(r, "target"), "target");
    if (!pending.emplace(req.id, std::move(req)).second)
      fail(Errc::malformed_input, "duplicate request id");
  }

  return Graph::from_parts(seed, std::move(users), std::move(secretaries), std::move(edges),
                           std::move(pending));
}

json public_view_to_json(const PublicView& view) {
  json users = json::array();
  for (const auto& u : view.users) users.push_back(u);
  json snodes = json::array();
  for (const auto& [id, snode] : view.snodes)
    snodes.push_back(json{{"id", id.str()}, {"owner", snode.owner}, {"public_tag", snode.public_tag}});
  json edges = json::array();
  for (const auto& e : view.edges) edges.push_back(edge_to_json(e));
  return json{{"version", kFormatVersion}, {"users", users}, {"snodes", snodes}, {"edges", edges}};
}

json policy_to_json(const Policy& policy) {
  json guest = json::array();
  for (const auto p : policy.guest()) guest.push_back(permission_name(p));
  json entries = json::object();
  for (const auto& [key, permissions] : policy.entries()) {
    json set = json::array();
    for (const auto p : permissions) set.push_back(permission_name(p));
    entries[key.str()] = std::move(set);
  }
  json doc{{"owner", policy.owner()}, {"guest", guest}, {"entries", entries}};
  if (policy.allow_sensitive_guest()) doc["allow_sensitive_guest"] = true;
  return doc;
}

Policy policy_from_json(const Graph& graph, const json& doc) {
  expect_keys(doc, {"owner", "guest", "entries", "allow_sensitive_guest"}, "policy");
  const bool sensitive =
      doc.contains("allow_sensitive_guest") && as<bool>(doc["allow_sensitive_guest"], "flag");
  Policy policy(as<std::string>(member(doc, "owner"), "owner"), sensitive);

  PermissionSet guest;
  for (const json& p : member(doc, "guest"))
    guest.insert(permission_from_name(as<std::string>(p, "permission")));
  policy.set_guest(std::move(guest));

  for (const auto& [key, value] : member(doc, "entries").items()) {
    PermissionSet permissions;
    for (const json& p : value)
      permissions.insert(permission_from_name(as<std::string>(p, "permission")));
    policy.set_entry(graph, GroupKey::parse(key), std::move(permissions));
  }
  return policy;
}

std::string serialize_graph(const Graph& graph) { return canonical_dump(graph_to_json(graph)); }

Graph deserialize_graph(const std::string& bytes) {
  json doc;
  try {
    doc = json::parse(bytes);
  } catch (const json::exception& e) {
    fail(Errc::malformed_input, e.what());
  }
  return graph_from_json(doc);
}

std::string serialize_public_view(const PublicView& view) {
  return canonical_dump(public_view_to_json(view));
}

}  // namespace secgraph
