#include "secgraph/access.hpp"

#include <array>

namespace secgraph {

namespace {

constexpr std::array<std::pair<Permission, const char*>, 12> kPermissionNames{{
    {Permission::ViewBasicProfile, "ViewBasicProfile"},
    {Permission::ViewFullProfile, "ViewFullProfile"},
    {Permission::ViewPhotos, "ViewPhotos"},
    {Permission::ViewContactInfo, "ViewContactInfo"},
    {Permission::ViewTravelSchedule, "ViewTravelSchedule"},
    {Permission::PostComment, "PostComment"},
    {Permission::ReadArticles, "ReadArticles"},
    {Permission::WriteArticles, "WriteArticles"},
    {Permission::DownloadArticles, "DownloadArticles"},
    {Permission::PostArticles, "PostArticles"},
    {Permission::ViewMemberList, "ViewMemberList"},
    {Permission::BogusPage, "BogusPage"},
}};

}  // namespace

const char* permission_name(Permission p) {
  for (const auto& [value, name] : kPermissionNames)
    if (value == p) return name;
  return "?";
}

Permission permission_from_name(const std::string& name) {
  for (const auto& [value, n] : kPermissionNames)
    if (name == n) return value;
  fail(Errc::malformed_input, "unknown permission '" + name + "'");
}

const PermissionSet& full_permissions() {
  static const PermissionSet all = [] {
    PermissionSet s;
    for (const auto& [value, name] : kPermissionNames)
      if (value != Permission::BogusPage) s.insert(value);
    return s;
  }();
  return all;
}

void validate_permission_set(const PermissionSet& set) {
  if (set.count(Permission::BogusPage) && set.size() > 1)
    fail(Errc::invalid_permission_set, "BogusPage cannot be combined with other permissions");
}

const PermissionSet& Policy::guest_restricted() {
  static const PermissionSet restricted{Permission::ViewMemberList, Permission::ViewContactInfo,
                                        Permission::ViewFullProfile};
  return restricted;
}

void Policy::set_guest(PermissionSet permissions) {
  validate_permission_set(permissions);
  if (!allow_sensitive_guest_) {
    for (const auto p : guest_restricted())
      if (permissions.count(p))
        fail(Errc::invalid_permission_set,
             std::string("guest set may not contain ") + permission_name(p));
  }
  guest_ = std::move(permissions);
}

void Policy::set_entry(const Graph& graph, const GroupKey& group, PermissionSet permissions) {
  validate_permission_set(permissions);
  const User& u = graph.user(owner_);
  if (!u.find_group(group))
    fail(Errc::unknown_group, "'" + owner_ + "' has no group '" + group.str() + "'");
  entries_[group] = std::move(permissions);
}

PermissionSet evaluate_access(const Graph& graph, const Policy& policy, const UserId& owner,
                              const UserId& viewer) {
  if (policy.owner() != owner)
    fail(Errc::validation_error, "policy belongs to '" + policy.owner() + "', not '" + owner + "'");
  graph.user(owner);
  if (viewer == owner) return full_permissions();

  const auto edge = graph.edge_between(owner, viewer);
  if (!edge) return policy.guest();

  const GroupKey& owner_group = graph.secretary(edge->endpoint_of(owner)).private_tag;
  const auto it = policy.entries().find(owner_group);
  return it == policy.entries().end() ? PermissionSet{} : it->second;  // deny by default
}

std::set<UserId> visible_members(const Graph& graph, const Policy& policy, const UserId& owner,
                                 const UserId& viewer) {
  graph.user(owner);
  std::set<UserId> members;
  if (viewer == owner) {
    // The owner's own page lists everyone connected to it.
    for (const auto& e : graph.edges())
      if (e.touches_user(owner))
        members.insert(e.a.owner == owner ? e.b.owner : e.a.owner);
    return members;
  }

  const PermissionSet granted = evaluate_access(graph, policy, owner, viewer);
  if (!granted.count(Permission::ViewMemberList)) return members;

  const auto own_edge = graph.edge_between(owner, viewer);
  if (!own_edge) return members;
  const GroupKey& viewer_group = graph.secretary(own_edge->endpoint_of(owner)).private_tag;

  for (const auto& e : graph.edges()) {
    if (!e.touches_user(owner)) continue;
    const UserId& other = e.a.owner == owner ? e.b.owner : e.a.owner;
    if (other == viewer) continue;
    if (graph.secretary(e.endpoint_of(owner)).private_tag == viewer_group) members.insert(other);
  }
  return members;
}

void promote(Graph& graph, const UserId& owner, const UserId& viewer, const GroupKey& new_group) {
  graph.reassign_connection(owner, viewer, new_group);
}

}  // namespace secgraph
