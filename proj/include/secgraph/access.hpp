#pragma once

// Relationship-grained access control. A policy maps an owner's relationship
// groups to permission sets; what a viewer sees is decided entirely by the
// owner-side private tag of the connecting edge. Policies are immutable
// values once built; evaluation is pure.

#include <map>
#include <set>
#include <string>

#include "secgraph/graph.hpp"

namespace secgraph {

enum class Permission {
  ViewBasicProfile,
  ViewFullProfile,
  ViewPhotos,
  ViewContactInfo,
  ViewTravelSchedule,
  PostComment,
  ReadArticles,
  WriteArticles,
  DownloadArticles,
  PostArticles,
  ViewMemberList,
  BogusPage,  // exclusive: a set containing BogusPage contains nothing else
};

using PermissionSet = std::set<Permission>;

const char* permission_name(Permission p);
Permission permission_from_name(const std::string& name);

/// Every permission except BogusPage.
const PermissionSet& full_permissions();

/// Throws InvalidPermissionSet when BogusPage is mixed with anything else.
void validate_permission_set(const PermissionSet& set);

class Policy {
 public:
  explicit Policy(UserId owner, bool allow_sensitive_guest = false)
      : owner_(std::move(owner)), allow_sensitive_guest_(allow_sensitive_guest) {}

  const UserId& owner() const { return owner_; }
  const PermissionSet& guest() const { return guest_; }
  const std::map<GroupKey, PermissionSet>& entries() const { return entries_; }
  bool allow_sensitive_guest() const { return allow_sensitive_guest_; }

  /// Guests (no connecting edge) default to a restricted surface: member
  /// lists, contact info and the full profile stay hidden unless the policy
  /// was built with allow_sensitive_guest.
  void set_guest(PermissionSet permissions);

  /// Replaces the entry for one group atomically. The group must exist on
  /// the owner in the given graph.
  void set_entry(const Graph& graph, const GroupKey& group, PermissionSet permissions);

  static const PermissionSet& guest_restricted();

 private:
  UserId owner_;
  bool allow_sensitive_guest_;
  PermissionSet guest_;
  std::map<GroupKey, PermissionSet> entries_;
};

/// What `viewer` may see on `owner`'s page. No connecting edge: the guest
/// set. Connected: the entry for the owner-side group of the edge, or
/// nothing when the owner never granted that group anything. Owners see
/// everything except BogusPage on their own page.
PermissionSet evaluate_access(const Graph& graph, const Policy& policy, const UserId& owner,
                              const UserId& viewer);

/// Member-list visibility, scoped to the viewer's own group: a viewer
/// holding ViewMemberList sees exactly the other users connected to the
/// owner through the same group key.
std::set<UserId> visible_members(const Graph& graph, const Policy& policy, const UserId& owner,
                                 const UserId& viewer);

/// Gradual promotion: moves the owner-side endpoint of the owner<->viewer
/// edge into new_group. The viewer's own choice is untouched and the viewer
/// is not notified.
void promote(Graph& graph, const UserId& owner, const UserId& viewer, const GroupKey& new_group);

}  // namespace secgraph
