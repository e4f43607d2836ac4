#pragma once

// Secretary-pool relationship graph.
//
// Every user fronts its connections with a pool of secretary nodes (snodes).
// All snodes of a user carry one uniform public tag; the relationship type a
// snode actually serves is recorded only in its private tag. Edges connect
// snodes of distinct users, so the published graph reveals who is connected
// but not how the owners classify the connection.
//
// Mutating operations require exclusive access (single writer). Query results
// and PublicView are plain values, safe to read from any number of threads.

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "secgraph/errors.hpp"

namespace secgraph {

using UserId = std::string;

inline constexpr char kDefaultPublicTag[] = "friend";

/// Public identifier of a secretary node, unique per owner. The index is
/// drawn from a seeded permutation at setup so id order carries no
/// information about the owner's group layout.
struct SnodeId {
  UserId owner;
  std::uint32_t index = 0;

  auto operator<=>(const SnodeId&) const = default;

  std::string str() const;                        // "<owner>#<index>"
  static SnodeId parse(const std::string& text);  // inverse of str()
};

/// Names one relationship group of a user: type label, instance number and
/// an optional subtype refinement ("friend#2", "friend#1/close").
struct GroupKey {
  std::string label;
  std::uint32_t instance = 1;
  std::optional<std::string> subtype;

  auto operator<=>(const GroupKey&) const = default;

  std::string str() const;                        // "label#instance[/subtype]"
  static GroupKey parse(const std::string& text);
};

struct Secretary {
  SnodeId id;
  UserId owner;
  std::string public_tag;
  GroupKey private_tag;
  // Tie-break order for connection assignment. Internal: it follows the
  // group layout, so it never appears in the public view.
  std::uint32_t creation_index = 0;
};

/// Undirected edge between secretaries of two distinct users. Endpoints are
/// stored in canonical (sorted) order, so (a,b) and (b,a) compare equal.
struct Edge {
  SnodeId a, b;

  Edge() = default;
  Edge(SnodeId x, SnodeId y);

  auto operator<=>(const Edge&) const = default;
  bool touches_user(const UserId& u) const { return a.owner == u || b.owner == u; }
  const SnodeId& endpoint_of(const UserId& u) const;
};

struct RelationshipGroup {
  GroupKey key;
  std::vector<SnodeId> members;  // kept sorted by creation_index

  std::uint32_t capacity() const { return static_cast<std::uint32_t>(members.size()); }
};

struct User {
  UserId id;
  std::uint32_t threshold = 0;
  std::vector<RelationshipGroup> groups;  // setup order

  std::uint32_t snode_count() const;
  std::uint32_t type_count() const;  // distinct type labels
  const RelationshipGroup* find_group(const GroupKey& key) const;
  RelationshipGroup* find_group(const GroupKey& key);
};

struct PendingRequest {
  std::uint64_t id = 0;
  UserId requester;
  GroupKey requester_group;  // the requester's choice; never shown to the target
  UserId target;
};

struct PublicSnode {
  UserId owner;
  std::string public_tag;
  bool operator==(const PublicSnode&) const = default;
};

/// Adversary-visible projection: users, snodes with public tags only, edges.
/// Carries no group, private-tag, subtype, policy or pending-request data.
struct PublicView {
  std::set<UserId> users;
  std::map<SnodeId, PublicSnode> snodes;
  std::set<Edge> edges;
  bool operator==(const PublicView&) const = default;
};

/// One group entry for advanced setup.
struct AdvancedGroupSpec {
  std::string label;
  std::uint32_t instance = 1;
  std::uint32_t capacity = 0;
  std::optional<std::string> subtype;
};

class Graph {
 public:
  explicit Graph(std::uint64_t seed = 0) : seed_(seed) {}

  // --- construction schemes ---

  /// Creates a user with n snodes spread evenly over tau type labels:
  /// floor(n/tau) each, remainder round-robined onto the first labels in the
  /// given order. Requires tau <= n <= threshold.
  const User& setup_naive(const UserId& user, std::uint32_t n, std::uint32_t tau,
                          std::uint32_t threshold, const std::vector<std::string>& type_labels,
                          std::uint64_t seed, const std::string& public_tag = kDefaultPublicTag);

  /// Creates a user with one group per spec entry; pool size is the capacity
  /// sum, which must not exceed threshold.
  const User& setup_advanced(const UserId& user, const std::vector<AdvancedGroupSpec>& spec,
                             std::uint32_t threshold, std::uint64_t seed,
                             const std::string& public_tag = kDefaultPublicTag);

  // --- two-phase connection ---

  /// Phase one: the requester picks its own relationship group for the
  /// prospective connection. The choice is stored but not disclosed to the
  /// target. At most one edge or pending request may exist per user pair.
  const PendingRequest& request_connection(const UserId& requester,
                                           const GroupKey& requester_group,
                                           const UserId& target);

  /// Phase two: the target agrees and picks its own group. Within each chosen
  /// group the least-loaded snode handles the new edge, ties broken by lowest
  /// creation index. Consumes the request.
  Edge accept_connection(std::uint64_t request_id, const GroupKey& target_group);

  // --- pool management ---

  /// Exchanges the private tags of two snodes of one user. Edges keep their
  /// endpoints; their relationship meaning moves with the tags.
  void swap_roles(const UserId& user, const SnodeId& a, const SnodeId& b);

  SnodeId add_secretary(const UserId& user, const GroupKey& group);

  /// Removes a jobless snode. Refused while the snode carries edges or is the
  /// last member of its group.
  void remove_secretary(const UserId& user, const SnodeId& snode);

  /// Moves the owner-side endpoint of the owner<->peer edge onto a
  /// least-loaded snode of new_group. The peer's endpoint is untouched.
  void reassign_connection(const UserId& owner, const UserId& peer, const GroupKey& new_group);

  PublicView export_public_view() const;

  // --- queries ---

  std::uint64_t seed() const { return seed_; }
  const std::map<UserId, User>& users() const { return users_; }
  const std::map<SnodeId, Secretary>& secretaries() const { return secretaries_; }
  const std::set<Edge>& edges() const { return edges_; }
  const std::map<std::uint64_t, PendingRequest>& pending() const { return pending_; }

  bool has_user(const UserId& id) const { return users_.count(id) != 0; }
  const User& user(const UserId& id) const;
  const Secretary& secretary(const SnodeId& id) const;
  std::uint32_t degree(const SnodeId& id) const;
  std::optional<Edge> edge_between(const UserId& u, const UserId& v) const;
  const PendingRequest* find_pending(const UserId& u, const UserId& v) const;

  /// Cross-reference audit: every edge endpoint exists, group members point
  /// back at their group, cached degrees match a recount, pool invariants
  /// hold. Throws Error(code) on the first violation.
  void check_integrity(Errc code = Errc::malformed_input) const;

  /// Deserialization hook: assembles a graph from parts and validates it.
  static Graph from_parts(std::uint64_t seed, std::map<UserId, User> users,
                          std::map<SnodeId, Secretary> secretaries, std::set<Edge> edges,
                          std::map<std::uint64_t, PendingRequest> pending);

 private:
  User& user_mut(const UserId& id);
  void install_user(User user, const std::vector<GroupKey>& slot_groups, std::uint64_t seed,
                    const std::string& public_tag);
  const SnodeId& select_snode(const User& owner, const GroupKey& group) const;
  void insert_edge(const Edge& e);
  void erase_edge(const Edge& e);
  std::uint64_t next_request_id() const;

  std::uint64_t seed_;
  std::map<UserId, User> users_;
  std::map<SnodeId, Secretary> secretaries_;
  std::set<Edge> edges_;
  std::map<std::uint64_t, PendingRequest> pending_;
  std::map<SnodeId, std::uint32_t> degree_;  // derived from edges_, not serialized
};

/// Rejects identifiers that would collide with the "owner#index" and
/// "label#instance[/subtype]" encodings.
void validate_name(const std::string& name, const char* what);

}  // namespace secgraph
