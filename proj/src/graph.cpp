#include "secgraph/graph.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>
#include <set>

#include "secgraph/rng.hpp"

namespace secgraph {

namespace {

std::uint32_t parse_u32(std::string_view text, const char* what) {
  std::uint32_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size())
    fail(Errc::malformed_input, std::string("bad ") + what + ": '" + std::string(text) + "'");
  return value;
}

// Insert keeping the vector sorted by creation index.
void insert_member(std::vector<SnodeId>& members, const SnodeId& id,
                   const std::map<SnodeId, Secretary>& secretaries) {
  const auto order = [&](const SnodeId& s) { return secretaries.at(s).creation_index; };
  auto it = std::lower_bound(members.begin(), members.end(), order(id),
                             [&](const SnodeId& s, std::uint32_t v) { return order(s) < v; });
  members.insert(it, id);
}

}  // namespace

void validate_name(const std::string& name, const char* what) {
  if (name.empty()) fail(Errc::constraint_violation, std::string(what) + " must not be empty");
  if (name.find('#') != std::string::npos || name.find('/') != std::string::npos)
    fail(Errc::constraint_violation, std::string(what) + " '" + name + "' may not contain '#' or '/'");
}

std::string SnodeId::str() const { return owner + "#" + std::to_string(index); }

SnodeId SnodeId::parse(const std::string& text) {
  const auto pos = text.rfind('#');
  if (pos == std::string::npos || pos == 0)
    fail(Errc::malformed_input, "bad snode id '" + text + "'");
  return SnodeId{text.substr(0, pos), parse_u32(std::string_view(text).substr(pos + 1), "snode index")};
}

std::string GroupKey::str() const {
  std::string out = label + "#" + std::to_string(instance);
  if (subtype) out += "/" + *subtype;
  return out;
}

GroupKey GroupKey::parse(const std::string& text) {
  const auto hash = text.find('#');
  if (hash == std::string::npos || hash == 0)
    fail(Errc::malformed_input, "bad group key '" + text + "'");
  GroupKey key;
  key.label = text.substr(0, hash);
  std::string_view rest = std::string_view(text).substr(hash + 1);
  const auto slash = rest.find('/');
  if (slash != std::string_view::npos) {
    key.subtype = std::string(rest.substr(slash + 1));
    rest = rest.substr(0, slash);
  }
  key.instance = parse_u32(rest, "group instance");
  if (key.instance == 0) fail(Errc::malformed_input, "group instance must be >= 1");
  return key;
}

Edge::Edge(SnodeId x, SnodeId y) {
  if (y < x) std::swap(x, y);
  a = std::move(x);
  b = std::move(y);
}

const SnodeId& Edge::endpoint_of(const UserId& u) const {
  if (a.owner == u) return a;
  if (b.owner == u) return b;
  fail(Errc::unknown_user, "edge has no endpoint owned by '" + u + "'");
}

std::uint32_t User::snode_count() const {
  std::uint32_t n = 0;
  for (const auto& g : groups) n += g.capacity();
  return n;
}

std::uint32_t User::type_count() const {
  std::set<std::string> labels;
  for (const auto& g : groups) labels.insert(g.key.label);
  return static_cast<std::uint32_t>(labels.size());
}

const RelationshipGroup* User::find_group(const GroupKey& key) const {
  for (const auto& g : groups)
    if (g.key == key) return &g;
  return nullptr;
}

RelationshipGroup* User::find_group(const GroupKey& key) {
  for (auto& g : groups)
    if (g.key == key) return &g;
  return nullptr;
}

const User& Graph::user(const UserId& id) const {
  const auto it = users_.find(id);
  if (it == users_.end()) fail(Errc::unknown_user, "user '" + id + "' does not exist");
  return it->second;
}

User& Graph::user_mut(const UserId& id) {
  const auto it = users_.find(id);
  if (it == users_.end()) fail(Errc::unknown_user, "user '" + id + "' does not exist");
  return it->second;
}

const Secretary& Graph::secretary(const SnodeId& id) const {
  const auto it = secretaries_.find(id);
  if (it == secretaries_.end()) fail(Errc::unknown_snode, "snode '" + id.str() + "' does not exist");
  return it->second;
}

std::uint32_t Graph::degree(const SnodeId& id) const {
  const auto it = degree_.find(id);
  return it == degree_.end() ? 0 : it->second;
}

std::optional<Edge> Graph::edge_between(const UserId& u, const UserId& v) const {
  for (const auto& e : edges_)
    if (e.touches_user(u) && e.touches_user(v)) return e;
  return std::nullopt;
}

const PendingRequest* Graph::find_pending(const UserId& u, const UserId& v) const {
  for (const auto& [id, req] : pending_) {
    if ((req.requester == u && req.target == v) || (req.requester == v && req.target == u))
      return &req;
  }
  return nullptr;
}

// Shared tail of both setup schemes. slot_groups lists one group key per
// snode in creation order (grouped); the seeded permutation then decides
// which public index each creation slot receives.
void Graph::install_user(User user, const std::vector<GroupKey>& slot_groups, std::uint64_t seed,
                         const std::string& public_tag) {
  const auto n = static_cast<std::uint32_t>(slot_groups.size());
  const auto perm = seeded_permutation(n, seed);
  for (std::uint32_t ci = 0; ci < n; ++ci) {
    SnodeId id{user.id, perm[ci]};
    Secretary snode{id, user.id, public_tag, slot_groups[ci], ci};
    user.find_group(slot_groups[ci])->members.push_back(id);
    secretaries_.emplace(std::move(id), std::move(snode));
  }
  users_.emplace(user.id, std::move(user));
}

const User& Graph::setup_naive(const UserId& user_id, std::uint32_t n, std::uint32_t tau,
                               std::uint32_t threshold, const std::vector<std::string>& type_labels,
                               std::uint64_t seed, const std::string& public_tag) {
  validate_name(user_id, "user id");
  if (users_.count(user_id)) fail(Errc::duplicate_user, "user '" + user_id + "' already exists");
  if (tau == 0 || n == 0) fail(Errc::constraint_violation, "n and tau must be positive");
  if (tau > n || n > threshold)
    fail(Errc::constraint_violation, "need tau <= n <= threshold, got tau=" + std::to_string(tau) +
                                         " n=" + std::to_string(n) +
                                         " threshold=" + std::to_string(threshold));
  if (type_labels.size() != tau)
    fail(Errc::constraint_violation, "expected " + std::to_string(tau) + " type labels, got " +
                                         std::to_string(type_labels.size()));
  std::set<std::string> seen;
  for (const auto& label : type_labels) {
    validate_name(label, "type label");
    if (!seen.insert(label).second)
      fail(Errc::duplicate_label, "type label '" + label + "' given twice");
  }

  User user{user_id, threshold, {}};
  std::vector<GroupKey> slots;
  slots.reserve(n);
  for (std::uint32_t i = 0; i < tau; ++i) {
    const std::uint32_t size = n / tau + (i < n % tau ? 1 : 0);
    GroupKey key{type_labels[i], 1, std::nullopt};
    for (std::uint32_t j = 0; j < size; ++j) slots.push_back(key);
    user.groups.push_back(RelationshipGroup{std::move(key), {}});
  }
  install_user(std::move(user), slots, seed, public_tag);
  return users_.at(user_id);
}

const User& Graph::setup_advanced(const UserId& user_id, const std::vector<AdvancedGroupSpec>& spec,
                                  std::uint32_t threshold, std::uint64_t seed,
                                  const std::string& public_tag) {
  validate_name(user_id, "user id");
  if (users_.count(user_id)) fail(Errc::duplicate_user, "user '" + user_id + "' already exists");
  if (spec.empty()) fail(Errc::empty_spec, "advanced setup needs at least one group");

  std::uint64_t total = 0;
  std::set<std::pair<std::string, std::uint32_t>> seen;
  for (const auto& entry : spec) {
    validate_name(entry.label, "type label");
    if (entry.subtype) validate_name(*entry.subtype, "subtype");
    if (entry.instance == 0) fail(Errc::constraint_violation, "group instance must be >= 1");
    if (entry.capacity == 0) fail(Errc::constraint_violation, "group capacity must be >= 1");
    if (!seen.emplace(entry.label, entry.instance).second)
      fail(Errc::duplicate_group, "group '" + entry.label + "#" + std::to_string(entry.instance) +
                                      "' given twice");
    total += entry.capacity;
  }
  if (total > threshold)
    fail(Errc::constraint_violation, "capacities sum to " + std::to_string(total) +
                                         " > threshold " + std::to_string(threshold));

  User user{user_id, threshold, {}};
  std::vector<GroupKey> slots;
  slots.reserve(total);
  for (const auto& entry : spec) {
    GroupKey key{entry.label, entry.instance, entry.subtype};
    for (std::uint32_t j = 0; j < entry.capacity; ++j) slots.push_back(key);
    user.groups.push_back(RelationshipGroup{std::move(key), {}});
  }
  install_user(std::move(user), slots, seed, public_tag);
  return users_.at(user_id);
}

std::uint64_t Graph::next_request_id() const {
  return pending_.empty() ? 1 : pending_.rbegin()->first + 1;
}

const PendingRequest& Graph::request_connection(const UserId& requester,
                                                const GroupKey& requester_group,
                                                const UserId& target) {
  const User& req_user = user(requester);
  user(target);
  if (requester == target) fail(Errc::self_connection, "'" + requester + "' cannot connect to itself");
  if (!req_user.find_group(requester_group))
    fail(Errc::unknown_group, "'" + requester + "' has no group '" + requester_group.str() + "'");
  if (edge_between(requester, target))
    fail(Errc::duplicate_pair, "'" + requester + "' and '" + target + "' are already connected");
  if (find_pending(requester, target))
    fail(Errc::duplicate_pair, "a request between '" + requester + "' and '" + target +
                                   "' is already pending");

  const std::uint64_t id = next_request_id();
  return pending_.emplace(id, PendingRequest{id, requester, requester_group, target}).first->second;
}

// Least-loaded member; members are sorted by creation index, so the first
// minimum wins ties.
const SnodeId& Graph::select_snode(const User& owner, const GroupKey& group) const {
  const RelationshipGroup* g = owner.find_group(group);
  if (!g) fail(Errc::unknown_group, "'" + owner.id + "' has no group '" + group.str() + "'");
  const SnodeId* best = nullptr;
  std::uint32_t best_load = 0;
  for (const auto& member : g->members) {
    const std::uint32_t load = degree(member);
    if (!best || load < best_load) {
      best = &member;
      best_load = load;
    }
  }
  return *best;  // groups are never empty
}

void Graph::insert_edge(const Edge& e) {
  edges_.insert(e);
  ++degree_[e.a];
  ++degree_[e.b];
}

void Graph::erase_edge(const Edge& e) {
  edges_.erase(e);
  for (const SnodeId* s : {&e.a, &e.b}) {
    auto it = degree_.find(*s);
    if (it != degree_.end() && --it->second == 0) degree_.erase(it);
  }
}

Edge Graph::accept_connection(std::uint64_t request_id, const GroupKey& target_group) {
  const auto it = pending_.find(request_id);
  if (it == pending_.end())
    fail(Errc::no_such_request, "no pending request " + std::to_string(request_id));
  const PendingRequest req = it->second;

  const SnodeId& requester_snode = select_snode(user(req.requester), req.requester_group);
  const SnodeId& target_snode = select_snode(user(req.target), target_group);
  if (edge_between(req.requester, req.target))
    fail(Errc::duplicate_pair, "'" + req.requester + "' and '" + req.target +
                                   "' are already connected");

  Edge e(requester_snode, target_snode);
  insert_edge(e);
  pending_.erase(request_id);
  return e;
}

void Graph::swap_roles(const UserId& user_id, const SnodeId& a, const SnodeId& b) {
  User& owner = user_mut(user_id);
  for (const SnodeId* s : {&a, &b}) {
    const Secretary& snode = secretary(*s);
    if (snode.owner != user_id)
      fail(Errc::not_owner, "snode '" + s->str() + "' is not owned by '" + user_id + "'");
  }
  if (a == b) return;

  Secretary& sa = secretaries_.at(a);
  Secretary& sb = secretaries_.at(b);
  if (sa.private_tag == sb.private_tag) return;

  RelationshipGroup* ga = owner.find_group(sa.private_tag);
  RelationshipGroup* gb = owner.find_group(sb.private_tag);
  std::erase(ga->members, a);
  std::erase(gb->members, b);
  std::swap(sa.private_tag, sb.private_tag);
  insert_member(gb->members, a, secretaries_);
  insert_member(ga->members, b, secretaries_);
}

SnodeId Graph::add_secretary(const UserId& user_id, const GroupKey& group) {
  User& owner = user_mut(user_id);
  RelationshipGroup* g = owner.find_group(group);
  if (!g) fail(Errc::unknown_group, "'" + user_id + "' has no group '" + group.str() + "'");
  if (owner.snode_count() >= owner.threshold)
    fail(Errc::threshold_exceeded, "'" + user_id + "' is at its threshold of " +
                                       std::to_string(owner.threshold) + " snodes");

  std::uint32_t next_index = 0;
  std::uint32_t next_creation = 0;
  std::string public_tag;
  for (const auto& grp : owner.groups) {
    for (const auto& member : grp.members) {
      const Secretary& snode = secretaries_.at(member);
      next_index = std::max(next_index, snode.id.index + 1);
      next_creation = std::max(next_creation, snode.creation_index + 1);
      public_tag = snode.public_tag;
    }
  }

  SnodeId id{user_id, next_index};
  secretaries_.emplace(id, Secretary{id, user_id, public_tag, group, next_creation});
  g->members.push_back(id);  // highest creation index, so append keeps order
  return id;
}

void Graph::remove_secretary(const UserId& user_id, const SnodeId& snode_id) {
  User& owner = user_mut(user_id);
  const Secretary& snode = secretary(snode_id);
  if (snode.owner != user_id)
    fail(Errc::not_owner, "snode '" + snode_id.str() + "' is not owned by '" + user_id + "'");
  if (degree(snode_id) != 0)
    fail(Errc::secretary_busy, "snode '" + snode_id.str() + "' still handles " +
                                   std::to_string(degree(snode_id)) + " connection(s)");
  RelationshipGroup* g = owner.find_group(snode.private_tag);
  if (g->members.size() == 1)
    fail(Errc::constraint_violation, "cannot remove the last snode of group '" +
                                         snode.private_tag.str() + "'");
  std::erase(g->members, snode_id);
  secretaries_.erase(snode_id);
}

void Graph::reassign_connection(const UserId& owner_id, const UserId& peer,
                                const GroupKey& new_group) {
  const User& owner = user(owner_id);
  user(peer);
  if (!owner.find_group(new_group))
    fail(Errc::unknown_group, "'" + owner_id + "' has no group '" + new_group.str() + "'");
  const auto existing = edge_between(owner_id, peer);
  if (!existing)
    fail(Errc::not_connected, "'" + owner_id + "' and '" + peer + "' are not connected");

  const SnodeId peer_snode = existing->endpoint_of(peer);
  erase_edge(*existing);
  insert_edge(Edge(select_snode(owner, new_group), peer_snode));
}

PublicView Graph::export_public_view() const {
  PublicView view;
  for (const auto& [id, u] : users_) view.users.insert(id);
  for (const auto& [id, snode] : secretaries_)
    view.snodes.emplace(id, PublicSnode{snode.owner, snode.public_tag});
  view.edges = edges_;
  return view;
}

void Graph::check_integrity(Errc code) const {
  const auto expect = [&](bool ok, const std::string& what) {
    if (!ok) fail(code, what);
  };

  std::map<SnodeId, std::uint32_t> recount;
  std::set<std::pair<UserId, UserId>> pairs;
  for (const auto& e : edges_) {
    expect(secretaries_.count(e.a) && secretaries_.count(e.b), "edge endpoint does not exist");
    expect(e.a.owner != e.b.owner, "edge connects one user to itself");
    expect(e.a < e.b, "edge endpoints not in canonical order");
    auto pair = std::minmax(e.a.owner, e.b.owner);
    expect(pairs.emplace(pair.first, pair.second).second, "user pair connected twice");
    ++recount[e.a];
    ++recount[e.b];
  }
  expect(recount == degree_, "cached degrees disagree with edge recount");

  std::set<SnodeId> in_groups;
  for (const auto& [uid, u] : users_) {
    expect(uid == u.id, "user keyed under wrong id");
    expect(u.snode_count() <= u.threshold, "user '" + uid + "' exceeds its threshold");
    expect(u.type_count() <= u.snode_count(), "user '" + uid + "' has more types than snodes");
    std::set<std::pair<std::string, std::uint32_t>> group_ids;
    std::set<std::uint32_t> creation;
    std::string pool_tag;
    for (const auto& g : u.groups) {
      expect(g.capacity() >= 1, "empty group '" + g.key.str() + "'");
      expect(group_ids.emplace(g.key.label, g.key.instance).second,
             "duplicate group '" + g.key.str() + "'");
      std::uint32_t prev_creation = 0;
      bool first = true;
      for (const auto& member : g.members) {
        const auto it = secretaries_.find(member);
        expect(it != secretaries_.end(), "group member does not exist");
        const Secretary& snode = it->second;
        expect(snode.owner == uid && member.owner == uid, "group member owned by someone else");
        expect(snode.private_tag == g.key, "member's private tag points at another group");
        expect(snode.id == member, "secretary keyed under wrong id");
        expect(first || snode.creation_index > prev_creation, "members not in creation order");
        expect(creation.insert(snode.creation_index).second, "creation index reused");
        expect(in_groups.insert(member).second, "snode listed in two groups");
        if (pool_tag.empty())
          pool_tag = snode.public_tag;
        else
          expect(snode.public_tag == pool_tag, "public tags differ within one pool");
        prev_creation = snode.creation_index;
        first = false;
      }
    }
  }
  for (const auto& [id, snode] : secretaries_) {
    expect(users_.count(snode.owner) != 0, "secretary owned by unknown user");
    expect(in_groups.count(id) != 0, "secretary not listed in any group");
  }
  for (const auto& [id, req] : pending_) {
    expect(id == req.id, "request keyed under wrong id");
    expect(users_.count(req.requester) && users_.count(req.target), "request names unknown user");
    const User& requester = users_.at(req.requester);
    expect(requester.find_group(req.requester_group) != nullptr, "request names unknown group");
  }
}

Graph Graph::from_parts(std::uint64_t seed, std::map<UserId, User> users,
                        std::map<SnodeId, Secretary> secretaries, std::set<Edge> edges,
                        std::map<std::uint64_t, PendingRequest> pending) {
  Graph g(seed);
  g.users_ = std::move(users);
  g.secretaries_ = std::move(secretaries);
  g.edges_ = std::move(edges);
  g.pending_ = std::move(pending);
  for (const auto& e : g.edges_) {
    ++g.degree_[e.a];
    ++g.degree_[e.b];
  }
  g.check_integrity(Errc::malformed_input);
  return g;
}

}  // namespace secgraph
