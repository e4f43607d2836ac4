#include "secgraph/graph.hpp"

#include <map>
#include <vector>

#include <doctest.h>

#include "secgraph/rng.hpp"
#include "secgraph/serialize.hpp"
#include "test_util.hpp"

using namespace secgraph;
using testutil::code_of;

namespace {

const std::vector<std::string> kThreeTypes{"friend", "enemy", "acquaintance"};

std::vector<std::uint32_t> group_sizes(const User& user) {
  std::vector<std::uint32_t> sizes;
  for (const auto& g : user.groups) sizes.push_back(g.capacity());
  return sizes;
}

Graph alice_and_bob() {
  Graph g(1);
  g.setup_naive("alice", 6, 3, 10, kThreeTypes, 11);
  g.setup_naive("bob", 8, 4, 12, {"friend", "enemy", "acquaintance", "competitor"}, 12);
  return g;
}

}  // namespace

TEST_CASE("naive setup splits the pool evenly, remainder first") {
  Graph g(0);
  const User& even = g.setup_naive("alice", 6, 3, 10, kThreeTypes, 5);
  CHECK(group_sizes(even) == std::vector<std::uint32_t>{2, 2, 2});
  CHECK(even.snode_count() == 6);
  CHECK(even.type_count() == 3);

  const User& uneven = g.setup_naive("bob", 7, 3, 10, kThreeTypes, 5);
  CHECK(group_sizes(uneven) == std::vector<std::uint32_t>{3, 2, 2});
  CHECK(uneven.groups[0].key.label == "friend");  // remainder follows the given label order
  CHECK(uneven.groups[0].key.instance == 1);

  g.check_integrity();
}

TEST_CASE("naive setup rejects bad shapes") {
  Graph g(0);
  CHECK(code_of([&] { g.setup_naive("a", 2, 3, 10, kThreeTypes, 1); }) ==
        Errc::constraint_violation);
  CHECK(code_of([&] { g.setup_naive("a", 11, 3, 10, kThreeTypes, 1); }) ==
        Errc::constraint_violation);
  CHECK(code_of([&] { g.setup_naive("a", 6, 2, 10, kThreeTypes, 1); }) ==
        Errc::constraint_violation);
  CHECK(code_of([&] { g.setup_naive("a", 6, 3, 10, {"x", "y", "x"}, 1); }) ==
        Errc::duplicate_label);
  CHECK(code_of([&] { g.setup_naive("", 6, 3, 10, kThreeTypes, 1); }) ==
        Errc::constraint_violation);
  CHECK(code_of([&] { g.setup_naive("a#1", 6, 3, 10, kThreeTypes, 1); }) ==
        Errc::constraint_violation);

  g.setup_naive("a", 6, 3, 10, kThreeTypes, 1);
  CHECK(code_of([&] { g.setup_naive("a", 6, 3, 10, kThreeTypes, 2); }) == Errc::duplicate_user);
}

TEST_CASE("advanced setup takes per-instance capacities") {
  Graph g(0);
  const User& u = g.setup_advanced(
      "u", {{"friend", 1, 5, std::nullopt}, {"friend", 2, 7, std::nullopt}}, 20, 3);
  CHECK(group_sizes(u) == std::vector<std::uint32_t>{5, 7});
  CHECK(u.snode_count() == 12);
  CHECK(u.type_count() == 1);
  CHECK(u.groups[1].key.str() == "friend#2");
  g.check_integrity();
}

TEST_CASE("advanced setup, uneven example pool") {
  Graph g(0);
  const User& alice = g.setup_advanced("alice",
                                       {{"friend", 1, 20, std::nullopt},
                                        {"friend", 2, 10, std::nullopt},
                                        {"friend", 3, 30, std::nullopt},
                                        {"friend", 4, 30, std::nullopt},
                                        {"enemy", 1, 25, std::nullopt}},
                                       120, 3);
  CHECK(alice.snode_count() == 115);
  std::uint32_t friends = 0;
  for (const auto& grp : alice.groups)
    if (grp.key.label == "friend") friends += grp.capacity();
  CHECK(friends == 90);
  CHECK(alice.type_count() == 2);
}

TEST_CASE("advanced setup rejects bad specs") {
  Graph g(0);
  CHECK(code_of([&] { g.setup_advanced("u", {}, 10, 1); }) == Errc::empty_spec);
  CHECK(code_of([&] {
          g.setup_advanced("u", {{"friend", 1, 8, std::nullopt}, {"enemy", 1, 8, std::nullopt}},
                           10, 1);
        }) == Errc::constraint_violation);
  CHECK(code_of([&] {
          g.setup_advanced("u", {{"friend", 1, 2, std::nullopt}, {"friend", 1, 2, std::nullopt}},
                           10, 1);
        }) == Errc::duplicate_group);
  CHECK(code_of([&] { g.setup_advanced("u", {{"friend", 0, 2, std::nullopt}}, 10, 1); }) ==
        Errc::constraint_violation);
  CHECK(code_of([&] { g.setup_advanced("u", {{"friend", 1, 0, std::nullopt}}, 10, 1); }) ==
        Errc::constraint_violation);
}

// The permutation should wipe any correlation between id rank and group. For
// n=6 over two equal types, each rank lands in the first group about half the
// time; 4 sigma over 4000 seeded setups.
TEST_CASE("snode id rank carries no group information") {
  const int setups = 4000;
  std::vector<int> first_group_hits(6, 0);
  for (int s = 0; s < setups; ++s) {
    Graph g(0);
    const User& u = g.setup_naive("u", 6, 2, 10, {"aa", "bb"}, 7777 + s);
    for (const auto& member : u.groups[0].members) ++first_group_hits[member.index];
  }
  const double sigma = 0.5 / std::sqrt(static_cast<double>(setups));
  for (int rank = 0; rank < 6; ++rank) {
    const double freq = first_group_hits[rank] / static_cast<double>(setups);
    CHECK(std::abs(freq - 0.5) <= 4 * sigma);
  }
}

TEST_CASE("two-phase connection keeps each side's choice private") {
  Graph g = alice_and_bob();
  const auto& request =
      g.request_connection("alice", GroupKey{"acquaintance", 1, std::nullopt}, "bob");
  CHECK(request.requester == "alice");
  CHECK(g.pending().size() == 1);

  const Edge e = g.accept_connection(request.id, GroupKey{"competitor", 1, std::nullopt});
  CHECK(g.pending().empty());
  CHECK(g.edges().size() == 1);

  const Secretary& alice_side = g.secretary(e.endpoint_of("alice"));
  const Secretary& bob_side = g.secretary(e.endpoint_of("bob"));
  CHECK(alice_side.private_tag.label == "acquaintance");
  CHECK(bob_side.private_tag.label == "competitor");
  CHECK(alice_side.public_tag == "friend");
  CHECK(bob_side.public_tag == "friend");
  g.check_integrity();
}

TEST_CASE("connection preconditions") {
  Graph g = alice_and_bob();
  const GroupKey friends{"friend", 1, std::nullopt};

  CHECK(code_of([&] { g.request_connection("alice", friends, "alice"); }) ==
        Errc::self_connection);
  CHECK(code_of([&] { g.request_connection("carol", friends, "bob"); }) == Errc::unknown_user);
  CHECK(code_of([&] { g.request_connection("alice", friends, "carol"); }) == Errc::unknown_user);
  CHECK(code_of([&] {
          g.request_connection("alice", GroupKey{"nemesis", 1, std::nullopt}, "bob");
        }) == Errc::unknown_group);
  CHECK(code_of([&] { g.accept_connection(99, friends); }) == Errc::no_such_request);

  const auto& request = g.request_connection("alice", friends, "bob");
  CHECK(code_of([&] { g.request_connection("bob", friends, "alice"); }) == Errc::duplicate_pair);
  CHECK(code_of([&] { g.accept_connection(request.id, GroupKey{"off", 1, std::nullopt}); }) ==
        Errc::unknown_group);

  g.accept_connection(request.id, friends);
  CHECK(code_of([&] { g.request_connection("alice", friends, "bob"); }) == Errc::duplicate_pair);
}

TEST_CASE("first accept lands on the earliest-created snode of the group") {
  Graph g(0);
  g.setup_naive("owner", 5, 1, 10, {"friend"}, 31);
  g.setup_naive("peer", 1, 1, 5, {"friend"}, 32);
  const GroupKey friends{"friend", 1, std::nullopt};

  const auto& request = g.request_connection("peer", friends, "owner");
  const Edge e = g.accept_connection(request.id, friends);
  CHECK(e.endpoint_of("owner") == g.user("owner").find_group(friends)->members.front());
}

TEST_CASE("ten accepts into a capacity-5 group load every snode twice") {
  Graph g(0);
  g.setup_naive("owner", 5, 1, 10, {"friend"}, 41);
  const GroupKey friends{"friend", 1, std::nullopt};
  for (int i = 0; i < 10; ++i) {
    const UserId peer = "peer" + std::to_string(i);
    g.setup_naive(peer, 1, 1, 5, {"friend"}, 50 + i);
    const auto& request = g.request_connection(peer, friends, "owner");
    g.accept_connection(request.id, friends);
  }
  for (const auto& member : g.user("owner").find_group(friends)->members)
    CHECK(g.degree(member) == 2);
}

TEST_CASE("least-loaded selection keeps each group within one connection") {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    testutil::RandomOpts opts;
    opts.connect_attempts = 40;
    const auto random = testutil::make_random_graph(seed, opts);
    for (const auto& [uid, user] : random.graph.users()) {
      for (const auto& group : user.groups) {
        std::uint32_t lo = UINT32_MAX, hi = 0;
        for (const auto& member : group.members) {
          lo = std::min(lo, random.graph.degree(member));
          hi = std::max(hi, random.graph.degree(member));
        }
        CHECK(hi - lo <= 1);
      }
    }
    random.graph.check_integrity();
  }
}

TEST_CASE("swap_roles is an involution that leaves edges alone") {
  Graph g = alice_and_bob();
  const auto& request = g.request_connection("alice", GroupKey{"friend", 1, std::nullopt}, "bob");
  g.accept_connection(request.id, GroupKey{"enemy", 1, std::nullopt});

  const std::string before = serialize_graph(g);
  const SnodeId a = g.user("alice").groups[0].members[0];
  const SnodeId b = g.user("alice").groups[2].members[1];

  g.swap_roles("alice", a, b);
  CHECK(g.secretary(a).private_tag.label == "acquaintance");
  CHECK(g.secretary(b).private_tag.label == "friend");
  CHECK(serialize_graph(g) != before);
  const auto edges_after_swap = g.edges();
  CHECK(edges_after_swap == deserialize_graph(before).edges());  // endpoints untouched
  g.check_integrity();

  g.swap_roles("alice", a, b);
  CHECK(serialize_graph(g) == before);

  g.swap_roles("alice", a, a);  // self-swap is a no-op
  CHECK(serialize_graph(g) == before);
}

TEST_CASE("swap_roles ownership checks") {
  Graph g = alice_and_bob();
  const SnodeId alice0 = g.user("alice").groups[0].members[0];
  const SnodeId bob0 = g.user("bob").groups[0].members[0];
  CHECK(code_of([&] { g.swap_roles("alice", alice0, bob0); }) == Errc::not_owner);
  CHECK(code_of([&] { g.swap_roles("alice", alice0, SnodeId{"alice", 99}); }) ==
        Errc::unknown_snode);
  CHECK(code_of([&] { g.swap_roles("carol", alice0, alice0); }) == Errc::unknown_user);
}

TEST_CASE("add and remove secretaries") {
  Graph g(0);
  g.setup_naive("u", 4, 2, 5, {"aa", "bb"}, 3);
  const GroupKey aa{"aa", 1, std::nullopt};
  const std::string before = serialize_graph(g);

  const SnodeId added = g.add_secretary("u", aa);
  CHECK(g.user("u").snode_count() == 5);
  CHECK(g.secretary(added).private_tag == aa);
  g.check_integrity();

  CHECK(code_of([&] { g.add_secretary("u", aa); }) == Errc::threshold_exceeded);
  CHECK(code_of([&] { g.add_secretary("u", GroupKey{"cc", 1, std::nullopt}); }) ==
        Errc::unknown_group);

  g.remove_secretary("u", added);
  CHECK(serialize_graph(g) == before);  // add then remove restores the graph exactly
}

TEST_CASE("remove refuses busy or last snodes") {
  Graph g(0);
  g.setup_naive("u", 3, 2, 6, {"aa", "bb"}, 3);
  g.setup_naive("v", 1, 1, 2, {"aa"}, 4);
  const GroupKey aa{"aa", 1, std::nullopt};

  const auto& request = g.request_connection("v", aa, "u");
  const Edge e = g.accept_connection(request.id, aa);
  CHECK(code_of([&] { g.remove_secretary("u", e.endpoint_of("u")); }) == Errc::secretary_busy);
  CHECK(code_of([&] { g.remove_secretary("v", e.endpoint_of("v")); }) == Errc::secretary_busy);

  const SnodeId lone = g.user("u").find_group(GroupKey{"bb", 1, std::nullopt})->members[0];
  CHECK(code_of([&] { g.remove_secretary("u", lone); }) == Errc::constraint_violation);
  CHECK(code_of([&] { g.remove_secretary("v", e.endpoint_of("u")); }) == Errc::not_owner);
}

TEST_CASE("public view hides everything but users, tags and edges") {
  Graph g(0);
  CHECK(g.export_public_view().users.empty());
  CHECK(g.export_public_view().snodes.empty());
  CHECK(g.export_public_view().edges.empty());

  g.setup_naive("u", 4, 2, 6, {"zzaa", "zzbb"}, 3);
  g.setup_naive("v", 2, 1, 4, {"zzcc"}, 4);
  const auto& request = g.request_connection("u", GroupKey{"zzaa", 1, std::nullopt}, "v");
  g.accept_connection(request.id, GroupKey{"zzcc", 1, std::nullopt});

  const PublicView view = g.export_public_view();
  CHECK(view.users == std::set<UserId>{"u", "v"});
  CHECK(view.snodes.size() == 6);
  CHECK(view.edges == g.edges());

  const std::string bytes = serialize_public_view(view);
  for (const std::string& label : {"zzaa", "zzbb", "zzcc"})
    CHECK_FALSE(testutil::contains(bytes, label));

  for (const auto& [id, snode] : view.snodes) CHECK(snode.public_tag == "friend");
}

TEST_CASE("identical seeds and operations give identical bytes") {
  const auto build = [] {
    Graph g(99);
    g.setup_naive("u", 7, 3, 9, {"aa", "bb", "cc"}, 1);
    g.setup_advanced("v", {{"dd", 1, 3, std::nullopt}, {"dd", 2, 2, "close"}}, 9, 2);
    const auto& request = g.request_connection("u", GroupKey{"bb", 1, std::nullopt}, "v");
    g.accept_connection(request.id, GroupKey{"dd", 2, "close"});
    g.request_connection("v", GroupKey{"dd", 1, std::nullopt}, "u");
    return serialize_graph(g);
  };
  CHECK(build() == build());
}

TEST_CASE("op order with the same final state gives the same bytes") {
  const auto build = [](bool flip) {
    Graph g(5);
    g.setup_naive("a", 2, 1, 4, {"x"}, 1);
    g.setup_naive("b", 2, 1, 4, {"x"}, 2);
    g.setup_naive("c", 2, 1, 4, {"x"}, 3);
    g.setup_naive("d", 2, 1, 4, {"x"}, 4);
    const GroupKey x{"x", 1, std::nullopt};
    const auto connect = [&](const UserId& from, const UserId& to) {
      const auto& request = g.request_connection(from, x, to);
      g.accept_connection(request.id, x);
    };
    if (flip) {
      connect("c", "d");
      connect("a", "b");
    } else {
      connect("a", "b");
      connect("c", "d");
    }
    return serialize_graph(g);
  };
  CHECK(build(false) == build(true));
}
