#pragma once

// Shared helpers for the test suites: seeded random graph generators, an
// error-code probe and a tiny digest for byte-identity checks.

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "secgraph/graph.hpp"
#include "secgraph/rng.hpp"

namespace testutil {

template <typename F>
secgraph::Errc code_of(F&& body) {
  try {
    (void)body();
  } catch (const secgraph::Error& e) {
    return e.code();
  }
  throw std::logic_error("expected the call to throw secgraph::Error");
}

inline bool contains(const std::string& hay, const std::string& needle) {
  return hay.find(needle) != std::string::npos;
}

inline std::string fnv1a_hex(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (const unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

struct RandomOpts {
  std::uint32_t users_min = 3, users_max = 6;
  std::uint32_t n_min = 4, n_max = 12;
  std::uint32_t labels_min = 2, labels_max = 4;
  bool allow_advanced = true;
  std::uint32_t connect_attempts = 8;
  std::string public_tag = "friend";
};

struct RandomGraph {
  secgraph::Graph graph;
  std::vector<std::string> private_strings;  // labels, subtypes, group keys
  std::vector<secgraph::UserId> user_ids;
};

// Seeded random population with labels chosen disjoint from user ids and the
// public tag, so leak scans can string-match them. Pools stay small enough
// (n <= n_max <= 12, near-even groups) for exact posterior enumeration.
inline RandomGraph make_random_graph(std::uint64_t seed, const RandomOpts& opts = {}) {
  using namespace secgraph;
  Rng rng(Rng::derive(seed, 7));
  RandomGraph out{Graph(seed), {}, {}};
  Graph& g = out.graph;

  const auto pick = [&](std::uint32_t lo, std::uint32_t hi) {
    return lo + static_cast<std::uint32_t>(rng.below(hi - lo + 1));
  };

  const std::uint32_t m = pick(opts.users_min, opts.users_max);
  for (std::uint32_t i = 0; i < m; ++i) {
    const UserId uid = "u" + std::to_string(i);
    out.user_ids.push_back(uid);
    const std::uint32_t labels = pick(opts.labels_min, opts.labels_max);
    std::vector<std::string> names;
    for (std::uint32_t j = 0; j < labels; ++j)
      names.push_back("zzq" + std::to_string(i) + "x" + std::to_string(j));

    const bool advanced = opts.allow_advanced && rng.below(2) == 0;
    if (!advanced) {
      const std::uint32_t n = pick(std::max(labels, opts.n_min), opts.n_max);
      g.setup_naive(uid, n, labels, n + 2, names, Rng::derive(seed, 100 + i), opts.public_tag);
    } else {
      std::vector<AdvancedGroupSpec> spec;
      std::uint32_t total = 0;
      for (std::uint32_t j = 0; j < labels; ++j) {
        const std::uint32_t instances = pick(1, 2);
        for (std::uint32_t inst = 1; inst <= instances; ++inst) {
          std::uint32_t capacity = pick(1, 3);
          capacity = std::min(capacity, opts.n_max - total);
          if (capacity == 0) break;
          AdvancedGroupSpec entry{names[j], inst, capacity, std::nullopt};
          if (rng.below(4) == 0) entry.subtype = "zzsub" + std::to_string(j);
          spec.push_back(entry);
          total += capacity;
        }
      }
      if (spec.empty()) spec.push_back(AdvancedGroupSpec{names[0], 1, 1, std::nullopt});
      g.setup_advanced(uid, spec, opts.n_max + 2, Rng::derive(seed, 100 + i), opts.public_tag);
    }

    for (const auto& group : g.user(uid).groups) {
      out.private_strings.push_back(group.key.label);
      if (group.key.subtype) out.private_strings.push_back(*group.key.subtype);
      out.private_strings.push_back(group.key.str());
    }
  }

  const auto random_group = [&](const UserId& uid) {
    const auto& groups = g.user(uid).groups;
    return groups[rng.below(groups.size())].key;
  };
  for (std::uint32_t attempt = 0; attempt < opts.connect_attempts; ++attempt) {
    const UserId& a = out.user_ids[rng.below(m)];
    const UserId& b = out.user_ids[rng.below(m)];
    if (a == b || g.edge_between(a, b) || g.find_pending(a, b)) continue;
    const auto& request = g.request_connection(a, random_group(a), b);
    g.accept_connection(request.id, random_group(b));
  }
  return out;
}

// m users, n snodes over k even types each; `edges` random pairs where both
// sides funnel every connection into one designated group.
inline secgraph::Graph funnel_graph(std::uint64_t seed, std::uint32_t m, std::uint32_t n,
                                    std::uint32_t k, std::uint32_t edges) {
  using namespace secgraph;
  Rng rng(Rng::derive(seed, 11));
  Graph g(seed);
  std::vector<UserId> ids;
  std::vector<GroupKey> funnel;
  std::vector<std::string> labels;
  for (std::uint32_t j = 0; j < k; ++j) labels.push_back("w" + std::to_string(j));

  for (std::uint32_t i = 0; i < m; ++i) {
    const UserId uid = "u" + std::to_string(i);
    ids.push_back(uid);
    g.setup_naive(uid, n, k, n + 5, labels, Rng::derive(seed, 300 + i));
    funnel.push_back(GroupKey{labels[rng.below(k)], 1, std::nullopt});
  }

  std::uint32_t made = 0;
  while (made < edges) {
    const std::uint32_t a = static_cast<std::uint32_t>(rng.below(m));
    const std::uint32_t b = static_cast<std::uint32_t>(rng.below(m));
    if (a == b || g.edge_between(ids[a], ids[b])) continue;
    const auto& request = g.request_connection(ids[a], funnel[a], ids[b]);
    g.accept_connection(request.id, funnel[b]);
    ++made;
  }
  return g;
}

}  // namespace testutil
