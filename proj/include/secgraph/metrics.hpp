#pragma once

// Closed-form privacy metrics plus empirical load statistics over a concrete
// graph. Pure functions, safe to call concurrently.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "secgraph/graph.hpp"

namespace secgraph {

/// Network-wide parameters: n snodes per user, k relationship types,
/// l instances per type (1 = single-instance scheme), c mean connections per
/// user, m users.
struct NetworkParams {
  double n = 0, k = 0, l = 1, c = 0, m = 0;

  /// Soft checks; k <= n is expected, and k*l > n is worth flagging even
  /// though nothing forbids it.
  std::vector<std::string> warnings() const;
};

/// Chance of guessing the relationship type behind one snode when n snodes
/// cover k single-instance types: 1/(k*n). Requires 1 <= k <= n.
double guess_prob_naive(double n, double k);

/// Multi-instance variant: 1/(k*l*n). Reduces to guess_prob_naive at l=1.
double guess_prob_advanced(double n, double k, double l);

/// Effective type count k' = k*l.
double effective_type_count(double k, double l);

/// Mean connections each snode carries when c connections funnel through a
/// type's share of the pool: c*k/n.
double expected_load(double c, double k, double n);

/// Pool size across the whole network: n*m.
std::uint64_t total_snodes(std::uint64_t n, std::uint64_t m);

struct LoadStats {
  std::uint64_t snodes = 0;
  std::uint64_t connections = 0;  // sum of snode degrees in scope
  std::uint32_t min = 0;
  std::uint32_t max = 0;
  double mean = 0;
  double spread = 0;      // max - min
  double chi_square = 0;  // uniformity of degrees against their own mean
};

struct LoadReport {
  LoadStats global;
  std::map<std::string, LoadStats> per_group;  // "<user>/<label>#<instance>[/subtype]"
};

LoadReport load_report(const Graph& graph);

/// Mean parameters observed on a concrete graph (zeros on an empty one).
NetworkParams infer_params(const Graph& graph);

nlohmann::json load_stats_to_json(const LoadStats& stats);

/// Report with `params`, `analytic` (p_naive, p_advanced, p_load,
/// total_snodes, k_effective) and `empirical` (load report) sections.
/// Analytic fields that are undefined for the given params come out null.
nlohmann::json metrics_json(const Graph& graph, std::optional<NetworkParams> params = {});

}  // namespace secgraph
