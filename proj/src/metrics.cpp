#include "secgraph/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace secgraph {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0) || !std::isfinite(v))
    fail(Errc::domain_error, std::string(name) + " must be positive and finite");
}

LoadStats stats_over(const std::vector<std::uint32_t>& degrees) {
  LoadStats s;
  s.snodes = degrees.size();
  if (degrees.empty()) return s;
  s.min = *std::min_element(degrees.begin(), degrees.end());
  s.max = *std::max_element(degrees.begin(), degrees.end());
  for (const auto d : degrees) s.connections += d;
  s.mean = static_cast<double>(s.connections) / static_cast<double>(s.snodes);
  s.spread = static_cast<double>(s.max) - static_cast<double>(s.min);
  if (s.mean > 0) {
    for (const auto d : degrees) {
      const double diff = static_cast<double>(d) - s.mean;
      s.chi_square += diff * diff / s.mean;
    }
  }
  return s;
}

}  // namespace

std::vector<std::string> NetworkParams::warnings() const {
  std::vector<std::string> out;
  for (const auto& [value, name] :
       std::initializer_list<std::pair<double, const char*>>{
           {n, "n"}, {k, "k"}, {l, "l"}, {c, "c"}, {m, "m"}}) {
    if (!(value > 0)) out.push_back(std::string(name) + " is not positive");
  }
  if (k > n) out.push_back("k exceeds n; expected k <= n");
  if (k * l > n) out.push_back("k*l exceeds n; each group gets less than one snode on average");
  return out;
}

double guess_prob_naive(double n, double k) {
  require_positive(n, "n");
  require_positive(k, "k");
  if (k < 1 || k > n) fail(Errc::domain_error, "need 1 <= k <= n");
  return 1.0 / (k * n);
}

double guess_prob_advanced(double n, double k, double l) {
  require_positive(l, "l");
  if (l < 1) fail(Errc::domain_error, "need l >= 1");
  guess_prob_naive(n, k);  // same domain checks on n, k
  return 1.0 / (k * l * n);
}

double effective_type_count(double k, double l) {
  require_positive(k, "k");
  require_positive(l, "l");
  return k * l;
}

double expected_load(double c, double k, double n) {
  require_positive(c, "c");
  require_positive(k, "k");
  require_positive(n, "n");
  return c * k / n;
}

std::uint64_t total_snodes(std::uint64_t n, std::uint64_t m) { return n * m; }

LoadReport load_report(const Graph& graph) {
  LoadReport report;
  std::vector<std::uint32_t> all;
  all.reserve(graph.secretaries().size());
  for (const auto& [uid, user] : graph.users()) {
    for (const auto& group : user.groups) {
      std::vector<std::uint32_t> degrees;
      degrees.reserve(group.members.size());
      for (const auto& member : group.members) {
        degrees.push_back(graph.degree(member));
        all.push_back(degrees.back());
      }
      report.per_group.emplace(uid + "/" + group.key.str(), stats_over(degrees));
    }
  }
  report.global = stats_over(all);
  return report;
}

NetworkParams infer_params(const Graph& graph) {
  NetworkParams params;
  params.m = static_cast<double>(graph.users().size());
  if (params.m == 0) {
    params.l = 0;
    return params;
  }
  double total_instances = 0, total_labels = 0;
  for (const auto& [uid, user] : graph.users()) {
    params.n += user.snode_count();
    params.k += user.type_count();
    total_labels += user.type_count();
    total_instances += static_cast<double>(user.groups.size());
  }
  params.n /= params.m;
  params.k /= params.m;
  params.l = total_labels > 0 ? total_instances / total_labels : 0;
  params.c = 2.0 * static_cast<double>(graph.edges().size()) / params.m;
  return params;
}

nlohmann::json load_stats_to_json(const LoadStats& stats) {
  return nlohmann::json{
      {"snodes", stats.snodes},   {"connections", stats.connections},
      {"min", stats.min},         {"max", stats.max},
      {"mean", stats.mean},       {"spread", stats.spread},
      {"chi_square", stats.chi_square},
  };
}

nlohmann::json metrics_json(const Graph& graph, std::optional<NetworkParams> params) {
  const NetworkParams p = params ? *params : infer_params(graph);

  const auto analytic_or_null = [](auto&& compute) -> nlohmann::json {
    try {
      return compute();
    } catch (const Error&) {
      return nullptr;
    }
  };

  nlohmann::json analytic{
      {"p_naive", analytic_or_null([&] { return guess_prob_naive(p.n, p.k); })},
      {"p_advanced", analytic_or_null([&] { return guess_prob_advanced(p.n, p.k, p.l); })},
      {"p_load", analytic_or_null([&] { return expected_load(p.c, p.k, p.n); })},
      {"k_effective", analytic_or_null([&] { return effective_type_count(p.k, p.l); })},
      {"total_snodes",
       analytic_or_null([&] {
         if (p.n < 0 || p.m < 0) fail(Errc::domain_error, "negative params");
         return total_snodes(static_cast<std::uint64_t>(std::llround(p.n)),
                             static_cast<std::uint64_t>(std::llround(p.m)));
       })},
  };

  const LoadReport report = load_report(graph);
  nlohmann::json per_group = nlohmann::json::object();
  for (const auto& [key, stats] : report.per_group) per_group[key] = load_stats_to_json(stats);

  return nlohmann::json{
      {"params",
       {{"n", p.n},
        {"k", p.k},
        {"l", p.l},
        {"c", p.c},
        {"m", p.m},
        {"warnings", p.warnings()}}},
      {"analytic", analytic},
      {"empirical", {{"global", load_stats_to_json(report.global)}, {"per_group", per_group}}},
  };
}

}  // namespace secgraph
