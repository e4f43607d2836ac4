#include "secgraph/adversary.hpp"

#include <algorithm>
#include <cstdint>

#include "secgraph/rng.hpp"

namespace secgraph {

namespace {

std::string argmax_label(const std::map<std::string, double>& posterior) {
  std::string best;
  double best_p = -1;
  for (const auto& [label, p] : posterior) {
    if (p > best_p) {  // map order makes ties resolve to the smaller label
      best = label;
      best_p = p;
    }
  }
  return best;
}

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  std::uint64_t result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) result = result * (n - k + i) / i;
  return result;
}

std::uint64_t assignment_count(const Hypothesis& hypothesis) {
  std::uint64_t count = 1;
  std::uint64_t remaining = hypothesis.total();
  for (const auto& [label, size] : hypothesis.label_counts) {
    count *= binomial(remaining, size);
    remaining -= size;
  }
  return count;
}

std::map<std::string, double> uniform_over_labels(const Hypothesis& hypothesis) {
  std::map<std::string, double> posterior;
  const double p = 1.0 / static_cast<double>(hypothesis.label_counts.size());
  for (const auto& [label, size] : hypothesis.label_counts) posterior[label] = p;
  return posterior;
}

InferenceResult make_result(const Edge& edge, const UserId& target, const SnodeId& snode,
                            std::map<std::string, double> posterior, bool exact) {
  InferenceResult r;
  r.edge = edge;
  r.target_user = target;
  r.target_snode = snode;
  r.guess = argmax_label(posterior);
  r.posterior = std::move(posterior);
  r.exact = exact;
  r.montecarlo = false;
  return r;
}

// Fills correctness flags and summary fields from the graph's ground truth.
void finish_report(const Graph& graph, AttackReport& report) {
  std::size_t hits = 0;
  double predicted = 0;
  for (const auto& result : report.per_edge) {
    const std::string& truth = graph.secretary(result.target_snode).private_tag.label;
    const bool ok = result.guess == truth;
    report.correct.push_back(ok);
    hits += ok ? 1 : 0;
    predicted += result.posterior.at(result.guess);
  }
  if (!report.per_edge.empty()) {
    const auto count = static_cast<double>(report.per_edge.size());
    report.success_rate = static_cast<double>(hits) / count;
    report.predicted_success_rate = predicted / count;
  }

  // Both readings of the closed-form reference, side by side: the two-stage
  // guess 1/(k'n) and the type-only guess 1/k', averaged over the evaluated
  // edges' targets.
  double two_stage = 0, type_only = 0;
  for (const auto& result : report.per_edge) {
    const User& target = graph.user(result.target_user);
    const auto k_eff = static_cast<double>(target.groups.size());
    const auto n = static_cast<double>(target.snode_count());
    two_stage += 1.0 / (k_eff * n);
    type_only += 1.0 / k_eff;
  }
  if (!report.per_edge.empty()) {
    const auto count = static_cast<double>(report.per_edge.size());
    two_stage /= count;
    type_only /= count;
  }
  report.analytic_reference = {{"two_stage_guess", two_stage}, {"type_only_guess", type_only}};
}

}  // namespace

std::uint32_t Hypothesis::total() const {
  std::uint32_t n = 0;
  for (const auto& [label, size] : label_counts) n += size;
  return n;
}

Hypothesis true_hypothesis(const Graph& graph, const UserId& target) {
  Hypothesis h;
  for (const auto& group : graph.user(target).groups) h.label_counts[group.key.label] += group.capacity();
  return h;
}

Knowledge pool_knowledge(const Graph& graph, const std::set<UserId>& coalition,
                         const UserId& target) {
  Knowledge knowledge;
  for (const auto& edge : graph.edges()) {
    for (const auto* member_end : {&edge.a, &edge.b}) {
      const SnodeId& target_end = member_end == &edge.a ? edge.b : edge.a;
      if (coalition.count(member_end->owner) && target_end.owner == target) {
        knowledge.member_edges.push_back(MemberEdge{
            member_end->owner, graph.secretary(*member_end).private_tag, target_end, edge});
      }
    }
  }
  return knowledge;
}

double simulate_two_stage_guess(std::uint32_t n, std::uint32_t k, std::uint64_t trials,
                                std::uint64_t seed) {
  if (n == 0 || k == 0 || k > n) fail(Errc::domain_error, "need 1 <= k <= n");
  if (trials == 0) fail(Errc::domain_error, "need at least one trial");

  std::uint64_t wins = 0;
  for (std::uint64_t trial = 0; trial < trials; ++trial) {
    Rng rng(Rng::derive(seed, trial));
    const bool stage1 = rng.below(n) == k - 1;  // guessed the type count
    const bool stage2 = rng.below(k) == 0;      // guessed the type itself
    wins += (stage1 && stage2) ? 1 : 0;
  }
  return static_cast<double>(wins) / static_cast<double>(trials);
}

std::map<std::string, double> counting_posterior(const Hypothesis& hypothesis,
                                                 const std::map<SnodeId, std::string>& pins,
                                                 const SnodeId& snode) {
  std::map<std::string, std::uint32_t> pinned_per_label;
  for (const auto& [pinned_snode, label] : pins) {
    if (!hypothesis.label_counts.count(label))
      fail(Errc::inconsistent_knowledge, "pinned label '" + label + "' is not in the hypothesis");
    ++pinned_per_label[label];
  }
  for (const auto& [label, pinned] : pinned_per_label) {
    if (pinned > hypothesis.label_counts.at(label))
      fail(Errc::inconsistent_knowledge,
           "more snodes pinned to '" + label + "' than the hypothesis allows");
  }

  std::map<std::string, double> posterior;
  const auto pin = pins.find(snode);
  if (pin != pins.end()) {
    for (const auto& [label, size] : hypothesis.label_counts)
      posterior[label] = label == pin->second ? 1.0 : 0.0;
    return posterior;
  }

  const std::uint32_t remaining = hypothesis.total() - static_cast<std::uint32_t>(pins.size());
  if (remaining == 0)
    fail(Errc::inconsistent_knowledge, "pins cover the whole pool but not this snode");
  for (const auto& [label, size] : hypothesis.label_counts) {
    const auto it = pinned_per_label.find(label);
    const std::uint32_t pinned = it == pinned_per_label.end() ? 0 : it->second;
    posterior[label] = static_cast<double>(size - pinned) / static_cast<double>(remaining);
  }
  return posterior;
}

InferenceResult enumerate_posterior(const PublicView& view, const Knowledge& knowledge,
                                    const UserId& target, const Edge& target_edge,
                                    const Hypothesis& hypothesis, std::uint32_t exact_limit) {
  std::vector<SnodeId> pool;
  for (const auto& [id, snode] : view.snodes)
    if (snode.owner == target) pool.push_back(id);
  if (pool.empty()) fail(Errc::unknown_user, "target '" + target + "' has no snodes in the view");

  const auto n = static_cast<std::uint32_t>(pool.size());
  if (hypothesis.total() != n)
    fail(Errc::domain_error, "hypothesis sizes sum to " + std::to_string(hypothesis.total()) +
                                 " but the target has " + std::to_string(n) + " snodes");
  if (n > exact_limit)
    fail(Errc::too_large, "target has " + std::to_string(n) + " snodes, exact limit is " +
                              std::to_string(exact_limit));
  if (assignment_count(hypothesis) > 10'000'000ull)
    fail(Errc::too_large, "hypothesis space has " + std::to_string(assignment_count(hypothesis)) +
                              " assignments");

  const SnodeId& target_snode = target_edge.endpoint_of(target);
  const auto position_of = [&](const SnodeId& id) {
    const auto it = std::lower_bound(pool.begin(), pool.end(), id);
    if (it == pool.end() || *it != id)
      fail(Errc::unknown_snode, "snode '" + id.str() + "' is not in the target's pool");
    return static_cast<std::size_t>(it - pool.begin());
  };
  const std::size_t target_pos = position_of(target_snode);

  std::vector<std::string> labels;
  std::vector<std::uint8_t> assignment;
  for (const auto& [label, size] : hypothesis.label_counts) {
    for (std::uint32_t i = 0; i < size; ++i)
      assignment.push_back(static_cast<std::uint8_t>(labels.size()));
    labels.push_back(label);
  }

  std::vector<std::pair<std::size_t, std::uint8_t>> pin_checks;
  for (const auto& [snode, label] : knowledge.pinned_labels) {
    if (snode.owner != target)
      fail(Errc::inconsistent_knowledge, "pinned snode '" + snode.str() + "' is not the target's");
    const auto it = std::find(labels.begin(), labels.end(), label);
    if (it == labels.end())
      fail(Errc::inconsistent_knowledge, "pinned label '" + label + "' is not in the hypothesis");
    pin_checks.emplace_back(position_of(snode), static_cast<std::uint8_t>(it - labels.begin()));
  }

  std::uint64_t total = 0;
  std::vector<std::uint64_t> tally(labels.size(), 0);
  do {
    bool consistent = true;
    for (const auto& [pos, label_index] : pin_checks) {
      if (assignment[pos] != label_index) {
        consistent = false;
        break;
      }
    }
    if (consistent) {
      ++total;
      ++tally[assignment[target_pos]];
    }
  } while (std::next_permutation(assignment.begin(), assignment.end()));

  if (total == 0)
    fail(Errc::inconsistent_knowledge, "no assignment is consistent with the pinned labels");

  std::map<std::string, double> posterior;
  for (std::size_t i = 0; i < labels.size(); ++i)
    posterior[labels[i]] = static_cast<double>(tally[i]) / static_cast<double>(total);
  return make_result(target_edge, target, target_snode, std::move(posterior), true);
}

AttackReport seeker_attack(const Graph& graph) {
  AttackReport report;
  report.model = "seeker";
  const PublicView view = graph.export_public_view();
  for (const auto& edge : view.edges) {
    for (const auto* end : {&edge.a, &edge.b}) {
      const Hypothesis h = true_hypothesis(graph, end->owner);
      report.per_edge.push_back(make_result(edge, end->owner, *end, uniform_over_labels(h), false));
    }
  }
  finish_report(graph, report);
  return report;
}

AttackReport passive_collusion_attack(const Graph& graph, const std::set<UserId>& coalition,
                                      std::uint64_t seed, std::uint32_t exact_limit) {
  if (coalition.empty()) fail(Errc::domain_error, "coalition must not be empty");
  for (const auto& member : coalition) graph.user(member);

  AttackReport report;
  report.model = "passive";
  report.seed = seed;

  std::set<UserId> targets;
  for (const auto& edge : graph.edges()) {
    for (const auto* end : {&edge.a, &edge.b}) {
      const UserId& other = (end == &edge.a ? edge.b : edge.a).owner;
      if (coalition.count(end->owner) && !coalition.count(other)) targets.insert(other);
    }
  }

  for (const auto& target : targets) {
    const Knowledge knowledge = pool_knowledge(graph, coalition, target);
    const Hypothesis hypothesis = true_hypothesis(graph, target);
    const bool exact = hypothesis.total() <= exact_limit;
    for (const auto& observed : knowledge.member_edges) {
      // Edges into one snode form a co-connection cluster and share one
      // posterior; distinct snodes are exchangeable under the hypothesis.
      auto posterior =
          exact ? counting_posterior(hypothesis, knowledge.pinned_labels, observed.target_snode)
                : uniform_over_labels(hypothesis);  // no inference beyond the guard
      report.per_edge.push_back(
          make_result(observed.edge, target, observed.target_snode, std::move(posterior), exact));
    }
  }
  finish_report(graph, report);
  return report;
}

AttackReport active_attack(const Graph& graph, const UserId& attacker, const UserId& target,
                           std::uint32_t probes, std::uint64_t seed, TargetBehavior behavior,
                           std::uint32_t exact_limit) {
  graph.user(attacker);
  const User& target_user = graph.user(target);
  if (attacker == target) fail(Errc::self_connection, "attacker cannot probe itself");
  if (probes > target_user.threshold)
    fail(Errc::threshold_exceeded, "probe count exceeds the target's threshold of " +
                                       std::to_string(target_user.threshold));

  AttackReport report;
  report.model = "active";
  report.seed = seed;

  std::vector<GroupKey> target_groups;
  for (const auto& group : target_user.groups) target_groups.push_back(group.key);

  Graph scratch = graph;
  std::vector<MemberEdge> observations;
  const GroupKey probe_group{"probe", 1, std::nullopt};
  for (std::uint32_t i = 0; i < probes; ++i) {
    std::string sybil = attacker + ".probe" + std::to_string(i);
    while (scratch.has_user(sybil)) sybil += "x";
    scratch.setup_naive(sybil, 1, 1, 1, {probe_group.label}, Rng::derive(seed, 0x10000 + i));

    const auto& request = scratch.request_connection(sybil, probe_group, target);
    Rng rng(Rng::derive(seed, i));
    std::size_t pick = 0;
    switch (behavior) {
      case TargetBehavior::uniform:
        pick = static_cast<std::size_t>(rng.below(target_groups.size()));
        break;
    }
    const Edge edge = scratch.accept_connection(request.id, target_groups[pick]);
    const SnodeId& hit = edge.endpoint_of(target);
    ++report.probe_histogram[hit];
    observations.push_back(MemberEdge{sybil, probe_group, hit, edge});
  }

  const Hypothesis hypothesis = true_hypothesis(scratch, target);
  const bool exact = hypothesis.total() <= exact_limit;
  for (const auto& observed : observations) {
    auto posterior = exact ? counting_posterior(hypothesis, {}, observed.target_snode)
                           : uniform_over_labels(hypothesis);
    report.per_edge.push_back(
        make_result(observed.edge, target, observed.target_snode, std::move(posterior), exact));
  }
  finish_report(scratch, report);
  return report;
}

nlohmann::json attack_report_json(const AttackReport& report) {
  nlohmann::json per_edge = nlohmann::json::array();
  for (std::size_t i = 0; i < report.per_edge.size(); ++i) {
    const InferenceResult& r = report.per_edge[i];
    nlohmann::json posterior = nlohmann::json::object();
    for (const auto& [label, p] : r.posterior) posterior[label] = p;
    per_edge.push_back(nlohmann::json{
        {"edge", {{"a", r.edge.a.str()}, {"b", r.edge.b.str()}}},
        {"target_user", r.target_user},
        {"target_snode", r.target_snode.str()},
        {"posterior", posterior},
        {"guess", r.guess},
        {"exact", r.exact},
        {"montecarlo", r.montecarlo},
        {"correct", static_cast<bool>(report.correct[i])},
    });
  }

  nlohmann::json doc{
      {"model", report.model},
      {"seed", report.seed},
      {"per_edge", per_edge},
      {"summary",
       {{"edges", report.per_edge.size()},
        {"success_rate", report.success_rate},
        {"predicted_success_rate", report.predicted_success_rate},
        {"analytic_reference", report.analytic_reference}}},
  };
  if (report.model == "active") {
    nlohmann::json histogram = nlohmann::json::object();
    for (const auto& [snode, hits] : report.probe_histogram) histogram[snode.str()] = hits;
    doc["probe_histogram"] = histogram;
  }
  return doc;
}

}  // namespace secgraph
