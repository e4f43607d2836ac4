#pragma once

// Threat-model simulator: seeker (public view only), passive coalition
// (pooled local knowledge) and active attacker (sybil probes), plus an exact
// brute-force posterior oracle for small targets.
//
// Attacks read an immutable graph snapshot and never mutate their input;
// identical seeds yield identical reports.

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "secgraph/graph.hpp"

namespace secgraph {

inline constexpr std::uint32_t kDefaultExactLimit = 12;

/// One observation a coalition member can make from its own state: the
/// target snode its edge lands on (public) and the member's own chosen group
/// (local). Nothing about the target's private tags.
struct MemberEdge {
  UserId member;
  GroupKey member_group;
  SnodeId target_snode;
  Edge edge;
};

/// Pooled coalition knowledge about one target. pinned_labels carries
/// externally learned target tags; coalition pooling alone never produces
/// any, so it is normally empty.
struct Knowledge {
  std::vector<MemberEdge> member_edges;
  std::map<SnodeId, std::string> pinned_labels;
};

Knowledge pool_knowledge(const Graph& graph, const std::set<UserId>& coalition,
                         const UserId& target);

/// Assumed group structure of a target: type label -> snode count. Instances
/// of one label are merged, since the posterior ranges over type labels.
struct Hypothesis {
  std::map<std::string, std::uint32_t> label_counts;

  std::uint32_t total() const;
};

/// The target's real structure, as a hypothesis handed to the adversary.
Hypothesis true_hypothesis(const Graph& graph, const UserId& target);

struct InferenceResult {
  Edge edge;
  UserId target_user;
  SnodeId target_snode;
  std::map<std::string, double> posterior;  // sums to 1
  std::string guess;                        // argmax, ties to the smaller label
  bool exact = false;
  bool montecarlo = false;
};

/// Two-stage guessing game against one snode: first guess the type count
/// (uniform over 1..n, wins on k), then the type itself (uniform over k).
/// Returns the fraction of trials winning both stages. Per-trial randomness
/// derives from (seed, trial index).
double simulate_two_stage_guess(std::uint32_t n, std::uint32_t k, std::uint64_t trials,
                                std::uint64_t seed);

/// Brute-force posterior for the type of target_edge: enumerates every
/// assignment of the target's snodes to labels that matches the hypothesis
/// counts and the pinned labels, then reports per-label fractions. An
/// assignment gives each snode exactly one label, so edges sharing a snode
/// are same-typed in every assignment; pins are the only other constraint.
/// Refuses targets beyond exact_limit snodes or hypothesis spaces beyond
/// ~10^7 assignments.
InferenceResult enumerate_posterior(const PublicView& view, const Knowledge& knowledge,
                                    const UserId& target, const Edge& target_edge,
                                    const Hypothesis& hypothesis,
                                    std::uint32_t exact_limit = kDefaultExactLimit);

/// Closed-form route to the same posterior: with pins fixed, the remaining
/// snodes are exchangeable, so an unpinned snode carries label t with
/// probability (count_t - pinned_t) / (n - pinned). Kept independent of the
/// enumeration path so the two can cross-check each other.
std::map<std::string, double> counting_posterior(const Hypothesis& hypothesis,
                                                 const std::map<SnodeId, std::string>& pins,
                                                 const SnodeId& snode);

struct AttackReport {
  std::string model;
  std::uint64_t seed = 0;
  std::vector<InferenceResult> per_edge;
  std::vector<bool> correct;  // ground truth per result
  double success_rate = 0;
  double predicted_success_rate = 0;  // mean posterior mass on the argmax
  std::map<std::string, double> analytic_reference;
  std::map<SnodeId, std::uint64_t> probe_histogram;  // active attacks only
};

/// Baseline browsing adversary: sees only the public view, so every edge
/// gets the uniform posterior over its endpoint owner's labels.
AttackReport seeker_attack(const Graph& graph);

/// Colluding pre-connected adversaries. Pools the coalition's local
/// observations, clusters contacted snodes by co-connection and infers a
/// posterior per member edge (exact below the size guard, declared
/// "no inference" above it).
AttackReport passive_collusion_attack(const Graph& graph, const std::set<UserId>& coalition,
                                      std::uint64_t seed,
                                      std::uint32_t exact_limit = kDefaultExactLimit);

/// How a probed target picks the group it accepts strangers into.
enum class TargetBehavior {
  uniform,  // uniform over the target's groups
};

/// Sybil probing: creates `probes` fresh single-snode users on a scratch
/// copy of the graph, connects each to the target through the normal
/// request/accept path and reports the observed snode-selection histogram
/// plus per-probe inferences.
AttackReport active_attack(const Graph& graph, const UserId& attacker, const UserId& target,
                           std::uint32_t probes, std::uint64_t seed,
                           TargetBehavior behavior = TargetBehavior::uniform,
                           std::uint32_t exact_limit = kDefaultExactLimit);

nlohmann::json attack_report_json(const AttackReport& report);

}  // namespace secgraph
