#pragma once

// Scenario scripting: a JSON file declares users, connections, policies and
// attacks; replaying it is deterministic given its seed. The runner writes
// graph.json, public.json, public.dot, metrics.json, policies.json and one
// attack-<i>.json per attack into the output directory.

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "secgraph/access.hpp"
#include "secgraph/adversary.hpp"
#include "secgraph/graph.hpp"

namespace secgraph {

struct ScenarioUser {
  UserId id;
  bool advanced = false;
  std::uint32_t threshold = 0;
  // naive scheme
  std::uint32_t n = 0;
  std::uint32_t tau = 0;
  std::vector<std::string> types;
  // advanced scheme
  std::vector<AdvancedGroupSpec> groups;

  std::optional<std::uint64_t> seed;       // default: derived from the scenario seed
  std::optional<std::string> public_tag;   // default: the scenario-wide tag
};

struct ScenarioConnection {
  UserId requester;
  GroupKey requester_group;
  UserId target;
  GroupKey target_group;
};

struct ScenarioPolicy {
  UserId owner;
  bool allow_sensitive_guest = false;
  PermissionSet guest;
  std::map<GroupKey, PermissionSet> entries;
};

struct ScenarioAttack {
  std::string model;  // "seeker" | "passive" | "active"
  std::set<UserId> coalition;
  UserId attacker;
  UserId target;
  std::uint32_t probes = 0;
  std::optional<std::uint64_t> seed;
  std::uint32_t exact_limit = kDefaultExactLimit;
};

struct Scenario {
  std::uint64_t seed = 0;
  std::string public_tag = kDefaultPublicTag;
  std::vector<ScenarioUser> users;
  std::vector<ScenarioConnection> connections;
  std::vector<ScenarioPolicy> policies;
  std::vector<ScenarioAttack> attacks;
};

/// Throws ParseError on malformed JSON or a malformed document shape.
Scenario parse_scenario(const std::string& text);
Scenario load_scenario(const std::filesystem::path& file);

/// Checks that every reference resolves against the declared users and their
/// declared groups, before anything executes. Throws ValidationError.
void validate_scenario(const Scenario& scenario);

struct ScenarioOutputs {
  Graph graph;
  std::vector<Policy> policies;
  std::vector<AttackReport> attacks;
};

/// Setup, connections, policies and attacks, in order. Operation failures
/// surface as the underlying error annotated with the failing op's index.
ScenarioOutputs execute_scenario(const Scenario& scenario);

/// Builds users only (the setup section).
Graph build_users(const Scenario& scenario);

/// Applies the connection list to an existing graph.
void apply_connections(Graph& graph, const Scenario& scenario);

/// Full run: execute, then write every output file under out_dir.
ScenarioOutputs run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir);

void write_file(const std::filesystem::path& file, const std::string& bytes);
std::string read_file(const std::filesystem::path& file);

}  // namespace secgraph
