// secgraph CLI: builds secretary graphs from scenario files, exports public
// views, computes privacy metrics and runs adversary simulations.
//
// Exit codes: 0 success, 2 parse error, 3 validation error, 4 operation
// error, 1 anything unexpected.

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "secgraph/adversary.hpp"
#include "secgraph/dot.hpp"
#include "secgraph/metrics.hpp"
#include "secgraph/scenario.hpp"
#include "secgraph/serialize.hpp"

namespace {

using namespace secgraph;

int exit_code_for(Errc code) {
  switch (code) {
    case Errc::parse_error:
    case Errc::malformed_input:
    case Errc::version_mismatch:
      return 2;
    case Errc::validation_error:
      return 3;
    default:
      return 4;
  }
}

Scenario load_validated(const std::string& input, std::optional<std::uint64_t> seed_override) {
  Scenario scenario = load_scenario(input);
  if (seed_override) scenario.seed = *seed_override;
  validate_scenario(scenario);
  return scenario;
}

std::set<UserId> split_ids(const std::string& csv) {
  std::set<UserId> ids;
  std::size_t start = 0;
  while (start <= csv.size()) {
    const auto comma = csv.find(',', start);
    const auto end = comma == std::string::npos ? csv.size() : comma;
    if (end > start) ids.insert(csv.substr(start, end - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return ids;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"secretary-pool privacy-preserving social graph tool"};
  app.require_subcommand(1);

  std::string input;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed_override;

  const auto add_common = [&](CLI::App* cmd, bool needs_out) {
    cmd->add_option("--input", input, "input file")->required();
    if (needs_out) cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--seed", seed_override, "override the scenario seed");
    return cmd;
  };

  auto* run = add_common(app.add_subcommand("run", "execute a scenario file end to end"), true);
  auto* gen = add_common(app.add_subcommand("gen", "build the users of a scenario"), true);
  auto* connect =
      add_common(app.add_subcommand("connect", "apply a scenario's connection list to DIR/graph.json"),
                 true);

  auto* exp = app.add_subcommand("export", "project a graph file to its public form");
  exp->add_option("--input", input, "graph JSON file")->required();
  exp->add_option("--out", out_dir, "output directory");
  bool export_public = false, export_dot_flag = false;
  exp->add_flag("--public", export_public, "write public.json");
  exp->add_flag("--dot", export_dot_flag, "write public.dot");

  auto* metrics = app.add_subcommand("metrics", "privacy metrics for a graph file");
  metrics->add_option("--input", input, "graph JSON file")->required();
  metrics->add_option("--out", out_dir, "output directory");
  std::optional<double> opt_n, opt_k, opt_l, opt_c, opt_m;
  metrics->add_option("--n", opt_n, "override snodes per user");
  metrics->add_option("--k", opt_k, "override type count");
  metrics->add_option("--l", opt_l, "override instances per type");
  metrics->add_option("--c", opt_c, "override mean connections per user");
  metrics->add_option("--m", opt_m, "override user count");

  auto* attack = app.add_subcommand("attack", "simulate an adversary against a graph file");
  attack->add_option("--input", input, "graph JSON file")->required();
  attack->add_option("--out", out_dir, "output directory");
  std::string model;
  std::string coalition_csv;
  std::string attacker, target;
  std::uint32_t probes = 0;
  std::uint64_t attack_seed = 0;
  std::uint32_t exact_limit = kDefaultExactLimit;
  attack->add_option("--model", model, "seeker|passive|active")->required();
  attack->add_option("--coalition", coalition_csv, "comma-separated coalition user ids");
  attack->add_option("--attacker", attacker, "active attacker user id");
  attack->add_option("--target", target, "active attack target user id");
  attack->add_option("--probes", probes, "number of sybil probes");
  attack->add_option("--seed", attack_seed, "attack seed");
  attack->add_option("--exact-limit", exact_limit, "max snodes for exact posteriors");

  auto* acl = app.add_subcommand("acl", "access control queries");
  auto* acl_eval = acl->add_subcommand("eval", "evaluate a viewer's permissions on an owner's page");
  acl_eval->add_option("--input", input, "scenario file")->required();
  acl_eval->add_option("--seed", seed_override, "override the scenario seed");
  std::string owner, viewer;
  acl_eval->add_option("--owner", owner, "page owner")->required();
  acl_eval->add_option("--viewer", viewer, "viewing user")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    const std::filesystem::path out(out_dir);

    if (run->parsed()) {
      run_scenario(load_validated(input, seed_override), out);
    } else if (gen->parsed()) {
      const Scenario scenario = load_validated(input, seed_override);
      std::filesystem::create_directories(out);
      write_file(out / "graph.json", serialize_graph(build_users(scenario)));
    } else if (connect->parsed()) {
      const Scenario scenario = load_validated(input, seed_override);
      Graph graph = deserialize_graph(read_file(out / "graph.json"));
      apply_connections(graph, scenario);
      write_file(out / "graph.json", serialize_graph(graph));
    } else if (exp->parsed()) {
      const Graph graph = deserialize_graph(read_file(input));
      const PublicView view = graph.export_public_view();
      std::filesystem::create_directories(out);
      if (!export_public && !export_dot_flag) export_public = export_dot_flag = true;
      if (export_public) write_file(out / "public.json", serialize_public_view(view));
      if (export_dot_flag) write_file(out / "public.dot", export_dot(view));
    } else if (metrics->parsed()) {
      const Graph graph = deserialize_graph(read_file(input));
      NetworkParams params = infer_params(graph);
      if (opt_n) params.n = *opt_n;
      if (opt_k) params.k = *opt_k;
      if (opt_l) params.l = *opt_l;
      if (opt_c) params.c = *opt_c;
      if (opt_m) params.m = *opt_m;
      std::filesystem::create_directories(out);
      write_file(out / "metrics.json", canonical_dump(metrics_json(graph, params)));
    } else if (attack->parsed()) {
      const Graph graph = deserialize_graph(read_file(input));
      AttackReport report;
      if (model == "seeker") {
        report = seeker_attack(graph);
      } else if (model == "passive") {
        report = passive_collusion_attack(graph, split_ids(coalition_csv), attack_seed, exact_limit);
      } else if (model == "active") {
        if (attacker.empty() || target.empty())
          fail(Errc::validation_error, "active attacks need --attacker and --target");
        report = active_attack(graph, attacker, target, probes, attack_seed,
                               TargetBehavior::uniform, exact_limit);
      } else {
        fail(Errc::validation_error, "unknown attack model '" + model + "'");
      }
      std::filesystem::create_directories(out);
      write_file(out / "attack-0.json", canonical_dump(attack_report_json(report)));
    } else if (acl_eval->parsed()) {
      Scenario scenario = load_validated(input, seed_override);
      scenario.attacks.clear();
      const ScenarioOutputs outputs = execute_scenario(scenario);
      const Policy* policy = nullptr;
      for (const auto& p : outputs.policies)
        if (p.owner() == owner) policy = &p;
      if (!policy) fail(Errc::validation_error, "scenario declares no policy for '" + owner + "'");

      nlohmann::json permissions = nlohmann::json::array();
      for (const auto p : evaluate_access(outputs.graph, *policy, owner, viewer))
        permissions.push_back(permission_name(p));
      nlohmann::json members = nlohmann::json::array();
      for (const auto& m : visible_members(outputs.graph, *policy, owner, viewer))
        members.push_back(m);
      std::cout << canonical_dump(nlohmann::json{{"owner", owner},
                                                 {"viewer", viewer},
                                                 {"permissions", permissions},
                                                 {"visible_members", members}});
    }
  } catch (const Error& e) {
    std::cerr << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
