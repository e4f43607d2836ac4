#include "secgraph/scenario.hpp"

#include <fstream>
#include <sstream>

#include "secgraph/dot.hpp"
#include "secgraph/metrics.hpp"
#include "secgraph/rng.hpp"
#include "secgraph/serialize.hpp"

namespace secgraph {

namespace {

using nlohmann::json;

const json& member(const json& doc, const char* key) {
  const auto it = doc.find(key);
  if (it == doc.end()) fail(Errc::parse_error, std::string("missing key '") + key + "'");
  return *it;
}

void expect_keys(const json& doc, const std::set<std::string>& allowed, const char* what) {
  if (!doc.is_object()) fail(Errc::parse_error, std::string(what) + " must be an object");
  for (const auto& [key, value] : doc.items())
    if (!allowed.count(key))
      fail(Errc::parse_error, std::string("unexpected key '") + key + "' in " + what);
}

template <typename T>
T as(const json& value, const char* what) {
  try {
    return value.get<T>();
  } catch (const json::exception&) {
    fail(Errc::parse_error, std::string("bad value for ") + what);
  }
}

GroupKey parse_group_key(const json& value, const char* what) {
  return GroupKey::parse(as<std::string>(value, what));
}

PermissionSet parse_permissions(const json& value, const char* what) {
  if (!value.is_array()) fail(Errc::parse_error, std::string(what) + " must be an array");
  PermissionSet set;
  for (const json& p : value) set.insert(permission_from_name(as<std::string>(p, what)));
  return set;
}

ScenarioUser parse_user(const json& doc) {
  expect_keys(doc, {"id", "scheme", "threshold", "n", "tau", "types", "groups", "seed",
                    "public_tag"},
              "user");
  ScenarioUser user;
  user.id = as<std::string>(member(doc, "id"), "user id");
  const auto scheme = as<std::string>(member(doc, "scheme"), "scheme");
  user.threshold = as<std::uint32_t>(member(doc, "threshold"), "threshold");
  if (doc.contains("seed")) user.seed = as<std::uint64_t>(doc["seed"], "seed");
  if (doc.contains("public_tag")) user.public_tag = as<std::string>(doc["public_tag"], "public_tag");

  if (scheme == "naive") {
    user.advanced = false;
    user.n = as<std::uint32_t>(member(doc, "n"), "n");
    user.tau = as<std::uint32_t>(member(doc, "tau"), "tau");
    for (const json& t : member(doc, "types"))
      user.types.push_back(as<std::string>(t, "type label"));
  } else if (scheme == "advanced") {
    user.advanced = true;
    for (const json& g : member(doc, "groups")) {
      expect_keys(g, {"label", "instance", "capacity", "subtype"}, "group spec");
      AdvancedGroupSpec spec;
      spec.label = as<std::string>(member(g, "label"), "label");
      spec.instance = as<std::uint32_t>(member(g, "instance"), "instance");
      spec.capacity = as<std::uint32_t>(member(g, "capacity"), "capacity");
      if (g.contains("subtype")) spec.subtype = as<std::string>(g["subtype"], "subtype");
      user.groups.push_back(std::move(spec));
    }
  } else {
    fail(Errc::parse_error, "scheme must be 'naive' or 'advanced', got '" + scheme + "'");
  }
  return user;
}

ScenarioAttack parse_attack(const json& doc) {
  expect_keys(doc, {"model", "coalition", "attacker", "target", "probes", "seed", "exact_limit"},
              "attack");
  ScenarioAttack attack;
  attack.model = as<std::string>(member(doc, "model"), "model");
  if (doc.contains("seed")) attack.seed = as<std::uint64_t>(doc["seed"], "seed");
  if (doc.contains("exact_limit"))
    attack.exact_limit = as<std::uint32_t>(doc["exact_limit"], "exact_limit");

  if (attack.model == "seeker") {
    // nothing else
  } else if (attack.model == "passive") {
    for (const json& m : member(doc, "coalition"))
      attack.coalition.insert(as<std::string>(m, "coalition member"));
  } else if (attack.model == "active") {
    attack.attacker = as<std::string>(member(doc, "attacker"), "attacker");
    attack.target = as<std::string>(member(doc, "target"), "target");
    attack.probes = as<std::uint32_t>(member(doc, "probes"), "probes");
  } else {
    fail(Errc::parse_error, "model must be seeker, passive or active, got '" + attack.model + "'");
  }
  return attack;
}

std::set<GroupKey> declared_groups(const ScenarioUser& user) {
  std::set<GroupKey> keys;
  if (user.advanced) {
    for (const auto& g : user.groups) keys.insert(GroupKey{g.label, g.instance, g.subtype});
  } else {
    for (const auto& label : user.types) keys.insert(GroupKey{label, 1, std::nullopt});
  }
  return keys;
}

// Annotates an op failure with its position so the first failing op is
// reportable; the underlying code is preserved.
template <typename F>
auto at_op(const char* phase, std::size_t index, F&& body) {
  try {
    return body();
  } catch (const Error& e) {
    throw Error::raw(e.code(),
                     std::string(phase) + " op " + std::to_string(index) + ": " + e.what());
  }
}

}  // namespace

Scenario parse_scenario(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::parse_error, e.what());
  }

  try {
    expect_keys(doc, {"seed", "public_tag", "users", "connections", "policies", "attacks"},
                "scenario");
    Scenario scenario;
    if (doc.contains("seed")) scenario.seed = as<std::uint64_t>(doc["seed"], "seed");
    if (doc.contains("public_tag"))
      scenario.public_tag = as<std::string>(doc["public_tag"], "public_tag");

    if (doc.contains("users"))
      for (const json& u : doc["users"]) scenario.users.push_back(parse_user(u));

    if (doc.contains("connections")) {
      for (const json& c : doc["connections"]) {
        expect_keys(c, {"requester", "requester_group", "target", "target_group"}, "connection");
        scenario.connections.push_back(ScenarioConnection{
            as<std::string>(member(c, "requester"), "requester"),
            parse_group_key(member(c, "requester_group"), "requester_group"),
            as<std::string>(member(c, "target"), "target"),
            parse_group_key(member(c, "target_group"), "target_group"),
        });
      }
    }

    if (doc.contains("policies")) {
      for (const json& p : doc["policies"]) {
        expect_keys(p, {"owner", "guest", "entries", "allow_sensitive_guest"}, "policy");
        ScenarioPolicy policy;
        policy.owner = as<std::string>(member(p, "owner"), "owner");
        if (p.contains("allow_sensitive_guest"))
          policy.allow_sensitive_guest = as<bool>(p["allow_sensitive_guest"], "flag");
        if (p.contains("guest")) policy.guest = parse_permissions(p["guest"], "guest");
        if (p.contains("entries")) {
          for (const auto& [key, value] : p["entries"].items())
            policy.entries.emplace(GroupKey::parse(key), parse_permissions(value, "entry"));
        }
        scenario.policies.push_back(std::move(policy));
      }
    }

    if (doc.contains("attacks"))
      for (const json& a : doc["attacks"]) scenario.attacks.push_back(parse_attack(a));

    return scenario;
  } catch (const Error& e) {
    if (e.code() == Errc::malformed_input) fail(Errc::parse_error, e.what());
    throw;
  }
}

Scenario load_scenario(const std::filesystem::path& file) { return parse_scenario(read_file(file)); }

void validate_scenario(const Scenario& scenario) {
  std::map<UserId, std::set<GroupKey>> groups;
  for (const auto& user : scenario.users) {
    if (!groups.emplace(user.id, declared_groups(user)).second)
      fail(Errc::validation_error, "user '" + user.id + "' declared twice");
  }
  const auto known_user = [&](const UserId& id, const char* role) {
    if (!groups.count(id))
      fail(Errc::validation_error, std::string(role) + " references unknown user '" + id + "'");
  };
  const auto known_group = [&](const UserId& id, const GroupKey& key, const char* role) {
    if (!groups.at(id).count(key))
      fail(Errc::validation_error, std::string(role) + " references unknown group '" + key.str() +
                                       "' of user '" + id + "'");
  };

  for (const auto& c : scenario.connections) {
    known_user(c.requester, "connection");
    known_user(c.target, "connection");
    known_group(c.requester, c.requester_group, "connection");
    known_group(c.target, c.target_group, "connection");
  }
  for (const auto& p : scenario.policies) {
    known_user(p.owner, "policy");
    for (const auto& [key, permissions] : p.entries) known_group(p.owner, key, "policy");
  }
  for (const auto& a : scenario.attacks) {
    if (a.model == "passive") {
      if (a.coalition.empty()) fail(Errc::validation_error, "passive attack with empty coalition");
      for (const auto& m : a.coalition) known_user(m, "attack coalition");
    } else if (a.model == "active") {
      known_user(a.attacker, "attack");
      known_user(a.target, "attack");
    }
  }
}

Graph build_users(const Scenario& scenario) {
  Graph graph(scenario.seed);
  for (std::size_t i = 0; i < scenario.users.size(); ++i) {
    const ScenarioUser& u = scenario.users[i];
    at_op("users", i, [&] {
      const std::uint64_t seed = u.seed.value_or(Rng::derive(scenario.seed, 0x100 + i));
      const std::string tag = u.public_tag.value_or(scenario.public_tag);
      if (u.advanced)
        graph.setup_advanced(u.id, u.groups, u.threshold, seed, tag);
      else
        graph.setup_naive(u.id, u.n, u.tau, u.threshold, u.types, seed, tag);
      return 0;
    });
  }
  return graph;
}

void apply_connections(Graph& graph, const Scenario& scenario) {
  for (std::size_t i = 0; i < scenario.connections.size(); ++i) {
    const ScenarioConnection& c = scenario.connections[i];
    at_op("connections", i, [&] {
      const auto& request = graph.request_connection(c.requester, c.requester_group, c.target);
      graph.accept_connection(request.id, c.target_group);
      return 0;
    });
  }
}

ScenarioOutputs execute_scenario(const Scenario& scenario) {
  validate_scenario(scenario);
  ScenarioOutputs outputs{build_users(scenario), {}, {}};
  apply_connections(outputs.graph, scenario);

  for (std::size_t i = 0; i < scenario.policies.size(); ++i) {
    const ScenarioPolicy& p = scenario.policies[i];
    at_op("policies", i, [&] {
      Policy policy(p.owner, p.allow_sensitive_guest);
      policy.set_guest(p.guest);
      for (const auto& [key, permissions] : p.entries)
        policy.set_entry(outputs.graph, key, permissions);
      outputs.policies.push_back(std::move(policy));
      return 0;
    });
  }

  for (std::size_t i = 0; i < scenario.attacks.size(); ++i) {
    const ScenarioAttack& a = scenario.attacks[i];
    at_op("attacks", i, [&] {
      const std::uint64_t seed = a.seed.value_or(Rng::derive(scenario.seed, 0x200 + i));
      if (a.model == "seeker") {
        outputs.attacks.push_back(seeker_attack(outputs.graph));
      } else if (a.model == "passive") {
        outputs.attacks.push_back(
            passive_collusion_attack(outputs.graph, a.coalition, seed, a.exact_limit));
      } else {
        outputs.attacks.push_back(
            active_attack(outputs.graph, a.attacker, a.target, a.probes, seed,
                          TargetBehavior::uniform, a.exact_limit));
      }
      return 0;
    });
  }
  return outputs;
}

ScenarioOutputs run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir) {
  ScenarioOutputs outputs = execute_scenario(scenario);
  std::filesystem::create_directories(out_dir);

  write_file(out_dir / "graph.json", serialize_graph(outputs.graph));
  write_file(out_dir / "public.json", serialize_public_view(outputs.graph.export_public_view()));
  write_file(out_dir / "public.dot", export_dot(outputs.graph.export_public_view()));
  write_file(out_dir / "metrics.json", canonical_dump(metrics_json(outputs.graph)));

  nlohmann::json policies = nlohmann::json::array();
  for (const auto& policy : outputs.policies) policies.push_back(policy_to_json(policy));
  write_file(out_dir / "policies.json", canonical_dump(policies));

  for (std::size_t i = 0; i < outputs.attacks.size(); ++i) {
    write_file(out_dir / ("attack-" + std::to_string(i) + ".json"),
               canonical_dump(attack_report_json(outputs.attacks[i])));
  }
  return outputs;
}

void write_file(const std::filesystem::path& file, const std::string& bytes) {
  std::ofstream out(file, std::ios::binary | std::ios::trunc);
  if (!out) fail(Errc::validation_error, "cannot write '" + file.string() + "'");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(Errc::validation_error, "short write to '" + file.string() + "'");
}

std::string read_file(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) fail(Errc::parse_error, "cannot read '" + file.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

}  // namespace secgraph
