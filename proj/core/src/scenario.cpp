#include "macs/scenario.hpp"

#include <yaml-cpp/yaml.h>

#include <fstream>
#include <initializer_list>
#include <limits>
#include <set>
#include <sstream>

#include "macs/errors.hpp"

namespace macs {

NetworkConfig ScenarioConfig::default_network() {
  // Eight domains joined as a tree with hub degrees 3,3,2,2 and four leaves.
  EdgeListSpec edges;
  edges.domain_count = 8;
  for (auto [a, b] : std::initializer_list<std::pair<int, int>>{{0, 1}, {0, 2}, {0, 3}, {1, 4}, {1, 5}, {2, 6}, {3, 7}}) {
    edges.edges.push_back(Edge{a, b});
    edges.edges.push_back(Edge{b, a});
  }
  std::sort(edges.edges.begin(), edges.edges.end());
  NetworkConfig net;
  net.topology = edges;
  net.services = PlacementSpec{10, 2, {0, 1, 2, 3}, 0.7};
  net.seed = 7;
  return net;
}

namespace {

std::string where(const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  if (mark.line < 0) return "";
  return " (line " + std::to_string(mark.line + 1) + ")";
}

/// Rejects keys outside `allowed` and non-map sections.
void expect_keys(const YAML::Node& node, const std::string& section, std::initializer_list<const char*> allowed) {
  if (!node.IsMap()) throw ParseError("section '" + section + "' must be a mapping" + where(node));
  for (const auto& kv : node) {
    const std::string key = kv.first.as<std::string>();
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw UnknownKey("unknown key '" + section + "." + key + "'" + where(kv.first));
  }
}

template <class T>
void read(const YAML::Node& parent, const char* key, const std::string& section, T& out) {
  const YAML::Node node = parent[key];
  if (!node) return;
  try {
    out = node.as<T>();
  } catch (const YAML::Exception&) {
    throw ParseError("bad value for '" + section + "." + key + "'" + where(node));
  }
}

void parse_topology(const YAML::Node& node, NetworkConfig& net) {
  expect_keys(node, "topology", {"domains", "edges", "degree_sequence", "seed"});
  read(node, "seed", "topology", net.seed);
  const bool has_edges = static_cast<bool>(node["edges"]);
  const bool has_degrees = static_cast<bool>(node["degree_sequence"]);
  if (has_edges && has_degrees) {
    throw ParseError("topology takes either 'edges' or 'degree_sequence', not both" + where(node));
  }
  if (has_degrees) {
    DegreeSequenceSpec spec;
    read(node, "degree_sequence", "topology", spec.degrees);
    int domains = static_cast<int>(spec.degrees.size());
    read(node, "domains", "topology", domains);
    if (domains != static_cast<int>(spec.degrees.size())) {
      throw ParseError("topology.domains disagrees with the degree sequence length" + where(node["domains"]));
    }
    net.topology = spec;
  } else if (has_edges) {
    EdgeListSpec spec;
    if (!node["domains"]) throw ParseError("topology.edges needs topology.domains" + where(node));
    read(node, "domains", "topology", spec.domain_count);
    std::vector<std::vector<int>> pairs;
    read(node, "edges", "topology", pairs);
    for (const auto& p : pairs) {
      if (p.size() != 2) throw ParseError("topology.edges entries must be [src, dst] pairs" + where(node["edges"]));
      spec.edges.push_back(Edge{p[0], p[1]});
    }
    net.topology = spec;
  } else if (node["domains"]) {
    throw ParseError("topology.domains needs 'edges' or 'degree_sequence'" + where(node["domains"]));
  }
}

void parse_services(const YAML::Node& node, PlacementSpec& spec) {
  expect_keys(node, "services", {"count", "copies", "favored_domains", "favored_prob"});
  read(node, "count", "services", spec.service_count);
  read(node, "copies", "services", spec.copies);
  read(node, "favored_domains", "services", spec.favored_domains);
  read(node, "favored_prob", "services", spec.favored_prob);
}

void parse_dynamics(const YAML::Node& node, DynamicsConfig& dyn) {
  expect_keys(node, "dynamics", {"values", "change_profile", "budget_lambda", "requests_per_domain", "zipf"});
  if (const YAML::Node v = node["values"]) {
    expect_keys(v, "dynamics.values", {"kind", "set", "mean", "std", "clamp_min"});
    std::string kind = "uniform";
    read(v, "kind", "dynamics.values", kind);
    if (kind == "uniform") {
      UniformSetValues u;
      if (v["mean"] || v["std"] || v["clamp_min"]) {
        throw ParseError("uniform values take only 'set'" + where(v));
      }
      read(v, "set", "dynamics.values", u.values);
      dyn.value_distribution = u;
    } else if (kind == "gaussian") {
      GaussianValues g;
      if (v["set"]) throw ParseError("gaussian values do not take 'set'" + where(v["set"]));
      read(v, "mean", "dynamics.values", g.mean);
      read(v, "std", "dynamics.values", g.std);
      read(v, "clamp_min", "dynamics.values", g.clamp_min);
      dyn.value_distribution = g;
    } else {
      throw ParseError("dynamics.values.kind must be 'uniform' or 'gaussian'" + where(v["kind"]));
    }
  }
  if (const YAML::Node c = node["change_profile"]) {
    expect_keys(c, "dynamics.change_profile", {"mean", "std", "peak_prob"});
    read(c, "mean", "dynamics.change_profile", dyn.change_profile.mean);
    read(c, "std", "dynamics.change_profile", dyn.change_profile.std);
    read(c, "peak_prob", "dynamics.change_profile", dyn.change_profile.peak_prob);
  }
  read(node, "budget_lambda", "dynamics", dyn.budget_mean);
  read(node, "requests_per_domain", "dynamics", dyn.requests_per_domain);
  if (const YAML::Node z = node["zipf"]) {
    expect_keys(z, "dynamics.zipf", {"q", "beta"});
    read(z, "q", "dynamics.zipf", dyn.request_zipf.q);
    read(z, "beta", "dynamics.zipf", dyn.request_zipf.beta);
  }
}

void parse_agent(const YAML::Node& node, AgentConfig& agent, TrainingSection& training) {
  expect_keys(node, "agent", {"gamma", "learning_rate", "minibatch", "replay_capacity", "target_sync_gap",
                              "offset_unit", "updates_per_slot", "epsilon"});
  read(node, "gamma", "agent", agent.gamma);
  read(node, "learning_rate", "agent", agent.learning_rate);
  read(node, "minibatch", "agent", agent.minibatch);
  read(node, "replay_capacity", "agent", agent.replay_capacity);
  read(node, "target_sync_gap", "agent", agent.target_sync_gap);
  read(node, "offset_unit", "agent", agent.offset_unit);
  read(node, "updates_per_slot", "agent", agent.updates_per_slot);
  if (const YAML::Node e = node["epsilon"]) {
    expect_keys(e, "agent.epsilon", {"start", "end", "anneal_fraction"});
    read(e, "start", "agent.epsilon", agent.epsilon.start);
    read(e, "end", "agent.epsilon", agent.epsilon.end);
    read(e, "anneal_fraction", "agent.epsilon", training.epsilon_anneal_fraction);
  }
}

PolicyKind policy_from(const YAML::Node& node, const std::string& field) {
  std::string name;
  try {
    name = node.as<std::string>();
  } catch (const YAML::Exception&) {
    throw ParseError("bad policy name in '" + field + "'" + where(node));
  }
  auto kind = parse_policy_kind(name);
  if (!kind) throw ParseError("unknown policy '" + name + "' in '" + field + "'" + where(node));
  return *kind;
}

void parse_network(const YAML::Node& node, NetSection& net) {
  expect_keys(node, "network", {"trunk_hidden1", "trunk_hidden2", "head_hidden", "input_scale", "input_cap"});
  read(node, "trunk_hidden1", "network", net.trunk_hidden1);
  read(node, "trunk_hidden2", "network", net.trunk_hidden2);
  read(node, "head_hidden", "network", net.head_hidden);
  read(node, "input_scale", "network", net.input_scale);
  read(node, "input_cap", "network", net.input_cap);
}

void parse_training(const YAML::Node& node, TrainingSection& t) {
  expect_keys(node, "training", {"horizon", "pretrain_transitions", "pretrain_steps", "history_policy"});
  read(node, "horizon", "training", t.horizon);
  read(node, "pretrain_transitions", "training", t.pretrain_transitions);
  read(node, "pretrain_steps", "training", t.pretrain_steps);
  if (node["history_policy"]) t.history_policy = policy_from(node["history_policy"], "training.history_policy");
}

void parse_experiment(const YAML::Node& node, ExperimentSection& e) {
  expect_keys(node, "experiment", {"policies", "seeds", "train_seed", "eval_horizon", "output_dir", "checkpoint"});
  if (const YAML::Node p = node["policies"]) {
    if (!p.IsSequence()) throw ParseError("experiment.policies must be a list" + where(p));
    e.policies.clear();
    for (const auto& item : p) e.policies.push_back(policy_from(item, "experiment.policies"));
  }
  read(node, "seeds", "experiment", e.seeds);
  read(node, "train_seed", "experiment", e.train_seed);
  read(node, "eval_horizon", "experiment", e.eval_horizon);
  read(node, "output_dir", "experiment", e.output_dir);
  read(node, "checkpoint", "experiment", e.checkpoint);
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& ex) {
    throw ParseError("malformed config (line " + std::to_string(ex.mark.line + 1) + "): " + ex.msg);
  }
  ScenarioConfig cfg;
  if (!root || root.IsNull()) return cfg;
  expect_keys(root, "<root>", {"topology", "services", "dynamics", "agent", "network", "training", "experiment"});
  if (root["topology"]) parse_topology(root["topology"], cfg.network);
  if (root["services"]) parse_services(root["services"], cfg.network.services);
  if (root["dynamics"]) parse_dynamics(root["dynamics"], cfg.dynamics);
  if (root["agent"]) parse_agent(root["agent"], cfg.agent, cfg.training);
  if (root["network"]) parse_network(root["network"], cfg.net);
  if (root["training"]) parse_training(root["training"], cfg.training);
  if (root["experiment"]) parse_experiment(root["experiment"], cfg.experiment);
  validate(cfg);
  return cfg;
}

ScenarioConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str());
  } catch (const ConfigError& ex) {
    // Re-throw with the file name prefixed, keeping the error kind.
    const std::string msg = path.string() + ": " + ex.what();
    if (dynamic_cast<const UnknownKey*>(&ex)) throw UnknownKey(msg);
    if (dynamic_cast<const ParseError*>(&ex)) throw ParseError(msg);
    throw ConfigError(msg);
  }
}

std::string serialize_config(const ScenarioConfig& cfg) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;

  out << YAML::Key << "topology" << YAML::Value << YAML::BeginMap;
  if (const auto* list = std::get_if<EdgeListSpec>(&cfg.network.topology)) {
    out << YAML::Key << "domains" << YAML::Value << list->domain_count;
    out << YAML::Key << "edges" << YAML::Value << YAML::Flow << YAML::BeginSeq;
    for (const Edge& e : list->edges) out << YAML::Flow << YAML::BeginSeq << e.src << e.dst << YAML::EndSeq;
    out << YAML::EndSeq;
  } else {
    out << YAML::Key << "degree_sequence" << YAML::Value << YAML::Flow
        << std::get<DegreeSequenceSpec>(cfg.network.topology).degrees;
  }
  out << YAML::Key << "seed" << YAML::Value << cfg.network.seed;
  out << YAML::EndMap;

  const PlacementSpec& svc = cfg.network.services;
  out << YAML::Key << "services" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "count" << YAML::Value << svc.service_count;
  out << YAML::Key << "copies" << YAML::Value << svc.copies;
  out << YAML::Key << "favored_domains" << YAML::Value << YAML::Flow << svc.favored_domains;
  out << YAML::Key << "favored_prob" << YAML::Value << svc.favored_prob;
  out << YAML::EndMap;

  const DynamicsConfig& dyn = cfg.dynamics;
  out << YAML::Key << "dynamics" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "values" << YAML::Value << YAML::BeginMap;
  if (const auto* g = std::get_if<GaussianValues>(&dyn.value_distribution)) {
    out << YAML::Key << "kind" << YAML::Value << "gaussian";
    out << YAML::Key << "mean" << YAML::Value << g->mean;
    out << YAML::Key << "std" << YAML::Value << g->std;
    out << YAML::Key << "clamp_min" << YAML::Value << g->clamp_min;
  } else {
    out << YAML::Key << "kind" << YAML::Value << "uniform";
    out << YAML::Key << "set" << YAML::Value << YAML::Flow << std::get<UniformSetValues>(dyn.value_distribution).values;
  }
  out << YAML::EndMap;
  out << YAML::Key << "change_profile" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "mean" << YAML::Value << dyn.change_profile.mean;
  out << YAML::Key << "std" << YAML::Value << dyn.change_profile.std;
  out << YAML::Key << "peak_prob" << YAML::Value << dyn.change_profile.peak_prob;
  out << YAML::EndMap;
  out << YAML::Key << "budget_lambda" << YAML::Value << dyn.budget_mean;
  out << YAML::Key << "requests_per_domain" << YAML::Value << dyn.requests_per_domain;
  out << YAML::Key << "zipf" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "q" << YAML::Value << dyn.request_zipf.q;
  out << YAML::Key << "beta" << YAML::Value << dyn.request_zipf.beta;
  out << YAML::EndMap;
  out << YAML::EndMap;

  const AgentConfig& a = cfg.agent;
  out << YAML::Key << "agent" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "gamma" << YAML::Value << a.gamma;
  out << YAML::Key << "learning_rate" << YAML::Value << a.learning_rate;
  out << YAML::Key << "minibatch" << YAML::Value << a.minibatch;
  out << YAML::Key << "replay_capacity" << YAML::Value << a.replay_capacity;
  out << YAML::Key << "target_sync_gap" << YAML::Value << a.target_sync_gap;
  out << YAML::Key << "offset_unit" << YAML::Value << a.offset_unit;
  out << YAML::Key << "updates_per_slot" << YAML::Value << a.updates_per_slot;
  out << YAML::Key << "epsilon" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "start" << YAML::Value << a.epsilon.start;
  out << YAML::Key << "end" << YAML::Value << a.epsilon.end;
  out << YAML::Key << "anneal_fraction" << YAML::Value << cfg.training.epsilon_anneal_fraction;
  out << YAML::EndMap;
  out << YAML::EndMap;

  out << YAML::Key << "network" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "trunk_hidden1" << YAML::Value << cfg.net.trunk_hidden1;
  out << YAML::Key << "trunk_hidden2" << YAML::Value << cfg.net.trunk_hidden2;
  out << YAML::Key << "head_hidden" << YAML::Value << cfg.net.head_hidden;
  out << YAML::Key << "input_scale" << YAML::Value << cfg.net.input_scale;
  out << YAML::Key << "input_cap" << YAML::Value << cfg.net.input_cap;
  out << YAML::EndMap;

  const TrainingSection& t = cfg.training;
  out << YAML::Key << "training" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "horizon" << YAML::Value << t.horizon;
  out << YAML::Key << "pretrain_transitions" << YAML::Value << t.pretrain_transitions;
  out << YAML::Key << "pretrain_steps" << YAML::Value << t.pretrain_steps;
  out << YAML::Key << "history_policy" << YAML::Value << std::string(to_string(t.history_policy));
  out << YAML::EndMap;

  const ExperimentSection& e = cfg.experiment;
  out << YAML::Key << "experiment" << YAML::Value << YAML::BeginMap;
  out << YAML::Key << "policies" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (PolicyKind k : e.policies) out << std::string(to_string(k));
  out << YAML::EndSeq;
  out << YAML::Key << "seeds" << YAML::Value << YAML::Flow << e.seeds;
  out << YAML::Key << "train_seed" << YAML::Value << e.train_seed;
  out << YAML::Key << "eval_horizon" << YAML::Value << e.eval_horizon;
  out << YAML::Key << "output_dir" << YAML::Value << e.output_dir;
  out << YAML::Key << "checkpoint" << YAML::Value << e.checkpoint;
  out << YAML::EndMap;

  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

void validate(const ScenarioConfig& cfg) {
  try {
    validate(cfg.dynamics);
    AgentConfig agent = cfg.agent;
    validate(agent);
  } catch (const std::invalid_argument& ex) {
    throw ConfigError(ex.what());
  }
  if (!(cfg.agent.gamma > 0.0 && cfg.agent.gamma < 1.0)) throw ConfigError("agent.gamma must be in (0,1)");
  if (cfg.training.horizon < 1) throw ConfigError("training.horizon must be at least 1");
  if (cfg.training.pretrain_transitions < 0 || cfg.training.pretrain_steps < 0) {
    throw ConfigError("pretraining counts must be nonnegative");
  }
  if (cfg.training.epsilon_anneal_fraction < 0.0) throw ConfigError("epsilon anneal fraction must be nonnegative");
  if (cfg.experiment.eval_horizon < 1) throw ConfigError("experiment.eval_horizon must be at least 1");
  if (cfg.experiment.seeds.empty()) throw ConfigError("experiment.seeds must not be empty");
  if (cfg.net.trunk_hidden1 < 1 || cfg.net.trunk_hidden2 < 1 || cfg.net.head_hidden < 1) {
    throw ConfigError("network layer widths must be positive");
  }
  if (cfg.net.input_scale < 0.0) throw ConfigError("network.input_scale must be nonnegative");
  if (cfg.net.input_cap < 0.0) throw ConfigError("network.input_cap must be nonnegative");
  const PlacementSpec& svc = cfg.network.services;
  if (svc.service_count < 1 || svc.copies < 1) throw ConfigError("services.count and services.copies must be positive");
  if (svc.favored_prob < 0.0 || svc.favored_prob > 1.0) throw ConfigError("services.favored_prob must be in [0,1]");
}

AgentConfig resolved_agent(const ScenarioConfig& cfg, std::int64_t horizon) {
  AgentConfig agent = cfg.agent;
  agent.epsilon.anneal_steps =
      static_cast<std::int64_t>(std::llround(cfg.training.epsilon_anneal_fraction * static_cast<double>(horizon)));
  return agent;
}

NetShape resolved_shape(const ScenarioConfig& cfg, std::size_t arms) {
  return NetShape{static_cast<int>(arms), cfg.net.trunk_hidden1, cfg.net.trunk_hidden2, cfg.net.head_hidden};
}

double resolved_input_scale(const ScenarioConfig& cfg) {
  if (cfg.net.input_scale > 0.0) return cfg.net.input_scale;
  return 1.0 / static_cast<double>(cfg.training.horizon);
}

double resolved_input_cap(const ScenarioConfig& cfg) {
  if (cfg.net.input_cap > 0.0) return cfg.net.input_cap;
  return std::numeric_limits<double>::infinity();
}

}  // namespace macs
