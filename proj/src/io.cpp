#include "tcmdp/io.hpp"

#include <fstream>
#include <sstream>

namespace tcmdp {

namespace {

json kernel_table_to_json(const std::vector<double>& table, int A, int S) {
  json out = json::array();
  for (int a = 0; a < A; ++a) {
    json per_state = json::array();
    for (int s = 0; s < S; ++s) {
      json row = json::array();
      for (int j = 0; j < S; ++j)
        row.push_back(table[(static_cast<std::size_t>(a) * S + s) * S + j]);
      per_state.push_back(std::move(row));
    }
    out.push_back(std::move(per_state));
  }
  return out;
}

json reward_table_to_json(const std::vector<double>& table, int A, int S) {
  json out = json::array();
  for (int a = 0; a < A; ++a) {
    json row = json::array();
    for (int s = 0; s < S; ++s)
      row.push_back(table[static_cast<std::size_t>(a) * S + s]);
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<double> kernel_table_from_json(const json& j, int A, int S) {
  std::vector<double> table(static_cast<std::size_t>(A) * S * S, 0.0);
  if (static_cast<int>(j.size()) != A)
    throw ValidationError("transition table has wrong action count");
  for (int a = 0; a < A; ++a) {
    if (static_cast<int>(j[a].size()) != S)
      throw ValidationError("transition table has wrong state count");
    for (int s = 0; s < S; ++s) {
      const json& row = j[a][s];
      if (static_cast<int>(row.size()) != S)
        throw ValidationError("kernel row has wrong length");
      for (int next = 0; next < S; ++next)
        table[(static_cast<std::size_t>(a) * S + s) * S + next] =
            row[next].get<double>();
    }
  }
  return table;
}

std::vector<double> reward_table_from_json(const json& j, int A, int S) {
  std::vector<double> table(static_cast<std::size_t>(A) * S, 0.0);
  if (static_cast<int>(j.size()) != A)
    throw ValidationError("reward table has wrong action count");
  for (int a = 0; a < A; ++a) {
    if (static_cast<int>(j[a].size()) != S)
      throw ValidationError("reward table has wrong state count");
    for (int s = 0; s < S; ++s)
      table[static_cast<std::size_t>(a) * S + s] = j[a][s].get<double>();
  }
  return table;
}

int nesting_depth(const json& j) {
  int depth = 0;
  const json* cur = &j;
  while (cur->is_array() && !cur->empty()) {
    ++depth;
    cur = &(*cur)[0];
  }
  return depth;
}

}  // namespace

json instance_to_json(const Instance& inst) {
  const int S = inst.num_states();
  const int A = inst.num_actions();
  json j;
  j["horizon"] = inst.horizon();
  j["num_states"] = S;
  j["num_actions"] = A;
  j["r_max"] = inst.r_max();
  j["time_homogeneous"] = inst.time_homogeneous();
  if (inst.homogeneous_transitions()) {
    j["transitions"] = kernel_table_to_json(inst.transition_tables()[0], A, S);
  } else {
    json per_t = json::array();
    for (const auto& table : inst.transition_tables())
      per_t.push_back(kernel_table_to_json(table, A, S));
    j["transitions"] = std::move(per_t);
  }
  if (inst.homogeneous_rewards()) {
    j["rewards"] = reward_table_to_json(inst.reward_tables()[0], A, S);
  } else {
    json per_t = json::array();
    for (const auto& table : inst.reward_tables())
      per_t.push_back(reward_table_to_json(table, A, S));
    j["rewards"] = std::move(per_t);
  }
  return j;
}

Instance instance_from_json(const json& j) {
  try {
    const int T = j.at("horizon").get<int>();
    const int S = j.at("num_states").get<int>();
    const int A = j.at("num_actions").get<int>();
    const double r_max = j.at("r_max").get<double>();

    const json& trans = j.at("transitions");
    std::vector<std::vector<double>> kernels;
    if (nesting_depth(trans) == 4) {
      if (static_cast<int>(trans.size()) != T)
        throw ValidationError("per-step transitions must have horizon entries");
      for (const json& table : trans)
        kernels.push_back(kernel_table_from_json(table, A, S));
    } else {
      kernels.push_back(kernel_table_from_json(trans, A, S));
    }

    const json& rew = j.at("rewards");
    std::vector<std::vector<double>> rewards;
    if (nesting_depth(rew) == 3) {
      if (static_cast<int>(rew.size()) != T)
        throw ValidationError("per-step rewards must have horizon entries");
      for (const json& table : rew)
        rewards.push_back(reward_table_from_json(table, A, S));
    } else {
      rewards.push_back(reward_table_from_json(rew, A, S));
    }
    return Instance(T, S, A, r_max, std::move(kernels), std::move(rewards));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed instance JSON: ") + e.what());
  }
}

json policy_to_json(const Policy& pol) {
  json actions = json::array();
  for (int t = 0; t < pol.horizon(); ++t) {
    json row = json::array();
    for (int s = 0; s < pol.num_states(); ++s) row.push_back(pol.action(t, s));
    actions.push_back(std::move(row));
  }
  return json{{"horizon", pol.horizon()}, {"actions", std::move(actions)}};
}

Policy policy_from_json(const json& j) {
  try {
    const int T = j.at("horizon").get<int>();
    const json& rows = j.at("actions");
    if (static_cast<int>(rows.size()) != T)
      throw ValidationError("policy actions must have horizon rows");
    if (rows.empty() || rows[0].empty())
      throw ValidationError("policy actions are empty");
    const int S = static_cast<int>(rows[0].size());
    std::vector<int> actions;
    actions.reserve(static_cast<std::size_t>(T) * S);
    for (const json& row : rows) {
      if (static_cast<int>(row.size()) != S)
        throw ValidationError("policy rows have inconsistent lengths");
      for (const json& a : row) actions.push_back(a.get<int>());
    }
    return Policy(T, S, std::move(actions));
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed policy JSON: ") + e.what());
  }
}

json distribution_to_json(const Distribution& mu) { return json(mu.probs()); }

Distribution distribution_from_json(const json& j) {
  try {
    return Distribution(j.get<std::vector<double>>());
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed distribution JSON: ") +
                          e.what());
  }
}

json graph_to_json(const DirectedGraph& g) {
  json edges = json::array();
  for (const auto& [i, j] : g.edge_list()) edges.push_back(json::array({i, j}));
  return json{{"n", g.num_vertices()}, {"edges", std::move(edges)}};
}

DirectedGraph graph_from_json(const json& j) {
  try {
    DirectedGraph g(j.at("n").get<int>());
    for (const json& edge : j.at("edges"))
      g.add_edge(edge.at(0).get<int>(), edge.at(1).get<int>());
    return g;
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed graph JSON: ") + e.what());
  }
}

void save_graph_text(const DirectedGraph& g,
                     const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path.string());
  out << g.num_vertices() << "\n";
  for (const auto& [i, j] : g.edge_list()) out << i << " " << j << "\n";
}

DirectedGraph load_graph_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  int n = 0;
  if (!(in >> n)) throw ValidationError("graph file missing vertex count");
  DirectedGraph g(n);
  int i = 0;
  int j = 0;
  while (in >> i >> j) g.add_edge(i, j);
  return g;
}

json load_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ValidationError("cannot parse " + path.string() + ": " + e.what());
  }
}

void save_json(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path.string());
  out << j.dump(2) << "\n";
}

void save_instance(const Instance& inst, const std::filesystem::path& path,
                   const json& extra) {
  json j = instance_to_json(inst);
  for (const auto& [key, value] : extra.items()) j[key] = value;
  save_json(j, path);
}

Instance load_instance(const std::filesystem::path& path) {
  return instance_from_json(load_json(path));
}

void save_policy(const Policy& pol, const std::filesystem::path& path) {
  save_json(policy_to_json(pol), path);
}

Policy load_policy(const std::filesystem::path& path) {
  return policy_from_json(load_json(path));
}

Distribution parse_mu0(const std::string& spec, int num_states) {
  if (spec == "uniform") return Distribution::uniform(num_states);
  if (spec.rfind("point:", 0) == 0) {
    int state = 0;
    try {
      state = std::stoi(spec.substr(6));
    } catch (const std::exception&) {
      throw ValidationError("bad point-mass spec: " + spec);
    }
    return Distribution::point(num_states, state);
  }
  if (spec.rfind("file:", 0) == 0) {
    Distribution mu = distribution_from_json(load_json(spec.substr(5)));
    if (mu.size() != num_states)
      throw ValidationError("distribution file size does not match instance");
    return mu;
  }
  throw ValidationError("mu0 spec must be uniform, point:<s>, or file:<path>");
}

}  // namespace tcmdp
