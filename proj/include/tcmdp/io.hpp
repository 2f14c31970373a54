#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "tcmdp/diameter.hpp"
#include "tcmdp/mdp.hpp"

namespace tcmdp {

using json = nlohmann::ordered_json;

// Instance files carry `horizon`, `num_states`, `num_actions`, `r_max`,
// `time_homogeneous`, `transitions` ([t][a][s][s'] or [a][s][s'] when the
// kernels are shared) and `rewards` ([t][a][s] or [a][s]). Loading sniffs
// each array's nesting depth, so mixed homogeneity round-trips.

json instance_to_json(const Instance& inst);
Instance instance_from_json(const json& j);

json policy_to_json(const Policy& pol);
Policy policy_from_json(const json& j);

json distribution_to_json(const Distribution& mu);
Distribution distribution_from_json(const json& j);

json graph_to_json(const DirectedGraph& g);
DirectedGraph graph_from_json(const json& j);

/// Text format: first line `n`, then one `i j` edge per line.
void save_graph_text(const DirectedGraph& g, const std::filesystem::path& path);
DirectedGraph load_graph_text(const std::filesystem::path& path);

json load_json(const std::filesystem::path& path);
void save_json(const json& j, const std::filesystem::path& path);

/// Instance plus any extra top-level fields (metadata, graph, mu0, ...).
void save_instance(const Instance& inst, const std::filesystem::path& path,
                   const json& extra = json::object());
Instance load_instance(const std::filesystem::path& path);

void save_policy(const Policy& pol, const std::filesystem::path& path);
Policy load_policy(const std::filesystem::path& path);

/// Initial-distribution spec: `uniform`, `point:<s>`, or `file:<path>`.
Distribution parse_mu0(const std::string& spec, int num_states);

}  // namespace tcmdp
