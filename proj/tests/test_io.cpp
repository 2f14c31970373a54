#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "support.hpp"
#include "tcmdp/families.hpp"
#include "tcmdp/io.hpp"

using namespace tcmdp;

namespace {

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

}  // namespace

TEST_SUITE("serialization") {

TEST_CASE("instance JSON round-trips bit for bit") {
  std::mt19937_64 rng(71);

  SUBCASE("per-step tables") {
    const Instance inst = testsupport::random_instance(rng, 3, 2, 4, false);
    const Instance back = instance_from_json(instance_to_json(inst));
    CHECK(back.horizon() == inst.horizon());
    CHECK(back.num_states() == inst.num_states());
    CHECK(back.num_actions() == inst.num_actions());
    CHECK(back.r_max() == inst.r_max());
    CHECK(back.transition_tables() == inst.transition_tables());
    CHECK(back.reward_tables() == inst.reward_tables());
  }

  SUBCASE("shared tables stay shared") {
    const Instance inst = testsupport::random_instance(rng, 3, 2, 4, true);
    const json j = instance_to_json(inst);
    CHECK(j.at("time_homogeneous").get<bool>());
    const Instance back = instance_from_json(j);
    CHECK(back.homogeneous_transitions());
    CHECK(back.homogeneous_rewards());
    CHECK(back.transition_tables() == inst.transition_tables());
    CHECK(back.reward_tables() == inst.reward_tables());
  }

  SUBCASE("mixed homogeneity survives") {
    const Instance inst =
        dstar_counterexample(CounterexampleKind::bridge, 6, 1.0).instance;
    CHECK_FALSE(inst.homogeneous_transitions());
    CHECK(inst.homogeneous_rewards());
    const Instance back = instance_from_json(instance_to_json(inst));
    CHECK_FALSE(back.homogeneous_transitions());
    CHECK(back.homogeneous_rewards());
    CHECK(back.transition_tables() == inst.transition_tables());
    CHECK(back.reward_tables() == inst.reward_tables());
  }
}

TEST_CASE("doubles survive serialization exactly") {
  const double awkward = 0.1 + 0.2;
  json j;
  j["x"] = awkward;
  const json back = json::parse(j.dump());
  CHECK(back.at("x").get<double>() == awkward);
}

TEST_CASE("policy JSON round-trips") {
  const Policy pol(3, 2, {0, 1, 1, 0, 1, 1});
  CHECK(policy_from_json(policy_to_json(pol)) == pol);
  CHECK_THROWS_AS(policy_from_json(json{{"horizon", 2}, {"actions", json::array()}}),
                  ValidationError);
}

TEST_CASE("distribution and graph round-trips") {
  const Distribution mu({0.25, 0.5, 0.25});
  const Distribution mu_back = distribution_from_json(distribution_to_json(mu));
  CHECK(mu_back.probs() == mu.probs());

  DirectedGraph g(4);
  for (int i = 0; i < 4; ++i) g.add_edge(i, (i + 1) % 4);
  g.add_edge(2, 2);
  const DirectedGraph g_json = graph_from_json(graph_to_json(g));
  CHECK(g_json.edge_list() == g.edge_list());

  const auto path = temp_file("tcmdp_graph_test.txt");
  save_graph_text(g, path);
  const DirectedGraph g_text = load_graph_text(path);
  CHECK(g_text.edge_list() == g.edge_list());
  std::filesystem::remove(path);
}

TEST_CASE("instance files carry extra metadata transparently") {
  std::mt19937_64 rng(73);
  const Instance inst = testsupport::random_instance(rng, 2, 2, 3, true);
  const auto path = temp_file("tcmdp_instance_test.json");
  json extra;
  extra["metadata"] = {{"family", "random"}, {"note", 17}};
  extra["mu0"] = distribution_to_json(Distribution::uniform(2));
  save_instance(inst, path, extra);

  const json raw = load_json(path);
  CHECK(raw.at("metadata").at("family") == "random");
  const Instance back = load_instance(path);
  CHECK(back.transition_tables() == inst.transition_tables());
  std::filesystem::remove(path);
}

TEST_CASE("initial-distribution specs") {
  const Distribution uniform = parse_mu0("uniform", 4);
  CHECK(uniform[2] == 0.25);
  const Distribution point = parse_mu0("point:3", 4);
  CHECK(point[3] == 1.0);

  const auto path = temp_file("tcmdp_mu0_test.json");
  {
    std::ofstream out(path);
    out << "[0.5, 0.25, 0.125, 0.125]\n";
  }
  const Distribution file = parse_mu0("file:" + path.string(), 4);
  CHECK(file[0] == 0.5);
  CHECK_THROWS_AS(parse_mu0("file:" + path.string(), 3), ValidationError);
  std::filesystem::remove(path);

  CHECK_THROWS_AS(parse_mu0("point:9", 4), ValidationError);
  CHECK_THROWS_AS(parse_mu0("point:x", 4), ValidationError);
  CHECK_THROWS_AS(parse_mu0("fancy", 4), ValidationError);
}

TEST_CASE("malformed documents are reported as validation errors") {
  CHECK_THROWS_AS(instance_from_json(json{{"horizon", 2}}), ValidationError);
  CHECK_THROWS_AS(load_json("/nonexistent/tcmdp.json"), ValidationError);
}

}  // TEST_SUITE
