// Command-line front end: instance generation, solving, policy evaluation,
// horizon-split solving, regret and diameter reports, closed-form bounds,
// and the randomized regret sweep.

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "tcmdp/diameter.hpp"
#include "tcmdp/families.hpp"
#include "tcmdp/io.hpp"
#include "tcmdp/mdp.hpp"
#include "tcmdp/sweep.hpp"
#include "tcmdp/temporal.hpp"

namespace {

using tcmdp::json;

std::string real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

std::optional<std::uint64_t> env_seed_override() {
  const char* raw = std::getenv("TCMDP_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    return static_cast<std::uint64_t>(std::stoull(raw));
  } catch (const std::exception&) {
    throw tcmdp::ValidationError("TCMDP_SEED is not an unsigned integer");
  }
}

json diameter_metadata(const tcmdp::DirectedGraph& graph) {
  json derived;
  derived["strongly_connected"] = tcmdp::strongly_connected(graph);
  derived["has_self_loop"] = graph.has_self_loop();
  if (derived["strongly_connected"].get<bool>()) {
    const int d_c = tcmdp::classic_diameter(graph);
    derived["d_c"] = d_c;
    if (derived["has_self_loop"].get<bool>()) {
      derived["tau0_lower"] = d_c;
      derived["tau0_upper"] = 2 * d_c;
    }
  }
  return derived;
}

struct GenCommon {
  std::string output;
  std::string graph_output;
  bool with_d_star = false;
};

void add_gen_common(CLI::App* cmd, GenCommon& common) {
  cmd->add_option("-o,--output", common.output, "Instance file to write")
      ->required();
  cmd->add_option("--graph-out", common.graph_output,
                  "Also write the graph in text form (n, then one edge per line)");
  cmd->add_flag("--d-star", common.with_d_star,
                "Include the expected-hitting-time diameter in the metadata");
}

void finish_gen(const tcmdp::Instance& inst, const GenCommon& common,
                json metadata, json extra,
                const tcmdp::DirectedGraph* graph = nullptr) {
  if (common.with_d_star) metadata["derived"]["d_star"] = tcmdp::d_star(inst);
  extra["metadata"] = std::move(metadata);
  tcmdp::save_instance(inst, common.output, extra);
  std::cout << "wrote " << common.output << "\n";
  if (!common.graph_output.empty()) {
    if (graph == nullptr)
      throw tcmdp::ValidationError("this family has no underlying graph");
    tcmdp::save_graph_text(*graph, common.graph_output);
    std::cout << "wrote " << common.graph_output << "\n";
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-horizon tabular MDP toolkit"};
  app.require_subcommand(1);

  // ---- gen ----------------------------------------------------------------
  CLI::App* gen = app.add_subcommand("gen", "Generate an instance family");
  gen->require_subcommand(1);

  {
    auto* cmd = gen->add_subcommand("worst_case", "Chain with maximal split loss");
    auto common = std::make_shared<GenCommon>();
    auto d0 = std::make_shared<int>(5);
    auto r_max = std::make_shared<double>(1.0);
    auto sigma = std::make_shared<double>(0.4);
    auto horizon = std::make_shared<int>(14);
    cmd->add_option("--d0", *d0, "State count (>= 5)");
    cmd->add_option("--r-max", *r_max, "Reward ceiling");
    cmd->add_option("--sigma", *sigma, "Reward gap, in (0, r_max/2)");
    cmd->add_option("--horizon", *horizon, "Horizon")->required();
    add_gen_common(cmd, *common);
    cmd->callback([=]() {
      const tcmdp::WorstCaseInstance out = tcmdp::worst_case_chain(
          {.d0 = *d0, .r_max = *r_max, .sigma = *sigma, .horizon = *horizon});
      json metadata;
      metadata["family"] = "worst_case";
      metadata["config"] = {{"d0", *d0}, {"r_max", *r_max}, {"sigma", *sigma},
                            {"horizon", *horizon}};
      metadata["derived"] = diameter_metadata(out.graph);
      metadata["derived"]["sigma1"] = out.sigma1;
      json extra;
      extra["graph"] = tcmdp::graph_to_json(out.graph);
      extra["mu0"] = tcmdp::distribution_to_json(out.mu0);
      finish_gen(out.instance, *common, std::move(metadata), std::move(extra),
                 &out.graph);
    });
  }

  {
    auto* cmd = gen->add_subcommand("dgt", "Random deterministic graph traversal");
    auto common = std::make_shared<GenCommon>();
    auto n = std::make_shared<int>(50);
    auto seed = std::make_shared<std::uint64_t>(1);
    auto edge_prob = std::make_shared<double>(-1.0);
    auto reward_max = std::make_shared<int>(200);
    auto horizon = std::make_shared<int>(100);
    cmd->add_option("--n", *n, "State count");
    cmd->add_option("--seed", *seed, "Generator seed");
    cmd->add_option("--edge-prob", *edge_prob,
                    "Extra-edge probability in (0,1]; drawn as U(0,1]/n when omitted");
    cmd->add_option("--reward-max", *reward_max, "Top of the reward range");
    cmd->add_option("--horizon", *horizon, "Horizon")->required();
    add_gen_common(cmd, *common);
    cmd->callback([=]() {
      if (const auto env = env_seed_override()) *seed = *env;
      tcmdp::DgtConfig cfg{.n = *n, .seed = *seed, .edge_prob = {},
                           .reward_max = *reward_max, .horizon = *horizon};
      if (*edge_prob > 0.0) cfg.edge_prob = *edge_prob;
      const tcmdp::DgtInstance out = tcmdp::dgt_random(cfg);
      json metadata;
      metadata["family"] = "dgt";
      metadata["config"] = {{"n", *n}, {"seed", *seed},
                            {"reward_max", *reward_max}, {"horizon", *horizon}};
      metadata["config"]["edge_prob"] = out.edge_prob;
      metadata["derived"] = diameter_metadata(out.graph);
      json extra;
      extra["graph"] = tcmdp::graph_to_json(out.graph);
      finish_gen(out.instance, *common, std::move(metadata), std::move(extra),
                 &out.graph);
    });
  }

  {
    auto* cmd = gen->add_subcommand("sgt", "Noisy graph traversal");
    auto common = std::make_shared<GenCommon>();
    auto n = std::make_shared<int>(50);
    auto seed = std::make_shared<std::uint64_t>(1);
    auto edge_prob = std::make_shared<double>(-1.0);
    auto reward_max = std::make_shared<int>(200);
    auto horizon = std::make_shared<int>(100);
    auto xi = std::make_shared<double>(0.1);
    cmd->add_option("--n", *n, "State count");
    cmd->add_option("--seed", *seed, "Generator seed");
    cmd->add_option("--edge-prob", *edge_prob,
                    "Extra-edge probability in (0,1]; drawn as U(0,1]/n when omitted");
    cmd->add_option("--reward-max", *reward_max, "Top of the reward range");
    cmd->add_option("--horizon", *horizon, "Horizon")->required();
    cmd->add_option("--xi", *xi, "Noise level in [0, 1)")->required();
    add_gen_common(cmd, *common);
    cmd->callback([=]() {
      if (const auto env = env_seed_override()) *seed = *env;
      tcmdp::DgtConfig cfg{.n = *n, .seed = *seed, .edge_prob = {},
                           .reward_max = *reward_max, .horizon = *horizon};
      if (*edge_prob > 0.0) cfg.edge_prob = *edge_prob;
      const tcmdp::DgtInstance base = tcmdp::dgt_random(cfg);
      const tcmdp::Instance noisy = tcmdp::make_sgt(base.graph, *xi, base.instance);
      json metadata;
      metadata["family"] = "sgt";
      metadata["config"] = {{"n", *n}, {"seed", *seed}, {"xi", *xi},
                            {"reward_max", *reward_max}, {"horizon", *horizon}};
      metadata["config"]["edge_prob"] = base.edge_prob;
      metadata["derived"] = diameter_metadata(base.graph);
      if (tcmdp::strongly_connected(base.graph)) {
        const int d_c = tcmdp::classic_diameter(base.graph);
        metadata["derived"]["epsilon_threshold_tau0"] =
            tcmdp::sgt_epsilon_threshold(2 * d_c, *xi);
      }
      json extra;
      extra["graph"] = tcmdp::graph_to_json(base.graph);
      finish_gen(noisy, *common, std::move(metadata), std::move(extra),
                 &base.graph);
    });
  }

  {
    auto* cmd = gen->add_subcommand("energy", "Battery dispatch model");
    auto common = std::make_shared<GenCommon>();
    auto levels = std::make_shared<int>(6);
    auto power = std::make_shared<int>(2);
    auto beta = std::make_shared<double>(0.1);
    auto horizon = std::make_shared<int>(50);
    auto charge_price = std::make_shared<double>(1.0);
    auto sell_price = std::make_shared<double>(1.0);
    auto prices_file = std::make_shared<std::string>();
    cmd->add_option("--levels", *levels, "Battery levels B");
    cmd->add_option("--power", *power, "Per-step charge/sell cap C");
    cmd->add_option("--beta", *beta, "Charge-shortfall probability");
    cmd->add_option("--horizon", *horizon, "Horizon")->required();
    cmd->add_option("--charge-price", *charge_price, "Constant mean charge cost");
    cmd->add_option("--sell-price", *sell_price, "Constant mean sell revenue");
    cmd->add_option("--prices", *prices_file,
                    "JSON file with charge_price and sell_price arrays");
    add_gen_common(cmd, *common);
    cmd->callback([=]() {
      tcmdp::EnergyConfig cfg{.levels = *levels, .power = *power, .beta = *beta,
                              .horizon = *horizon,
                              .charge_price = std::vector<double>(
                                  static_cast<std::size_t>(*horizon), *charge_price),
                              .sell_price = std::vector<double>(
                                  static_cast<std::size_t>(*horizon), *sell_price)};
      if (!prices_file->empty()) {
        const json prices = tcmdp::load_json(*prices_file);
        cfg.charge_price = prices.at("charge_price").get<std::vector<double>>();
        cfg.sell_price = prices.at("sell_price").get<std::vector<double>>();
      }
      const tcmdp::EnergyInstance out = tcmdp::energy_storage(cfg);
      json metadata;
      metadata["family"] = "energy";
      metadata["config"] = {{"levels", *levels}, {"power", *power},
                            {"beta", *beta}, {"horizon", *horizon}};
      metadata["derived"]["reward_shift"] = out.reward_shift;
      metadata["derived"]["reward_span"] = out.reward_span;
      const tcmdp::EnergyBound bound = tcmdp::energy_regret_bound(
          static_cast<double>(*levels), static_cast<double>(*power), *beta,
          out.reward_span > 0.0 ? out.reward_span : 1.0);
      metadata["derived"]["regret_bound"] = bound.bound;
      finish_gen(out.instance, *common, std::move(metadata), json::object());
    });
  }

  {
    auto* cmd = gen->add_subcommand(
        "dstar", "Start-sensitive instances with small hitting times");
    auto common = std::make_shared<GenCommon>();
    auto variant = std::make_shared<std::string>("alternating");
    auto horizon = std::make_shared<int>(12);
    auto r_max = std::make_shared<double>(1.0);
    cmd->add_option("--variant", *variant, "alternating or bridge")
        ->check(CLI::IsMember({"alternating", "bridge"}));
    cmd->add_option("--horizon", *horizon, "Horizon")->required();
    cmd->add_option("--r-max", *r_max, "Reward ceiling");
    add_gen_common(cmd, *common);
    cmd->callback([=]() {
      const auto kind = *variant == "alternating"
                            ? tcmdp::CounterexampleKind::alternating
                            : tcmdp::CounterexampleKind::bridge;
      const tcmdp::CounterexampleInstance out =
          tcmdp::dstar_counterexample(kind, *horizon, *r_max);
      json metadata;
      metadata["family"] = "dstar_counterexample";
      metadata["config"] = {{"variant", *variant}, {"horizon", *horizon},
                            {"r_max", *r_max}};
      json extra;
      extra["mu0_pair"] = json::array(
          {tcmdp::distribution_to_json(out.mu0_first),
           tcmdp::distribution_to_json(out.mu0_second)});
      finish_gen(out.instance, *common, std::move(metadata), std::move(extra));
    });
  }

  // ---- solve / evaluate / tc / regret --------------------------------------
  {
    auto* cmd = app.add_subcommand("solve", "Exact backward induction");
    auto input = std::make_shared<std::string>();
    auto output = std::make_shared<std::string>();
    auto mu0_spec = std::make_shared<std::string>("uniform");
    cmd->add_option("instance", *input, "Instance file")->required();
    cmd->add_option("-o,--output", *output, "Policy file to write");
    cmd->add_option("--mu0", *mu0_spec, "uniform, point:<s>, or file:<path>");
    cmd->callback([=]() {
      const tcmdp::Instance inst = tcmdp::load_instance(*input);
      const tcmdp::SolveResult result = tcmdp::solve(inst);
      const tcmdp::Distribution mu0 =
          tcmdp::parse_mu0(*mu0_spec, inst.num_states());
      double value = 0.0;
      for (int s = 0; s < inst.num_states(); ++s)
        value += mu0[s] * result.values.value(0, s);
      std::cout << "optimal_value = " << real(value) << "\n";
      if (!output->empty()) {
        tcmdp::save_policy(result.policy, *output);
        std::cout << "wrote " << *output << "\n";
      }
    });
  }

  {
    auto* cmd = app.add_subcommand("evaluate", "Exact policy evaluation");
    auto instance_file = std::make_shared<std::string>();
    auto policy_file = std::make_shared<std::string>();
    auto mu0_spec = std::make_shared<std::string>("uniform");
    cmd->add_option("instance", *instance_file, "Instance file")->required();
    cmd->add_option("policy", *policy_file, "Policy file")->required();
    cmd->add_option("--mu0", *mu0_spec, "uniform, point:<s>, or file:<path>");
    cmd->callback([=]() {
      const tcmdp::Instance inst = tcmdp::load_instance(*instance_file);
      const tcmdp::Policy pol = tcmdp::load_policy(*policy_file);
      const double value = tcmdp::evaluate(
          inst, pol, tcmdp::parse_mu0(*mu0_spec, inst.num_states()));
      std::cout << "value = " << real(value) << "\n";
    });
  }

  {
    auto* cmd = app.add_subcommand(
        "tc", "Split the horizon, solve the pieces, concatenate");
    auto input = std::make_shared<std::string>();
    auto output = std::make_shared<std::string>();
    auto k = std::make_shared<int>(2);
    auto workers = std::make_shared<int>(1);
    auto mu0_spec = std::make_shared<std::string>("uniform");
    cmd->add_option("instance", *input, "Instance file")->required();
    cmd->add_option("-k,--k", *k, "Number of sub-instances");
    cmd->add_option("-w,--workers", *workers, "Concurrent sub-solves");
    cmd->add_option("-o,--output", *output, "Policy file to write");
    cmd->add_option("--mu0", *mu0_spec, "uniform, point:<s>, or file:<path>");
    cmd->callback([=]() {
      const tcmdp::Instance inst = tcmdp::load_instance(*input);
      const tcmdp::TcResult result = tcmdp::tc_solve(inst, *k, *workers);
      const double value = tcmdp::evaluate(
          inst, result.policy, tcmdp::parse_mu0(*mu0_spec, inst.num_states()));
      std::cout << "tc_value = " << real(value) << "\n";
      for (int seg = 0; seg < result.plan.segments(); ++seg)
        std::cout << "segment " << seg << ": offset " << result.plan.offset(seg)
                  << ", length " << result.plan.length(seg) << ", solve_seconds "
                  << real(result.wall_times[static_cast<std::size_t>(seg)])
                  << "\n";
      if (!output->empty()) {
        tcmdp::save_policy(result.policy, *output);
        std::cout << "wrote " << *output << "\n";
      }
    });
  }

  {
    auto* cmd = app.add_subcommand("regret", "Optimal minus concatenated value");
    auto input = std::make_shared<std::string>();
    auto k = std::make_shared<int>(2);
    auto workers = std::make_shared<int>(1);
    auto mu0_spec = std::make_shared<std::string>("uniform");
    cmd->add_option("instance", *input, "Instance file")->required();
    cmd->add_option("-k,--k", *k, "Number of sub-instances");
    cmd->add_option("-w,--workers", *workers, "Concurrent sub-solves");
    cmd->add_option("--mu0", *mu0_spec, "uniform, point:<s>, or file:<path>");
    cmd->callback([=]() {
      const tcmdp::Instance inst = tcmdp::load_instance(*input);
      const tcmdp::RegretResult result = tcmdp::regret(
          inst, tcmdp::parse_mu0(*mu0_spec, inst.num_states()), *k, *workers);
      std::cout << "delta = " << real(result.delta) << "\n";
      std::cout << "v_opt = " << real(result.v_opt) << "\n";
      std::cout << "v_tc = " << real(result.v_tc) << "\n";
    });
  }

  // ---- diameter -------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("diameter", "Diameter quantities of an instance");
    auto input = std::make_shared<std::string>();
    auto with_d_star = std::make_shared<bool>(false);
    cmd->add_option("instance", *input, "Instance file")->required();
    cmd->add_flag("--d-star", *with_d_star, "Also compute expected hitting times");
    cmd->callback([=]() {
      const json doc = tcmdp::load_json(*input);
      const tcmdp::Instance inst = tcmdp::instance_from_json(doc);
      const tcmdp::DirectedGraph graph =
          doc.contains("graph") ? tcmdp::graph_from_json(doc["graph"])
                                : tcmdp::support_graph(inst);
      const bool connected = tcmdp::strongly_connected(graph);
      std::cout << "strongly_connected = " << (connected ? "true" : "false")
                << "\n";
      std::cout << "has_self_loop = "
                << (graph.has_self_loop() ? "true" : "false") << "\n";
      if (connected) {
        const int d_c = tcmdp::classic_diameter(graph);
        std::cout << "d_c = " << d_c << "\n";
        if (graph.has_self_loop())
          std::cout << "tau0_bounds = [" << d_c << ", " << 2 * d_c << "]\n";
      }
      if (*with_d_star)
        std::cout << "d_star = " << real(tcmdp::d_star(inst)) << "\n";
    });
  }

  // ---- bound ----------------------------------------------------------------
  CLI::App* bound = app.add_subcommand("bound", "Closed-form regret bounds");
  bound->require_subcommand(1);
  {
    auto* cmd = bound->add_subcommand("theorem1", "r_max * tau_eps / (1 - eps)");
    auto r_max = std::make_shared<double>(1.0);
    auto tau_eps = std::make_shared<double>(0.0);
    auto eps = std::make_shared<double>(0.0);
    cmd->add_option("--r-max", *r_max, "Reward ceiling");
    cmd->add_option("--tau-eps", *tau_eps, "Diameter bound (caller asserts <= T/2)")
        ->required();
    cmd->add_option("--eps", *eps, "Total-variation allowance in [0, 1)");
    cmd->callback([=]() {
      std::cout << "bound = "
                << real(tcmdp::theorem1_bound(*r_max, *tau_eps, *eps)) << "\n";
    });
  }
  {
    auto* cmd = bound->add_subcommand("energy", "Battery-model regret bound");
    auto levels = std::make_shared<double>(24.0);
    auto power = std::make_shared<double>(1.0);
    auto beta = std::make_shared<double>(0.1);
    auto r_max = std::make_shared<double>(1.0);
    cmd->add_option("--levels", *levels, "Battery levels B");
    cmd->add_option("--power", *power, "Per-step cap C");
    cmd->add_option("--beta", *beta, "Charge-shortfall probability");
    cmd->add_option("--r-max", *r_max, "Reward ceiling");
    cmd->callback([=]() {
      const tcmdp::EnergyBound result =
          tcmdp::energy_regret_bound(*levels, *power, *beta, *r_max);
      std::cout << "bound = " << real(result.bound) << "\n";
      std::cout << "alpha = " << real(result.alpha) << "\n";
      std::cout << "omega = " << real(result.omega) << "\n";
      std::cout << "eps_star = " << real(result.eps_star) << "\n";
    });
  }

  // ---- sweep ----------------------------------------------------------------
  {
    auto* cmd = app.add_subcommand("sweep", "Randomized regret sweep");
    auto config_file = std::make_shared<std::string>();
    auto out_dir = std::make_shared<std::string>();
    cmd->add_option("--config", *config_file, "Sweep configuration JSON")
        ->required();
    cmd->add_option("-o,--output", *out_dir, "Output directory")->required();
    cmd->callback([=]() {
      tcmdp::SweepConfig cfg =
          tcmdp::sweep_config_from_json(tcmdp::load_json(*config_file));
      if (const auto env = env_seed_override()) cfg.seed = *env;
      const tcmdp::SweepResult result = tcmdp::run_sweep(cfg);

      const std::filesystem::path dir(*out_dir);
      std::filesystem::create_directories(dir);
      tcmdp::emit_csv(result.records, dir / "records.csv");
      tcmdp::emit_plotdata(result.records, dir / "plotdata",
                           cfg.smoothing_window);
      {
        std::ofstream out(dir / "delta_hat_max.csv");
        out << "K,d,delta_hat_max,count\n";
        for (const tcmdp::MaxRecord& rec : tcmdp::delta_hat_max(result.records))
          out << rec.k << "," << rec.d << "," << real(rec.delta_hat_max) << ","
              << rec.count << "\n";
      }
      if (cfg.log_raw) {
        std::ofstream out(dir / "raw.csv");
        out << "instance,d,K,T,delta\n";
        for (const tcmdp::RawRecord& row : result.raw)
          out << row.instance << "," << row.d << "," << row.k << "," << row.t
              << "," << real(row.delta) << "\n";
      }
      std::cout << "instances = " << cfg.n_instances << "\n";
      std::cout << "records = " << result.records.size() << "\n";
      std::cout << "wrote " << (dir / "records.csv").string() << "\n";
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  } catch (const tcmdp::ValidationError& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return 1;
  } catch (const tcmdp::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
