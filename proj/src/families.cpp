#include "tcmdp/families.hpp"

#include <algorithm>
#include <cmath>

#include "tcmdp/rng.hpp"

namespace tcmdp {

namespace {

std::size_t kernel_index(int num_states, int a, int s, int next) {
  return (static_cast<std::size_t>(a) * num_states + s) * num_states + next;
}

std::size_t reward_index(int num_states, int a, int s) {
  return static_cast<std::size_t>(a) * num_states + s;
}

}  // namespace

WorstCaseInstance worst_case_chain(const WorstCaseConfig& cfg) {
  if (cfg.d0 < 5) throw ValidationError("d0 must be an integer >= 5");
  if (!(cfg.r_max > 0.0)) throw ValidationError("r_max must be > 0");
  if (!(cfg.sigma > 0.0 && cfg.sigma < cfg.r_max / 2.0))
    throw ValidationError("sigma must lie in (0, r_max / 2)");
  if (cfg.horizon < 1) throw ValidationError("horizon must be >= 1");

  const int k = cfg.d0 - 2;
  const double sigma1 = cfg.sigma / static_cast<double>(k + 1);
  const int S = cfg.d0;           // states 0..k-1 = d_1..d_k, k = e, k+1 = f
  const int A = 2;                // 0 = stay, 1 = advance
  const int e_state = k;
  const int f_state = k + 1;

  std::vector<double> kernel(static_cast<std::size_t>(A) * S * S, 0.0);
  for (int s = 0; s < S; ++s) {
    if (s == f_state) {
      kernel[kernel_index(S, 0, s, 0)] = 1.0;  // forced return to d_1
      kernel[kernel_index(S, 1, s, 0)] = 1.0;
    } else {
      kernel[kernel_index(S, 0, s, s)] = 1.0;
      kernel[kernel_index(S, 1, s, s + 1)] = 1.0;
    }
  }
  std::vector<double> rewards(static_cast<std::size_t>(A) * S, 0.0);
  for (int a = 0; a < A; ++a) {
    rewards[reward_index(S, a, e_state)] = cfg.r_max - sigma1;
    rewards[reward_index(S, a, f_state)] = cfg.r_max;
  }

  DirectedGraph graph(S);
  for (int s = 0; s <= e_state; ++s) {
    graph.add_edge(s, s);
    graph.add_edge(s, s + 1);
  }
  graph.add_edge(f_state, 0);

  Instance instance(cfg.horizon, S, A, cfg.r_max, {std::move(kernel)},
                    {std::move(rewards)});
  return {std::move(instance), std::move(graph), Distribution::point(S, 0),
          sigma1};
}

Instance dgt_instance(const DirectedGraph& g,
                      const std::vector<double>& state_rewards, int horizon) {
  const int S = g.num_vertices();
  if (static_cast<int>(state_rewards.size()) != S)
    throw ValidationError("reward vector size does not match graph");
  int max_degree = 0;
  for (int i = 0; i < S; ++i) {
    if (g.out_degree(i) == 0)
      throw ValidationError("every vertex needs an outgoing edge");
    max_degree = std::max(max_degree, g.out_degree(i));
  }
  const double r_max =
      *std::max_element(state_rewards.begin(), state_rewards.end());
  if (!(r_max > 0.0)) throw ValidationError("rewards must include a positive entry");

  const int A = max_degree;
  std::vector<double> kernel(static_cast<std::size_t>(A) * S * S, 0.0);
  std::vector<double> rewards(static_cast<std::size_t>(A) * S, 0.0);
  for (int i = 0; i < S; ++i) {
    const std::vector<int> neighbors = g.sorted_neighbors(i);
    const int degree = static_cast<int>(neighbors.size());
    for (int a = 0; a < A; ++a) {
      const int target = neighbors[std::min(a, degree - 1)];
      kernel[kernel_index(S, a, i, target)] = 1.0;
      rewards[reward_index(S, a, i)] = state_rewards[static_cast<std::size_t>(i)];
    }
  }
  return Instance(horizon, S, A, r_max, {std::move(kernel)},
                  {std::move(rewards)});
}

DgtInstance dgt_random(const DgtConfig& cfg) {
  if (cfg.n < 2) throw ValidationError("n must be >= 2");
  if (cfg.reward_max < 1) throw ValidationError("reward_max must be >= 1");
  if (cfg.horizon < 1) throw ValidationError("horizon must be >= 1");
  if (cfg.edge_prob && (*cfg.edge_prob <= 0.0 || *cfg.edge_prob > 1.0))
    throw ValidationError("edge_prob must lie in (0, 1]");

  std::mt19937_64 rng(cfg.seed);
  const double p = cfg.edge_prob
                       ? *cfg.edge_prob
                       : unit_open_closed(rng) / static_cast<double>(cfg.n);

  DirectedGraph graph(cfg.n);
  for (int i = 0; i < cfg.n; ++i) graph.add_edge(i, (i + 1) % cfg.n);
  graph.add_edge(0, 0);
  for (int j = 0; j < cfg.n; ++j)
    for (int k = 0; k < cfg.n; ++k)
      if (!graph.has_edge(j, k) && unit_half_open(rng) < p) graph.add_edge(j, k);

  std::vector<double> rewards(static_cast<std::size_t>(cfg.n));
  for (int j = 0; j < cfg.n; ++j)
    rewards[static_cast<std::size_t>(j)] = static_cast<double>(
        1 + uniform_below(rng, static_cast<std::uint64_t>(cfg.reward_max)));

  Instance instance = dgt_instance(graph, rewards, cfg.horizon);
  return {std::move(instance), std::move(graph), p};
}

Instance make_sgt(const DirectedGraph& g, double xi, const Instance& inst) {
  if (xi < 0.0 || xi >= 1.0) throw ValidationError("xi must lie in [0, 1)");
  const int S = g.num_vertices();
  if (inst.num_states() != S)
    throw ValidationError("instance state count does not match graph");
  if (!inst.homogeneous_transitions())
    throw ValidationError("expected a time-homogeneous traversal instance");

  int max_degree = 0;
  for (int i = 0; i < S; ++i) max_degree = std::max(max_degree, g.out_degree(i));
  if (inst.num_actions() != max_degree)
    throw ValidationError("instance action count does not match graph degrees");

  const int A = inst.num_actions();
  std::vector<double> kernel(static_cast<std::size_t>(A) * S * S, 0.0);
  for (int i = 0; i < S; ++i) {
    const std::vector<int> neighbors = g.sorted_neighbors(i);
    const int degree = static_cast<int>(neighbors.size());
    for (int a = 0; a < A; ++a) {
      const int intended = neighbors[std::min(a, degree - 1)];
      const double* row = inst.kernel_row(0, a, i);
      for (int j = 0; j < S; ++j)
        if (row[j] != (j == intended ? 1.0 : 0.0))
          throw ValidationError(
              "instance kernel does not follow the graph's edges");
      if (degree == 1) {
        kernel[kernel_index(S, a, i, intended)] = 1.0;
      } else {
        kernel[kernel_index(S, a, i, intended)] = 1.0 - xi;
        const double spread = xi / static_cast<double>(degree - 1);
        for (int l : neighbors)
          if (l != intended) kernel[kernel_index(S, a, i, l)] = spread;
      }
    }
  }
  return Instance(inst.horizon(), S, A, inst.r_max(), {std::move(kernel)},
                  inst.reward_tables());
}

EnergyInstance energy_storage(const EnergyConfig& cfg) {
  if (cfg.levels < 2) throw ValidationError("levels must be >= 2");
  if (cfg.power < 1 || cfg.power > cfg.levels - 1)
    throw ValidationError("power must lie in [1, levels - 1]");
  if (cfg.beta < 0.0 || cfg.beta >= 0.5)
    throw ValidationError("beta must lie in [0, 1/2)");
  if (cfg.horizon < 1) throw ValidationError("horizon must be >= 1");
  const std::size_t t_count = static_cast<std::size_t>(cfg.horizon);
  if (cfg.charge_price.size() != t_count || cfg.sell_price.size() != t_count)
    throw ValidationError("price sequences must have one entry per time step");
  for (double price : cfg.charge_price)
    if (!(price >= 0.0) || !std::isfinite(price))
      throw ValidationError("charge prices must be finite and >= 0");
  for (double price : cfg.sell_price)
    if (!(price >= 0.0) || !std::isfinite(price))
      throw ValidationError("sell prices must be finite and >= 0");

  const int S = cfg.levels;
  const int C = cfg.power;
  const int A = 2 * C + 1;  // action index idx encodes a = idx - C

  std::vector<double> kernel(static_cast<std::size_t>(A) * S * S, 0.0);
  for (int s = 0; s < S; ++s) {
    for (int idx = 0; idx < A; ++idx) {
      const int a = idx - C;
      if (a <= 0) {
        const int next = std::max(s + a, 0);
        kernel[kernel_index(S, idx, s, next)] = 1.0;
      } else {
        const int charged = std::min(s + a, S - 1);
        kernel[kernel_index(S, idx, s, charged)] += 1.0 - cfg.beta;
        kernel[kernel_index(S, idx, s, s)] += cfg.beta;
      }
    }
  }

  const bool constant_prices =
      std::all_of(cfg.charge_price.begin(), cfg.charge_price.end(),
                  [&](double v) { return v == cfg.charge_price.front(); }) &&
      std::all_of(cfg.sell_price.begin(), cfg.sell_price.end(),
                  [&](double v) { return v == cfg.sell_price.front(); });
  const int stored_t = constant_prices ? 1 : cfg.horizon;

  std::vector<std::vector<double>> reward_tables;
  reward_tables.reserve(static_cast<std::size_t>(stored_t));
  double r_min = 0.0;
  double r_max = 0.0;
  for (int t = 0; t < stored_t; ++t) {
    std::vector<double> table(static_cast<std::size_t>(A) * S, 0.0);
    for (int s = 0; s < S; ++s) {
      for (int idx = 0; idx < A; ++idx) {
        const int a = idx - C;
        double r = 0.0;
        if (a < 0)
          r = static_cast<double>(std::min(-a, s)) *
              cfg.sell_price[static_cast<std::size_t>(t)];
        else if (a > 0)
          r = -(1.0 - cfg.beta) * static_cast<double>(std::min(S - 1 - s, a)) *
              cfg.charge_price[static_cast<std::size_t>(t)];
        table[reward_index(S, idx, s)] = r;
        r_min = std::min(r_min, r);
        r_max = std::max(r_max, r);
      }
    }
    reward_tables.push_back(std::move(table));
  }

  const double shift = -r_min;  // r_min <= 0 (holding earns 0)
  const double span = r_max - r_min;
  for (auto& table : reward_tables)
    for (double& r : table) r += shift;

  Instance instance(cfg.horizon, S, A, span > 0.0 ? span : 1.0,
                    {std::move(kernel)}, std::move(reward_tables));
  return {std::move(instance), shift, span};
}

EnergyBound energy_regret_bound(double levels, double power, double beta,
                                double r_max) {
  if (!(levels > 0.0) || !(power > 0.0))
    throw ValidationError("levels and power must be > 0");
  if (beta < 0.0 || beta >= 0.5) throw ValidationError("beta must lie in [0, 1/2)");
  if (!(r_max > 0.0)) throw ValidationError("r_max must be > 0");

  const double d = levels / power + 1.0;
  const double alpha = d / (1.0 - 2.0 * beta);
  const double omega = sgt_f(d, beta);
  const double root = std::sqrt(omega + alpha) + std::sqrt(omega);
  const double eps_star =
      beta == 0.0 ? 0.0
                  : (std::sqrt(omega * omega + omega * alpha) - omega) / alpha;
  return {r_max * root * root, alpha, omega, eps_star};
}

CounterexampleInstance dstar_counterexample(CounterexampleKind kind,
                                            int horizon, double r_max) {
  if (!(r_max > 0.0)) throw ValidationError("r_max must be > 0");

  if (kind == CounterexampleKind::alternating) {
    if (horizon < 1) throw ValidationError("horizon must be >= 1");
    const int S = 2;
    const int A = 1;
    std::vector<double> kernel(static_cast<std::size_t>(A) * S * S, 0.0);
    kernel[kernel_index(S, 0, 0, 1)] = 1.0;  // forced swap
    kernel[kernel_index(S, 0, 1, 0)] = 1.0;
    std::vector<std::vector<double>> rewards;
    rewards.reserve(static_cast<std::size_t>(horizon));
    for (int t = 0; t < horizon; ++t) {
      std::vector<double> table(static_cast<std::size_t>(A) * S, 0.0);
      table[reward_index(S, 0, t % 2 == 0 ? 0 : 1)] = r_max;
      rewards.push_back(std::move(table));
    }
    Instance instance(horizon, S, A, r_max, {std::move(kernel)},
                      std::move(rewards));
    return {std::move(instance), Distribution::point(S, 0),
            Distribution::point(S, 1)};
  }

  // bridge: six states on a cycle 0 -> 1 -> 2 -> 3 -> 4 -> 5 -> 0 with a
  // shortcut between 2 and 5 whose direction alternates with the time
  // parity; the exit from 4 alternates too, so a start at state 4 never
  // meets the shortcut while a start at state 2 can ride it every step.
  if (horizon < 6 || horizon % 6 != 0)
    throw ValidationError("bridge horizon must be a positive multiple of 6");
  const int S = 6;
  const int A = 2;
  auto forced = [&](std::vector<double>& kernel, int s, int next) {
    kernel[kernel_index(S, 0, s, next)] = 1.0;
    kernel[kernel_index(S, 1, s, next)] = 1.0;
  };
  std::vector<double> even(static_cast<std::size_t>(A) * S * S, 0.0);
  forced(even, 0, 1);
  forced(even, 1, 2);
  even[kernel_index(S, 0, 2, 3)] = 1.0;  // shortcut open: 2 -> 5
  even[kernel_index(S, 1, 2, 5)] = 1.0;
  forced(even, 3, 4);
  forced(even, 4, 0);
  forced(even, 5, 0);

  std::vector<double> odd(static_cast<std::size_t>(A) * S * S, 0.0);
  forced(odd, 0, 1);
  forced(odd, 1, 2);
  forced(odd, 2, 3);
  forced(odd, 3, 4);
  forced(odd, 4, 5);
  odd[kernel_index(S, 0, 5, 0)] = 1.0;  // shortcut open: 5 -> 2
  odd[kernel_index(S, 1, 5, 2)] = 1.0;

  std::vector<std::vector<double>> kernels;
  kernels.reserve(static_cast<std::size_t>(horizon));
  for (int t = 0; t < horizon; ++t) kernels.push_back(t % 2 == 0 ? even : odd);

  std::vector<double> rewards(static_cast<std::size_t>(A) * S, 0.0);
  rewards[reward_index(S, 0, 2)] = r_max;
  rewards[reward_index(S, 1, 2)] = r_max;

  Instance instance(horizon, S, A, r_max, std::move(kernels),
                    {std::move(rewards)});
  return {std::move(instance), Distribution::point(S, 2),
          Distribution::point(S, 4)};
}

}  // namespace tcmdp
