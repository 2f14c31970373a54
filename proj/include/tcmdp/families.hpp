#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "tcmdp/diameter.hpp"
#include "tcmdp/mdp.hpp"

namespace tcmdp {

// ---------------------------------------------------------------------------
// Worst-case chain: d0 states d_1..d_k, e, f on a forward chain with stay
// loops, zero reward on the d's, r_max - sigma/(k+1) at e and r_max at f.
// Concatenating the two half-horizon optima loses exactly
// (d0 - 2) * r_max - sigma against the optimum for every even T > 2*d0 + 2.
// ---------------------------------------------------------------------------

struct WorstCaseConfig {
  int d0;          // state count, >= 5
  double r_max;    // reward ceiling, > 0
  double sigma;    // in (0, r_max / 2)
  int horizon;
};

struct WorstCaseInstance {
  Instance instance;
  DirectedGraph graph;
  Distribution mu0;  // point mass at d_1
  double sigma1;     // sigma / (d0 - 1)
};

WorstCaseInstance worst_case_chain(const WorstCaseConfig& cfg);

// ---------------------------------------------------------------------------
// Random deterministic graph-traversal instances: a directed ring plus a
// self-loop at vertex 0 plus independently added random edges, with one
// action per outgoing edge and state-only integer rewards.
// ---------------------------------------------------------------------------

struct DgtConfig {
  int n;                            // state count, >= 2
  std::uint64_t seed = 0;
  std::optional<double> edge_prob;  // in (0, 1]; drawn as U(0,1]/n when absent
  int reward_max = 200;             // rewards drawn uniformly from {1..reward_max}
  int horizon = 1;
};

struct DgtInstance {
  Instance instance;
  DirectedGraph graph;
  double edge_prob;  // the probability actually used
};

DgtInstance dgt_random(const DgtConfig& cfg);

/// Deterministic traversal instance of a graph: action k at state i follows
/// the k-th smallest out-neighbor; states with fewer outgoing edges repeat
/// their first edge so the action count is uniform. Rewards depend only on
/// the state. r_max is taken as the largest reward.
Instance dgt_instance(const DirectedGraph& g,
                      const std::vector<double>& state_rewards, int horizon);

/// Noisy variant of a deterministic traversal instance: each action reaches
/// its intended neighbor with probability exactly 1 - xi and spreads xi
/// uniformly over the remaining neighbors; single-neighbor vertices stay
/// deterministic. `inst` must be the deterministic instance of `g`.
Instance make_sgt(const DirectedGraph& g, double xi, const Instance& inst);

// ---------------------------------------------------------------------------
// Battery dispatch: levels 0..B-1, signed charge/sell actions -C..C, selling
// and holding noiseless, charging delivering the full amount with
// probability 1 - beta and nothing otherwise.
// ---------------------------------------------------------------------------

struct EnergyConfig {
  int levels;    // B >= 2 battery levels
  int power;     // C in [1, B-1], max units moved per step
  double beta;   // charge-shortfall probability, in [0, 1/2)
  int horizon;
  std::vector<double> charge_price;  // mean charge cost per step, length T
  std::vector<double> sell_price;    // mean sell revenue per step, length T
};

struct EnergyInstance {
  Instance instance;
  double reward_shift;  // added to every reward to make the table nonnegative
  double reward_span;   // max - min expected one-step reward before shifting
};

EnergyInstance energy_storage(const EnergyConfig& cfg);

struct EnergyBound {
  double bound;
  double alpha;
  double omega;
  double eps_star;  // allowance minimizing the underlying diameter bound
};

/// Closed-form horizon-independent regret bound for the battery model:
/// r_max * (sqrt(omega + alpha) + sqrt(omega))^2 with
/// alpha = (B/C + 1)/(1 - 2 beta) and omega = sgt_f(B/C + 1, beta).
EnergyBound energy_regret_bound(double levels, double power, double beta,
                                double r_max);

// ---------------------------------------------------------------------------
// Two small instances on which the optimal value depends strongly on the
// start state even though every pair of states is quickly reachable:
// a two-state swap with alternating rewards, and a six-state cycle with a
// parity-gated shortcut.
// ---------------------------------------------------------------------------

enum class CounterexampleKind { alternating, bridge };

struct CounterexampleInstance {
  Instance instance;
  Distribution mu0_first;   // the favorable start
  Distribution mu0_second;  // the unfavorable start
};

/// alternating: any horizon >= 1; value gap r_max * T.
/// bridge: horizon a multiple of 6; value gap r_max * T / 3.
CounterexampleInstance dstar_counterexample(CounterexampleKind kind,
                                            int horizon, double r_max);

}  // namespace tcmdp
