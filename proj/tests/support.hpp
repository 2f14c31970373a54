#pragma once

#include <random>
#include <vector>

#include "tcmdp/mdp.hpp"
#include "tcmdp/rng.hpp"

// Shared helpers for the test suites. The oracle computations here stay
// independent of the library's solve/evaluate code paths.
namespace testsupport {

/// Dense random instance with strictly positive kernel entries.
inline tcmdp::Instance random_instance(std::mt19937_64& rng, int num_states,
                                       int num_actions, int horizon,
                                       bool homogeneous, double r_max = 1.0) {
  const int stored = homogeneous ? 1 : horizon;
  std::vector<std::vector<double>> kernels;
  std::vector<std::vector<double>> rewards;
  for (int t = 0; t < stored; ++t) {
    std::vector<double> kernel(static_cast<std::size_t>(num_actions) *
                               num_states * num_states);
    for (int a = 0; a < num_actions; ++a) {
      for (int s = 0; s < num_states; ++s) {
        double sum = 0.0;
        const std::size_t base =
            (static_cast<std::size_t>(a) * num_states + s) * num_states;
        for (int j = 0; j < num_states; ++j) {
          kernel[base + j] = 0.05 + tcmdp::unit_half_open(rng);
          sum += kernel[base + j];
        }
        for (int j = 0; j < num_states; ++j) kernel[base + j] /= sum;
      }
    }
    kernels.push_back(std::move(kernel));

    std::vector<double> reward(static_cast<std::size_t>(num_actions) *
                               num_states);
    for (double& r : reward) r = r_max * tcmdp::unit_half_open(rng);
    rewards.push_back(std::move(reward));
  }
  return tcmdp::Instance(horizon, num_states, num_actions, r_max,
                         std::move(kernels), std::move(rewards));
}

inline tcmdp::Distribution random_distribution(std::mt19937_64& rng, int n) {
  std::vector<double> p(static_cast<std::size_t>(n));
  double sum = 0.0;
  for (double& x : p) {
    x = 0.05 + tcmdp::unit_half_open(rng);
    sum += x;
  }
  for (double& x : p) x /= sum;
  return tcmdp::Distribution(std::move(p));
}

/// Expected total reward of the action table [t][s] from a point start,
/// recomputed directly from the definition.
inline double oracle_value(const tcmdp::Instance& inst,
                           const std::vector<int>& actions, int start) {
  const int T = inst.horizon();
  const int S = inst.num_states();
  std::vector<double> dist(static_cast<std::size_t>(S), 0.0);
  dist[static_cast<std::size_t>(start)] = 1.0;
  double total = 0.0;
  for (int t = 0; t < T; ++t) {
    std::vector<double> next(static_cast<std::size_t>(S), 0.0);
    for (int s = 0; s < S; ++s) {
      const double mass = dist[static_cast<std::size_t>(s)];
      if (mass == 0.0) continue;
      const int a = actions[static_cast<std::size_t>(t) * S + s];
      total += mass * inst.reward(t, a, s);
      for (int j = 0; j < S; ++j)
        next[static_cast<std::size_t>(j)] += mass * inst.transition(t, a, s, j);
    }
    dist = std::move(next);
  }
  return total;
}

/// Max over every deterministic Markov policy, by exhaustive enumeration.
inline double brute_force_optimum(const tcmdp::Instance& inst, int start) {
  const int T = inst.horizon();
  const int S = inst.num_states();
  const int A = inst.num_actions();
  const int cells = T * S;

  long long combos = 1;
  for (int i = 0; i < cells; ++i) combos *= A;

  double best = -1.0;
  std::vector<int> actions(static_cast<std::size_t>(cells), 0);
  for (long long index = 0; index < combos; ++index) {
    long long rest = index;
    for (int i = 0; i < cells; ++i) {
      actions[static_cast<std::size_t>(i)] = static_cast<int>(rest % A);
      rest /= A;
    }
    best = std::max(best, oracle_value(inst, actions, start));
  }
  return best;
}

}  // namespace testsupport
