// Acceptance suite: one checked criterion per function, one PASS/FAIL line
// per criterion on stdout. Run with --criterion N for a single criterion.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <iostream>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "tcmdp/diameter.hpp"
#include "tcmdp/families.hpp"
#include "tcmdp/rng.hpp"
#include "tcmdp/sweep.hpp"
#include "tcmdp/temporal.hpp"

using namespace tcmdp;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

double spearman_rho(const std::vector<double>& xs, const std::vector<double>& ys) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<std::size_t> index(v.size());
    std::iota(index.begin(), index.end(), 0);
    std::sort(index.begin(), index.end(),
              [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size(), 0.0);
    std::size_t i = 0;
    while (i < index.size()) {
      std::size_t j = i;
      while (j + 1 < index.size() && v[index[j + 1]] == v[index[i]]) ++j;
      const double shared = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
      for (std::size_t t = i; t <= j; ++t) r[index[t]] = shared;
      i = j + 1;
    }
    return r;
  };
  const std::vector<double> rx = ranks(xs);
  const std::vector<double> ry = ranks(ys);
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / rx.size();
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / ry.size();
  double num = 0.0, dx = 0.0, dy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  return num / std::sqrt(dx * dy);
}

// 1. Chain-instance regret equality: measured two-way regret equals
//    (d0 - 2) * r_max - sigma for every even horizon past the threshold.
Outcome criterion_chain_equality() {
  double worst = 0.0;
  int cases = 0;
  for (int d0 = 5; d0 <= 10; ++d0) {
    for (double sigma : {0.1, 0.4}) {
      for (int horizon = 2 * d0 + 4; horizon <= 2 * d0 + 40; horizon += 2) {
        const WorstCaseInstance chain = worst_case_chain(
            {.d0 = d0, .r_max = 1.0, .sigma = sigma, .horizon = horizon});
        const RegretResult reg = regret(chain.instance, chain.mu0, 2);
        const double expected = static_cast<double>(d0 - 2) - sigma;
        worst = std::max(worst, std::abs(reg.delta - expected));
        ++cases;
      }
    }
  }
  std::ostringstream detail;
  detail << cases << " cases, max |delta - closed form| = " << worst;
  return {worst <= 1e-9, detail.str()};
}

// 2. Backward induction equals brute-force policy enumeration.
Outcome criterion_brute_force() {
  std::mt19937_64 rng(20240);
  double worst = 0.0;
  for (int round = 0; round < 200; ++round) {
    const int states = 1 + static_cast<int>(uniform_below(rng, 3));
    const int actions = 1 + static_cast<int>(uniform_below(rng, 2));
    const int horizon = 1 + static_cast<int>(uniform_below(rng, 4));
    const Instance inst = testsupport::random_instance(
        rng, states, actions, horizon, round % 2 == 0);
    const SolveResult result = solve(inst);
    for (int s = 0; s < states; ++s) {
      const double expected = testsupport::brute_force_optimum(inst, s);
      worst = std::max(worst, std::abs(result.values.value(0, s) - expected));
    }
  }
  std::ostringstream detail;
  detail << "200 instances, max |solve - enumeration| = " << worst;
  return {worst <= 1e-12, detail.str()};
}

// 3. Normalized two-way regret never exceeds twice the classic diameter
//    once the horizon is at least four diameters.
Outcome criterion_diameter_bound() {
  int violations = 0;
  double worst_margin = -1e300;
  for (int i = 0; i < 300; ++i) {
    const DgtInstance dgt =
        dgt_random({.n = 50, .seed = derive_seed(11, static_cast<std::uint64_t>(i)),
                    .edge_prob = {}, .reward_max = 200, .horizon = 1});
    const DiameterReport report = tau0_bounds_dgt(dgt.graph);
    const Instance inst = dgt.instance.with_horizon(4 * report.d_c);
    const RegretResult reg = regret(inst, Distribution::uniform(50), 2);
    const double normalized = reg.delta / inst.r_max();
    const double bound =
        theorem1_bound(1.0, static_cast<double>(report.tau0_upper), 0.0);
    worst_margin = std::max(worst_margin, normalized - bound);
    if (normalized > bound + 1e-9) ++violations;
  }
  std::ostringstream detail;
  detail << "300 instances, violations = " << violations
         << ", worst (delta/r - bound) = " << worst_margin;
  return {violations == 0, detail.str()};
}

// 4. Regret sanity on random instances: nonnegative regret and first-segment
//    dominance of the segment-optimal policy.
Outcome criterion_regret_sanity() {
  std::mt19937_64 rng(555);
  double min_delta = 1e300;
  double min_dominance = 1e300;
  for (int round = 0; round < 1000; ++round) {
    const int states = 2 + static_cast<int>(uniform_below(rng, 4));
    const int actions = 1 + static_cast<int>(uniform_below(rng, 3));
    const int horizon = 2 + static_cast<int>(uniform_below(rng, 9));
    const Instance inst = testsupport::random_instance(
        rng, states, actions, horizon, round % 4 == 0);
    const Distribution mu0 = testsupport::random_distribution(rng, states);
    const RegretResult reg = regret(inst, mu0, 2);
    min_delta = std::min(min_delta, reg.delta);
    const FirstHalfValues halves = first_half_dominance(inst, mu0);
    min_dominance = std::min(min_dominance, halves.v1_tc - halves.v1_opt);
  }
  std::ostringstream detail;
  detail << "1000 instances, min delta = " << min_delta
         << ", min (v1_tc - v1_opt) = " << min_dominance;
  return {min_delta >= -1e-9 && min_dominance >= -1e-9, detail.str()};
}

// 5. Battery model: reference bound value, strictly increasing bound curve,
//    and measured regret below the bound at several horizons.
Outcome criterion_energy_bound() {
  std::ostringstream detail;
  const EnergyBound reference = energy_regret_bound(24.0, 1.0, 0.1, 1.0);
  detail << "bound(24, 0.1) = " << reference.bound;
  if (reference.bound < 89.5 || reference.bound > 90.5)
    return {false, detail.str() + " outside [89.5, 90.5]"};

  double previous = 0.0;
  for (int ratio = 1; ratio <= 30; ++ratio) {
    const EnergyBound point =
        energy_regret_bound(static_cast<double>(ratio), 1.0, 0.1, 1.0);
    if (point.bound <= previous)
      return {false, detail.str() + ", curve not increasing at B/C = " +
                         std::to_string(ratio)};
    previous = point.bound;
  }

  double worst_gap = 1e300;
  for (int horizon : {10, 50, 200}) {
    const EnergyInstance energy = energy_storage(
        {.levels = 6, .power = 2, .beta = 0.1, .horizon = horizon,
         .charge_price = std::vector<double>(static_cast<std::size_t>(horizon), 1.0),
         .sell_price = std::vector<double>(static_cast<std::size_t>(horizon), 1.0)});
    const EnergyBound bound =
        energy_regret_bound(6.0, 2.0, 0.1, energy.reward_span);
    for (int start : {-1, 0}) {
      const Distribution mu0 = start < 0 ? Distribution::uniform(6)
                                         : Distribution::point(6, start);
      const RegretResult reg = regret(energy.instance, mu0, 2);
      worst_gap = std::min(worst_gap, bound.bound - reg.delta);
      if (reg.delta > bound.bound + 1e-9)
        return {false, detail.str() + ", measured regret exceeds the bound at T = " +
                           std::to_string(horizon)};
    }
  }
  detail << ", increasing curve ok, min (bound - measured) = " << worst_gap;
  return {true, detail.str()};
}

// 6. Start-sensitive instances: exact value gaps and the unit hitting-time
//    diameter of the alternating instance.
Outcome criterion_counterexamples() {
  double worst = 0.0;
  for (int horizon = 1; horizon <= 20; ++horizon) {
    const CounterexampleInstance ce =
        dstar_counterexample(CounterexampleKind::alternating, horizon, 1.0);
    const SolveResult opt = solve(ce.instance);
    const double gap = evaluate(ce.instance, opt.policy, ce.mu0_first) -
                       evaluate(ce.instance, opt.policy, ce.mu0_second);
    worst = std::max(worst, std::abs(gap - static_cast<double>(horizon)));
  }
  for (int horizon : {6, 12, 18}) {
    const CounterexampleInstance ce =
        dstar_counterexample(CounterexampleKind::bridge, horizon, 1.0);
    const SolveResult opt = solve(ce.instance);
    const double gap = evaluate(ce.instance, opt.policy, ce.mu0_first) -
                       evaluate(ce.instance, opt.policy, ce.mu0_second);
    worst = std::max(worst, std::abs(gap - horizon / 3.0));
  }
  const CounterexampleInstance alternating =
      dstar_counterexample(CounterexampleKind::alternating, 10, 1.0);
  worst = std::max(worst, std::abs(d_star(alternating.instance) - 1.0));
  std::ostringstream detail;
  detail << "max |gap - closed form| = " << worst;
  return {worst <= 1e-9, detail.str()};
}

// 7. Desk-scale sweep trends: regret grows with the diameter, more segments
//    cost more on average, and each bucket's series settles onto a plateau.
Outcome criterion_sweep_trends() {
  SweepConfig cfg;  // defaults: n = 50, 500 instances, K in {2,3,4,5}, T <= 200
  cfg.seed = 1;
  const SweepResult result = run_sweep(cfg);

  std::map<std::pair<int, int>, std::map<int, double>> series;
  std::map<std::pair<int, int>, long> counts;
  for (const SweepRecord& rec : result.records) {
    series[{rec.k, rec.d}][rec.t] = rec.delta_hat;
    counts[{rec.k, rec.d}] = rec.count;
  }
  std::vector<int> qualifying;
  for (const auto& [key, count] : counts)
    if (key.first == 2 && count >= 20) qualifying.push_back(key.second);
  std::sort(qualifying.begin(), qualifying.end());
  if (qualifying.size() < 3)
    return {false, "too few diameter buckets with 20+ samples"};

  // (a) rank correlation between the diameter and the peak average regret
  std::vector<double> ds;
  std::vector<double> peaks;
  for (int d : qualifying) {
    double peak = 0.0;
    for (const auto& [t, v] : series[{2, d}]) peak = std::max(peak, v);
    ds.push_back(static_cast<double>(d));
    peaks.push_back(peak);
  }
  const double rho = spearman_rho(ds, peaks);

  // (b) five segments cost at least as much as two, per bucket mean
  double worst_ordering = 1e300;
  for (int d : qualifying) {
    if (!series.count({5, d})) continue;
    const auto& two = series[{2, d}];
    const auto& five = series[{5, d}];
    double sum2 = 0.0, sum5 = 0.0;
    long n = 0;
    for (const auto& [t, v] : five) {
      const auto it = two.find(t);
      if (it == two.end()) continue;
      sum5 += v;
      sum2 += it->second;
      ++n;
    }
    if (n > 0) worst_ordering = std::min(worst_ordering, (sum5 - sum2) / n);
  }

  // (c) smoothed series end within 20% of their tail plateau after rising
  double worst_dev = 0.0;
  bool rose = true;
  for (int d : qualifying) {
    std::vector<double> raw;
    for (const auto& [t, v] : series[{2, d}]) raw.push_back(v);
    const std::vector<double> smooth = moving_average(raw, cfg.smoothing_window);
    const std::size_t tail_start = smooth.size() - std::max<std::size_t>(1, smooth.size() / 4);
    double plateau = 0.0;
    for (std::size_t i = tail_start; i < smooth.size(); ++i) plateau += smooth[i];
    plateau /= static_cast<double>(smooth.size() - tail_start);
    if (plateau > 0.0)
      worst_dev = std::max(worst_dev, std::abs(smooth.back() - plateau) / plateau);
    if (*std::max_element(smooth.begin(), smooth.end()) < smooth.front())
      rose = false;
  }

  std::ostringstream detail;
  detail << qualifying.size() << " buckets, spearman = " << rho
         << ", min mean(K5 - K2) = " << worst_ordering
         << ", max tail deviation = " << worst_dev;
  return {rho > 0.5 && worst_ordering >= 0.0 && worst_dev <= 0.2 && rose,
          detail.str()};
}

// Time-homogeneous instance whose kernel rows each spread over a handful of
// random targets, the typical shape of traversal-style models.
Instance sparse_random_instance(std::mt19937_64& rng, int num_states,
                                int num_actions, int horizon,
                                int targets_per_row) {
  std::vector<double> kernel(static_cast<std::size_t>(num_actions) *
                                 num_states * num_states,
                             0.0);
  for (int a = 0; a < num_actions; ++a) {
    for (int s = 0; s < num_states; ++s) {
      const std::size_t base =
          (static_cast<std::size_t>(a) * num_states + s) * num_states;
      double sum = 0.0;
      for (int picked = 0; picked < targets_per_row;) {
        const int j = static_cast<int>(
            uniform_below(rng, static_cast<std::uint64_t>(num_states)));
        if (kernel[base + j] != 0.0) continue;
        kernel[base + j] = 0.05 + unit_half_open(rng);
        sum += kernel[base + j];
        ++picked;
      }
      for (int j = 0; j < num_states; ++j) kernel[base + j] /= sum;
    }
  }
  std::vector<double> rewards(static_cast<std::size_t>(num_actions) * num_states);
  for (double& r : rewards) r = unit_half_open(rng);
  return Instance(horizon, num_states, num_actions, 1.0, {std::move(kernel)},
                  {std::move(rewards)});
}

// 8. Two concurrent half-horizon solves beat one full solve by 1.5x and
//    reproduce the single-worker policy bit for bit.
Outcome criterion_parallel_speedup() {
  std::mt19937_64 rng(99);
  const Instance inst = sparse_random_instance(rng, 200, 8, 10000, 20);

  auto time_solve = [&]() {
    const auto start = std::chrono::steady_clock::now();
    const SolveResult result = solve(inst);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return std::make_pair(seconds, result.policy.action(0, 0));
  };
  auto time_tc = [&](int workers) {
    const auto start = std::chrono::steady_clock::now();
    TcResult result = tc_solve(inst, 2, workers);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    return std::make_pair(seconds, std::move(result.policy));
  };

  double full = 1e300;
  for (int rep = 0; rep < 5; ++rep) full = std::min(full, time_solve().first);
  double split = 1e300;
  Policy parallel_policy(1, 1, {0});
  for (int rep = 0; rep < 5; ++rep) {
    auto [seconds, policy] = time_tc(2);
    split = std::min(split, seconds);
    parallel_policy = std::move(policy);
  }
  const Policy serial_policy = tc_solve(inst, 2, 1).policy;

  const double speedup = full / split;
  std::ostringstream detail;
  detail << "full solve " << full << "s, split solve " << split
         << "s, speedup = " << speedup << ", policies identical = "
         << (parallel_policy == serial_policy ? "yes" : "no");
  return {speedup >= 1.5 && parallel_policy == serial_policy, detail.str()};
}

struct Criterion {
  int number;
  const char* name;
  Outcome (*run)();
};

const Criterion kCriteria[] = {
    {1, "chain regret equality", criterion_chain_equality},
    {2, "brute-force optimality", criterion_brute_force},
    {3, "diameter regret bound", criterion_diameter_bound},
    {4, "regret sanity", criterion_regret_sanity},
    {5, "battery bound", criterion_energy_bound},
    {6, "start-sensitivity closed forms", criterion_counterexamples},
    {7, "sweep trends", criterion_sweep_trends},
    {8, "parallel speedup", criterion_parallel_speedup},
};

}  // namespace

int main(int argc, char** argv) {
  int selected = 0;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--criterion") == 0 && i + 1 < argc) {
      selected = std::atoi(argv[i + 1]);
      ++i;
    } else {
      std::cerr << "usage: tcmdp_acceptance [--criterion N]\n";
      return 2;
    }
  }

  bool all_pass = true;
  for (const Criterion& criterion : kCriteria) {
    if (selected != 0 && criterion.number != selected) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome{false, ""};
    try {
      outcome = criterion.run();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    std::printf("[%s] %d. %s: %s (%.1fs)\n", outcome.pass ? "PASS" : "FAIL",
                criterion.number, criterion.name, outcome.detail.c_str(),
                seconds);
    std::fflush(stdout);
    all_pass = all_pass && outcome.pass;
  }
  return all_pass ? 0 : 1;
}
