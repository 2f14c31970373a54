#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include <json.hpp>

#include "tcmdp/diameter.hpp"
#include "tcmdp/mdp.hpp"

namespace tcmdp {

/// Randomized regret sweep over graph-traversal instances: for every
/// generated instance and every (k, T), the exact regret of the k-way
/// concatenated policy from the uniform initial distribution, normalized by
/// the instance's largest reward and averaged per classic-diameter bucket.
struct SweepConfig {
  int n_states = 50;
  int n_instances = 500;
  std::uint64_t seed = 1;
  std::vector<int> k_values = {2, 3, 4, 5};
  int t_max = 200;
  int smoothing_window = 5;
  int workers = 0;  // 0 = hardware concurrency
  int reward_max = 200;
  bool log_raw = false;
};

SweepConfig sweep_config_from_json(const nlohmann::ordered_json& j);

/// One (k, diameter bucket, horizon) cell of the aggregate.
struct SweepRecord {
  int k;
  int d;
  int t;
  double delta_hat;  // bucket mean of regret / instance max reward
  long count;        // instances in the bucket
};

/// Per-instance normalized regret, kept when log_raw is set.
struct RawRecord {
  int instance;
  int d;
  int k;
  int t;
  double delta;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // sorted by (k, d, t)
  std::vector<RawRecord> raw;
};

/// Runs the sweep. Instances are generated from streams derived by counter
/// from cfg.seed and aggregated in instance order, so the output is
/// identical for any worker count.
SweepResult run_sweep(const SweepConfig& cfg);

struct MaxRecord {
  int k;
  int d;
  double delta_hat_max;  // max over the horizons present
  long count;
};

std::vector<MaxRecord> delta_hat_max(const std::vector<SweepRecord>& records);

/// Centered moving average of width w; the window shrinks at the ends.
std::vector<double> moving_average(const std::vector<double>& series, int w);

/// CSV with header `K,d,T,delta_hat,count`, sorted by (K,d,T); reals are
/// written with enough digits to round-trip exactly.
void emit_csv(const std::vector<SweepRecord>& records,
              const std::filesystem::path& path);
std::vector<SweepRecord> parse_records_csv(const std::filesystem::path& path);

/// One `K<k>_d<d>.dat` series file per (k, d) pair with columns
/// `T delta_hat smoothed`, ready for external plotting.
void emit_plotdata(const std::vector<SweepRecord>& records,
                   const std::filesystem::path& directory, int window);

namespace detail {

/// Exact normalized regrets of one traversal instance for every requested
/// (k, T <= t_max), exploiting time homogeneity: one family of
/// steps-to-go value functions serves the full solve and all segment
/// policies. Entry [k_index * (t_max + 1) + T] is NaN for T < k.
std::vector<double> instance_deltas(const DirectedGraph& graph,
                                    const std::vector<double>& state_rewards,
                                    const std::vector<int>& k_values,
                                    int t_max);

}  // namespace detail

}  // namespace tcmdp
