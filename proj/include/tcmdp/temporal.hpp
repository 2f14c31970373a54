#pragma once

#include <utility>
#include <vector>

#include "tcmdp/mdp.hpp"

namespace tcmdp {

/// Partition of the horizon [0, T) into contiguous segments. Lengths are
/// assigned left to right as ceil(remaining / segments_left), so earlier
/// segments absorb the extra step when the split is uneven.
struct SplitPlan {
  std::vector<int> boundaries;  // 0 = b_0 < b_1 < ... < b_K = T

  int segments() const { return static_cast<int>(boundaries.size()) - 1; }
  int offset(int k) const { return boundaries[k]; }
  int length(int k) const { return boundaries[k + 1] - boundaries[k]; }
};

SplitPlan make_split_plan(int horizon, int k);

struct SubInstance {
  Instance instance;
  int offset;
};

/// Slices `inst` into k sub-instances along the time axis.
std::vector<SubInstance> split_instance(const Instance& inst, int k);

/// Stitches per-segment policies (with their offsets) into one policy over
/// the full horizon. Segments must tile the horizon exactly.
Policy concat_policies(const std::vector<std::pair<Policy, int>>& subs);

struct TcResult {
  Policy policy;                      // concatenated policy over [0, T)
  std::vector<ValueTable> sub_values; // per-segment optimal values
  std::vector<double> wall_times;     // per-segment solve seconds
  SplitPlan plan;
};

/// Splits the horizon k ways, solves every sub-instance, and concatenates
/// the optimal sub-policies. Sub-instances are solved concurrently on up to
/// `workers` threads; the result does not depend on the worker count.
TcResult tc_solve(const Instance& inst, int k, int workers = 1);

struct RegretResult {
  double delta;
  double v_opt;
  double v_tc;
};

/// Optimal value minus concatenated-policy value, both by exact evaluation.
RegretResult regret(const Instance& inst, const Distribution& mu0, int k,
                    int workers = 1);

struct FirstHalfValues {
  double v1_tc;   // reward of the first sub-instance's own optimal policy
  double v1_opt;  // reward of the full-horizon optimal policy, first half only
};

/// Reward accrued over the first segment of the two-way split by the
/// segment-optimal policy versus the full-horizon optimal policy.
FirstHalfValues first_half_dominance(const Instance& inst,
                                     const Distribution& mu0);

}  // namespace tcmdp
