#include "tcmdp/mdp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "tcmdp/rng.hpp"
#include "solve_internal.hpp"

namespace tcmdp {

namespace {

std::string format_index(int t, int a, int s) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "(t=%d,a=%d,s=%d)", t, a, s);
  return buf;
}

void check_shapes(const Instance& inst, const Policy& pol,
                  const Distribution& mu0) {
  if (pol.horizon() != inst.horizon())
    throw ValidationError("policy horizon does not match instance horizon");
  if (pol.num_states() != inst.num_states())
    throw ValidationError("policy state count does not match instance");
  if (mu0.size() != inst.num_states())
    throw ValidationError("initial distribution size does not match instance");
  for (int a : pol.actions())
    if (a < 0 || a >= inst.num_actions())
      throw ValidationError("policy action index out of range");
}

// Inverse-CDF draw from a kernel row; u in [0, 1).
int sample_row(const double* row, int n, double u) {
  double acc = 0.0;
  int last_positive = 0;
  for (int j = 0; j < n; ++j) {
    if (row[j] > 0.0) last_positive = j;
    acc += row[j];
    if (u < acc) return j;
  }
  return last_positive;
}

}  // namespace

namespace detail {

std::optional<SparseKernel> try_sparse_kernel(const Instance& inst) {
  if (!inst.homogeneous_transitions()) return std::nullopt;
  const std::vector<double>& table = inst.transition_tables()[0];
  std::size_t nonzeros = 0;
  for (double p : table)
    if (p != 0.0) ++nonzeros;
  if (nonzeros * 4 > table.size()) return std::nullopt;

  const int S = inst.num_states();
  SparseKernel kernel;
  kernel.row_start.reserve(table.size() / S + 1);
  kernel.col.reserve(nonzeros);
  kernel.val.reserve(nonzeros);
  kernel.row_start.push_back(0);
  for (std::size_t row = 0; row < table.size() / S; ++row) {
    for (int j = 0; j < S; ++j) {
      const double p = table[row * S + j];
      if (p != 0.0) {
        kernel.col.push_back(j);
        kernel.val.push_back(p);
      }
    }
    kernel.row_start.push_back(kernel.col.size());
  }
  return kernel;
}

SolveResult solve_prepared(const Instance& inst, const SparseKernel* sparse) {
  const int T = inst.horizon();
  const int S = inst.num_states();
  const int A = inst.num_actions();
  ValueTable values(T, S);
  std::vector<int> actions(static_cast<std::size_t>(T) * S, 0);

  for (int t = T - 1; t >= 0; --t) {
    const std::span<const double> next = values.row(t + 1);
    for (int s = 0; s < S; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      int best_action = 0;
      for (int a = 0; a < A; ++a) {
        double q = inst.reward(t, a, s);
        if (sparse) {
          const std::size_t row = static_cast<std::size_t>(a) * S + s;
          const std::size_t end = sparse->row_start[row + 1];
          for (std::size_t k = sparse->row_start[row]; k < end; ++k)
            q += sparse->val[k] * next[sparse->col[k]];
        } else {
          const double* row = inst.kernel_row(t, a, s);
          for (int j = 0; j < S; ++j) q += row[j] * next[j];
        }
        if (q > best) {
          best = q;
          best_action = a;
        }
      }
      values.value(t, s) = best;
      actions[static_cast<std::size_t>(t) * S + s] = best_action;
    }
  }
  return {Policy(T, S, std::move(actions)), std::move(values)};
}

}  // namespace detail

Distribution::Distribution(std::vector<double> probs) : probs_(std::move(probs)) {
  if (probs_.empty()) throw ValidationError("distribution must be nonempty");
  double sum = 0.0;
  for (double p : probs_) {
    if (std::isnan(p)) throw ValidationError("distribution contains NaN");
    if (p < 0.0) throw ValidationError("distribution contains a negative entry");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbTol)
    throw ValidationError("distribution does not sum to 1");
}

Distribution Distribution::uniform(int num_states) {
  if (num_states < 1) throw ValidationError("num_states must be >= 1");
  return Distribution(
      std::vector<double>(num_states, 1.0 / static_cast<double>(num_states)));
}

Distribution Distribution::point(int num_states, int state) {
  if (state < 0 || state >= num_states)
    throw ValidationError("point-mass state out of range");
  std::vector<double> p(num_states, 0.0);
  p[state] = 1.0;
  return Distribution(std::move(p));
}

Policy::Policy(int horizon, int num_states, std::vector<int> actions)
    : horizon_(horizon), num_states_(num_states), actions_(std::move(actions)) {
  if (horizon_ < 1 || num_states_ < 1)
    throw ValidationError("policy dimensions must be positive");
  if (actions_.size() !=
      static_cast<std::size_t>(horizon_) * static_cast<std::size_t>(num_states_))
    throw ValidationError("policy table size does not match dimensions");
}

Instance::Instance(int horizon, int num_states, int num_actions, double r_max,
                   std::vector<std::vector<double>> transitions,
                   std::vector<std::vector<double>> rewards)
    : horizon_(horizon),
      num_states_(num_states),
      num_actions_(num_actions),
      r_max_(r_max),
      transitions_(std::move(transitions)),
      rewards_(std::move(rewards)) {
  if (horizon_ < 1) throw ValidationError("horizon must be >= 1");
  if (num_states_ < 1) throw ValidationError("num_states must be >= 1");
  if (num_actions_ < 1) throw ValidationError("num_actions must be >= 1");
  if (!(r_max_ > 0.0)) throw ValidationError("r_max must be > 0");
  const std::size_t t_count = static_cast<std::size_t>(horizon_);
  if (transitions_.size() != 1 && transitions_.size() != t_count)
    throw ValidationError("transition storage must hold 1 or horizon tables");
  if (rewards_.size() != 1 && rewards_.size() != t_count)
    throw ValidationError("reward storage must hold 1 or horizon tables");
  const std::size_t kernel_size = static_cast<std::size_t>(num_actions_) *
                                  num_states_ * num_states_;
  const std::size_t reward_size =
      static_cast<std::size_t>(num_actions_) * num_states_;
  for (const auto& table : transitions_)
    if (table.size() != kernel_size)
      throw ValidationError("transition table has wrong shape");
  for (const auto& table : rewards_)
    if (table.size() != reward_size)
      throw ValidationError("reward table has wrong shape");
}

Instance Instance::with_horizon(int horizon) const {
  if (!time_homogeneous())
    throw ValidationError(
        "with_horizon requires a time-homogeneous instance");
  return Instance(horizon, num_states_, num_actions_, r_max_, transitions_,
                  rewards_);
}

Instance Instance::slice(int begin, int end) const {
  if (begin < 0 || end > horizon_ || begin >= end)
    throw ValidationError("invalid slice range");
  auto cut = [&](const std::vector<std::vector<double>>& tables) {
    if (tables.size() == 1) return tables;
    return std::vector<std::vector<double>>(tables.begin() + begin,
                                            tables.begin() + end);
  };
  return Instance(end - begin, num_states_, num_actions_, r_max_,
                  cut(transitions_), cut(rewards_));
}

ValueTable::ValueTable(int horizon, int num_states)
    : horizon_(horizon),
      num_states_(num_states),
      v_(static_cast<std::size_t>(horizon + 1) * num_states, 0.0) {
  if (horizon_ < 1 || num_states_ < 1)
    throw ValidationError("value table dimensions must be positive");
}

ValidationReport validate_instance(const Instance& inst) {
  ValidationReport report;
  auto fail = [&](const std::string& msg) {
    report.ok = false;
    report.violations.push_back(msg);
  };

  const int S = inst.num_states();
  const int A = inst.num_actions();
  // Stored tables only; a shared table is checked once.
  const int t_kernels = static_cast<int>(inst.transition_tables().size());
  const int t_rewards = static_cast<int>(inst.reward_tables().size());

  for (int t = 0; t < t_kernels; ++t) {
    for (int a = 0; a < A; ++a) {
      for (int s = 0; s < S; ++s) {
        const double* row = inst.kernel_row(t, a, s);
        double sum = 0.0;
        bool bad_entry = false;
        for (int j = 0; j < S; ++j) {
          if (std::isnan(row[j]) || row[j] < 0.0) bad_entry = true;
          sum += row[j];
        }
        if (bad_entry)
          fail("kernel entry negative or NaN at " + format_index(t, a, s));
        if (std::abs(sum - 1.0) > kProbTol)
          fail("row sum " + std::to_string(sum) + " at " +
               format_index(t, a, s));
      }
    }
  }
  for (int t = 0; t < t_rewards; ++t) {
    for (int a = 0; a < A; ++a) {
      for (int s = 0; s < S; ++s) {
        const double r = inst.reward(t, a, s);
        if (std::isnan(r) || r < -kProbTol || r > inst.r_max() + kProbTol)
          fail("reward range violation, value " + std::to_string(r) + " at " +
               format_index(t, a, s));
      }
    }
  }
  return report;
}

SolveResult solve(const Instance& inst) {
  ValidationReport report = validate_instance(inst);
  if (!report.ok)
    throw ValidationError("invalid instance: " + report.violations.front());
  const std::optional<detail::SparseKernel> sparse =
      detail::try_sparse_kernel(inst);
  return detail::solve_prepared(inst, sparse ? &*sparse : nullptr);
}

double evaluate(const Instance& inst, const Policy& pol,
                const Distribution& mu0) {
  check_shapes(inst, pol, mu0);
  const int T = inst.horizon();
  const int S = inst.num_states();

  std::vector<double> mu = mu0.probs();
  std::vector<double> next(S, 0.0);
  double total = 0.0;
  for (int t = 0; t < T; ++t) {
    std::fill(next.begin(), next.end(), 0.0);
    for (int s = 0; s < S; ++s) {
      const double mass = mu[s];
      if (mass == 0.0) continue;
      const int a = pol.action(t, s);
      total += mass * inst.reward(t, a, s);
      const double* row = inst.kernel_row(t, a, s);
      for (int j = 0; j < S; ++j) next[j] += mass * row[j];
    }
    std::swap(mu, next);
  }
  return total;
}

std::vector<Distribution> forward_distributions(const Instance& inst,
                                                const Policy& pol,
                                                const Distribution& mu0) {
  check_shapes(inst, pol, mu0);
  const int T = inst.horizon();
  const int S = inst.num_states();

  std::vector<Distribution> out;
  out.reserve(T);
  std::vector<double> mu = mu0.probs();
  std::vector<double> next(S, 0.0);
  for (int t = 0; t < T; ++t) {
    out.push_back(Distribution(mu));
    std::fill(next.begin(), next.end(), 0.0);
    for (int s = 0; s < S; ++s) {
      const double mass = mu[s];
      if (mass == 0.0) continue;
      const double* row = inst.kernel_row(t, pol.action(t, s), s);
      for (int j = 0; j < S; ++j) next[j] += mass * row[j];
    }
    std::swap(mu, next);
  }
  return out;
}

SimulationResult simulate(const Instance& inst, const Policy& pol,
                          const Distribution& mu0, long n_paths,
                          std::uint64_t seed) {
  if (n_paths < 1) throw ValidationError("n_paths must be >= 1");
  check_shapes(inst, pol, mu0);
  const int T = inst.horizon();
  const int S = inst.num_states();

  std::vector<double> totals(static_cast<std::size_t>(n_paths));
  for (long p = 0; p < n_paths; ++p) {
    std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(p)));
    int s = sample_row(mu0.probs().data(), S, unit_half_open(rng));
    double total = 0.0;
    for (int t = 0; t < T; ++t) {
      const int a = pol.action(t, s);
      total += inst.reward(t, a, s);
      s = sample_row(inst.kernel_row(t, a, s), S, unit_half_open(rng));
    }
    totals[static_cast<std::size_t>(p)] = total;
  }

  // Mean as first sample plus mean deviation: identical paths then yield
  // the path value bit-for-bit and a zero standard error.
  const double base = totals[0];
  double dev_sum = 0.0;
  for (double x : totals) dev_sum += x - base;
  const double mean = base + dev_sum / static_cast<double>(n_paths);

  double sq_sum = 0.0;
  for (double x : totals) sq_sum += (x - mean) * (x - mean);
  const double std_error =
      n_paths > 1 ? std::sqrt(sq_sum / static_cast<double>(n_paths - 1) /
                              static_cast<double>(n_paths))
                  : 0.0;
  return {mean, std_error};
}

}  // namespace tcmdp
