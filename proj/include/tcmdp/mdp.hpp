#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace tcmdp {

/// An input violates a documented precondition or invariant.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An iterative computation failed to converge or left its numeric range.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Tolerance for stochasticity / normalization checks.
inline constexpr double kProbTol = 1e-9;
/// Default tolerance for value comparisons.
inline constexpr double kValueTol = 1e-9;

/// Probability vector over states. Immutable after construction.
class Distribution {
 public:
  /// Validates: no NaN, no negative entries, sum within kProbTol of 1.
  explicit Distribution(std::vector<double> probs);

  static Distribution uniform(int num_states);
  static Distribution point(int num_states, int state);

  int size() const { return static_cast<int>(probs_.size()); }
  double operator[](int s) const { return probs_[static_cast<std::size_t>(s)]; }
  const std::vector<double>& probs() const { return probs_; }

 private:
  std::vector<double> probs_;
};

/// Deterministic time-indexed state -> action map.
class Policy {
 public:
  /// `actions` is row-major [t][s], horizon * num_states entries.
  Policy(int horizon, int num_states, std::vector<int> actions);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int action(int t, int s) const {
    return actions_[static_cast<std::size_t>(t) * num_states_ + s];
  }
  const std::vector<int>& actions() const { return actions_; }

  bool operator==(const Policy&) const = default;

 private:
  int horizon_;
  int num_states_;
  std::vector<int> actions_;
};

/// Tabular finite-horizon MDP: per-step transition kernels and expected
/// one-step rewards, with a uniform reward ceiling r_max.
///
/// Transition and reward tables are stored either once (time-homogeneous)
/// or once per time step; accessors expand the shared table logically, so
/// clients never see the difference. A kernel table holds
/// num_actions * num_states * num_states entries, row-major by (a, s, s');
/// a reward table holds num_actions * num_states entries by (a, s).
class Instance {
 public:
  Instance(int horizon, int num_states, int num_actions, double r_max,
           std::vector<std::vector<double>> transitions,
           std::vector<std::vector<double>> rewards);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  int num_actions() const { return num_actions_; }
  double r_max() const { return r_max_; }

  bool homogeneous_transitions() const { return transitions_.size() == 1; }
  bool homogeneous_rewards() const { return rewards_.size() == 1; }
  bool time_homogeneous() const {
    return homogeneous_transitions() && homogeneous_rewards();
  }

  /// Row of num_states next-state probabilities for (t, a, s).
  const double* kernel_row(int t, int a, int s) const {
    const auto& table = transitions_[transitions_.size() == 1 ? 0 : t];
    return table.data() +
           (static_cast<std::size_t>(a) * num_states_ + s) * num_states_;
  }
  double transition(int t, int a, int s, int next) const {
    return kernel_row(t, a, s)[next];
  }
  double reward(int t, int a, int s) const {
    return rewards_[rewards_.size() == 1 ? 0 : t]
                   [static_cast<std::size_t>(a) * num_states_ + s];
  }

  /// Same tables with a different horizon. Requires time homogeneity.
  Instance with_horizon(int horizon) const;

  /// Sub-instance over time steps [begin, end).
  Instance slice(int begin, int end) const;

  /// Raw stored tables (size 1 or horizon), for serialization.
  const std::vector<std::vector<double>>& transition_tables() const {
    return transitions_;
  }
  const std::vector<std::vector<double>>& reward_tables() const {
    return rewards_;
  }

 private:
  int horizon_;
  int num_states_;
  int num_actions_;
  double r_max_;
  std::vector<std::vector<double>> transitions_;
  std::vector<std::vector<double>> rewards_;
};

/// Optimal values V[t][s] for t in [0, horizon], with V[horizon][s] = 0.
class ValueTable {
 public:
  ValueTable(int horizon, int num_states);

  int horizon() const { return horizon_; }
  int num_states() const { return num_states_; }
  double value(int t, int s) const {
    return v_[static_cast<std::size_t>(t) * num_states_ + s];
  }
  double& value(int t, int s) {
    return v_[static_cast<std::size_t>(t) * num_states_ + s];
  }
  std::span<const double> row(int t) const {
    return {v_.data() + static_cast<std::size_t>(t) * num_states_,
            static_cast<std::size_t>(num_states_)};
  }

 private:
  int horizon_;
  int num_states_;
  std::vector<double> v_;
};

struct ValidationReport {
  bool ok = true;
  std::vector<std::string> violations;
};

struct SolveResult {
  Policy policy;
  ValueTable values;
};

struct SimulationResult {
  double mean;
  double std_error;
};

/// Checks kernel row sums, sign constraints, reward range and table shapes.
/// Never throws; failures are listed in the report.
ValidationReport validate_instance(const Instance& inst);

/// Exact backward induction. Ties in the argmax break toward the lowest
/// action index. Throws ValidationError if the instance does not validate.
SolveResult solve(const Instance& inst);

/// Exact total expected reward of `pol` from `mu0`, by forward propagation
/// of the state distribution.
double evaluate(const Instance& inst, const Policy& pol,
                const Distribution& mu0);

/// State distributions mu_0 .. mu_{T-1} under `pol` starting from `mu0`.
std::vector<Distribution> forward_distributions(const Instance& inst,
                                                const Policy& pol,
                                                const Distribution& mu0);

/// Monte-Carlo estimate of evaluate(). Per-step rewards use the expected
/// reward table, so a deterministic instance reproduces evaluate() exactly.
/// Paths draw from streams derived by counter from `seed`, so the result is
/// a pure function of (inst, pol, mu0, n_paths, seed).
SimulationResult simulate(const Instance& inst, const Policy& pol,
                          const Distribution& mu0, long n_paths,
                          std::uint64_t seed);

}  // namespace tcmdp
