#include "tcmdp/temporal.hpp"

#include "solve_internal.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <optional>
#include <thread>

namespace tcmdp {

SplitPlan make_split_plan(int horizon, int k) {
  if (k < 1) throw ValidationError("split count must be >= 1");
  if (k > horizon)
    throw ValidationError("split count exceeds horizon");
  SplitPlan plan;
  plan.boundaries.reserve(k + 1);
  int b = 0;
  for (int seg = 0; seg < k; ++seg) {
    plan.boundaries.push_back(b);
    const int remaining = horizon - b;
    const int left = k - seg;
    b += (remaining + left - 1) / left;
  }
  plan.boundaries.push_back(horizon);
  return plan;
}

std::vector<SubInstance> split_instance(const Instance& inst, int k) {
  const SplitPlan plan = make_split_plan(inst.horizon(), k);
  std::vector<SubInstance> subs;
  subs.reserve(k);
  for (int seg = 0; seg < k; ++seg)
    subs.push_back(
        {inst.slice(plan.offset(seg), plan.boundaries[seg + 1]), plan.offset(seg)});
  return subs;
}

Policy concat_policies(const std::vector<std::pair<Policy, int>>& subs) {
  if (subs.empty()) throw ValidationError("no policies to concatenate");

  std::vector<std::pair<Policy, int>> ordered = subs;
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.second < b.second; });

  const int num_states = ordered.front().first.num_states();
  if (ordered.front().second != 0)
    throw ValidationError("segments do not start at time 0");
  int cursor = 0;
  for (const auto& [pol, offset] : ordered) {
    if (pol.num_states() != num_states)
      throw ValidationError("segment state counts differ");
    if (offset != cursor)
      throw ValidationError("segments overlap or leave a gap at time " +
                            std::to_string(cursor));
    cursor += pol.horizon();
  }

  const int horizon = cursor;
  std::vector<int> actions(static_cast<std::size_t>(horizon) * num_states);
  for (const auto& [pol, offset] : ordered) {
    std::copy(pol.actions().begin(), pol.actions().end(),
              actions.begin() +
                  static_cast<std::size_t>(offset) * num_states);
  }
  return Policy(horizon, num_states, std::move(actions));
}

TcResult tc_solve(const Instance& inst, int k, int workers) {
  if (workers < 1) throw ValidationError("workers must be >= 1");
  const ValidationReport report = validate_instance(inst);
  if (!report.ok)
    throw ValidationError("invalid instance: " + report.violations.front());
  const std::vector<SubInstance> subs = split_instance(inst, k);
  const int segments = static_cast<int>(subs.size());

  // Segments of a time-homogeneous instance share its kernel, so the
  // compressed form is prepared once for all of them.
  const std::optional<detail::SparseKernel> shared_kernel =
      detail::try_sparse_kernel(inst);

  std::vector<std::optional<SolveResult>> results(segments);
  std::vector<double> wall_times(segments, 0.0);
  std::vector<std::exception_ptr> errors(segments);

  std::atomic<int> cursor{0};
  auto work = [&]() {
    for (int i = cursor.fetch_add(1); i < segments; i = cursor.fetch_add(1)) {
      const auto start = std::chrono::steady_clock::now();
      try {
        const detail::SparseKernel* kernel =
            shared_kernel && subs[i].instance.homogeneous_transitions()
                ? &*shared_kernel
                : nullptr;
        results[i] = detail::solve_prepared(subs[i].instance, kernel);
      } catch (...) {
        errors[i] = std::current_exception();
      }
      wall_times[i] =
          std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
              .count();
    }
  };

  const int thread_count = std::min(workers, segments);
  if (thread_count <= 1) {
    work();
  } else {
    std::vector<std::thread> threads;
    threads.reserve(thread_count);
    for (int i = 0; i < thread_count; ++i) threads.emplace_back(work);
    for (auto& t : threads) t.join();
  }
  for (int i = 0; i < segments; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);

  std::vector<std::pair<Policy, int>> pieces;
  std::vector<ValueTable> sub_values;
  pieces.reserve(segments);
  sub_values.reserve(segments);
  for (int i = 0; i < segments; ++i) {
    pieces.emplace_back(results[i]->policy, subs[i].offset);
    sub_values.push_back(std::move(results[i]->values));
  }
  return {concat_policies(pieces), std::move(sub_values),
          std::move(wall_times), make_split_plan(inst.horizon(), k)};
}

RegretResult regret(const Instance& inst, const Distribution& mu0, int k,
                    int workers) {
  const SolveResult full = solve(inst);
  const double v_opt = evaluate(inst, full.policy, mu0);
  const TcResult tc = tc_solve(inst, k, workers);
  const double v_tc = evaluate(inst, tc.policy, mu0);
  return {v_opt - v_tc, v_opt, v_tc};
}

FirstHalfValues first_half_dominance(const Instance& inst,
                                     const Distribution& mu0) {
  if (inst.horizon() < 2)
    throw ValidationError("two-way split requires horizon >= 2");
  const std::vector<SubInstance> subs = split_instance(inst, 2);
  const Instance& first = subs[0].instance;
  const int half = first.horizon();

  const SolveResult sub = solve(first);
  const double v1_tc = evaluate(first, sub.policy, mu0);

  const SolveResult full = solve(inst);
  const int S = inst.num_states();
  std::vector<int> head(full.policy.actions().begin(),
                        full.policy.actions().begin() +
                            static_cast<std::size_t>(half) * S);
  const double v1_opt =
      evaluate(first, Policy(half, S, std::move(head)), mu0);
  return {v1_tc, v1_opt};
}

}  // namespace tcmdp
