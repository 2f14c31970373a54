#include "tcmdp/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <thread>

#include "tcmdp/families.hpp"
#include "tcmdp/rng.hpp"
#include "tcmdp/temporal.hpp"

namespace tcmdp {

namespace detail {

std::vector<double> instance_deltas(const DirectedGraph& graph,
                                    const std::vector<double>& state_rewards,
                                    const std::vector<int>& k_values,
                                    int t_max) {
  const int n = graph.num_vertices();
  std::vector<std::vector<int>> targets(static_cast<std::size_t>(n));
  for (int s = 0; s < n; ++s) targets[static_cast<std::size_t>(s)] = graph.sorted_neighbors(s);

  const double r_bar =
      *std::max_element(state_rewards.begin(), state_rewards.end());

  // values[m][s]: optimal reward of an m-step instance started at s. Because
  // the instance is time-homogeneous this one family gives the optimal value
  // of every horizon and the greedy policy of every segment length.
  std::vector<std::vector<double>> values(static_cast<std::size_t>(t_max) + 1,
                                          std::vector<double>(n, 0.0));
  for (int m = 1; m <= t_max; ++m) {
    const std::vector<double>& prev = values[static_cast<std::size_t>(m - 1)];
    std::vector<double>& cur = values[static_cast<std::size_t>(m)];
    for (int s = 0; s < n; ++s) {
      double best = -std::numeric_limits<double>::infinity();
      for (int j : targets[static_cast<std::size_t>(s)])
        best = std::max(best, prev[static_cast<std::size_t>(j)]);
      cur[static_cast<std::size_t>(s)] =
          state_rewards[static_cast<std::size_t>(s)] + best;
    }
  }

  const double uniform_mass = 1.0 / static_cast<double>(n);
  std::vector<double> mu(static_cast<std::size_t>(n));
  std::vector<double> next(static_cast<std::size_t>(n));

  std::vector<double> out(k_values.size() * (static_cast<std::size_t>(t_max) + 1),
                          std::numeric_limits<double>::quiet_NaN());
  for (std::size_t ki = 0; ki < k_values.size(); ++ki) {
    const int k = k_values[ki];
    for (int horizon = k; horizon <= t_max; ++horizon) {
      double v_opt = 0.0;
      for (int s = 0; s < n; ++s)
        v_opt += uniform_mass * values[static_cast<std::size_t>(horizon)]
                                      [static_cast<std::size_t>(s)];

      const SplitPlan plan = make_split_plan(horizon, k);
      std::fill(mu.begin(), mu.end(), uniform_mass);
      double v_tc = 0.0;
      for (int seg = 0; seg < k; ++seg) {
        const int length = plan.length(seg);
        for (int local_t = 0; local_t < length; ++local_t) {
          const std::vector<double>& go =
              values[static_cast<std::size_t>(length - 1 - local_t)];
          std::fill(next.begin(), next.end(), 0.0);
          for (int s = 0; s < n; ++s) {
            const double mass = mu[static_cast<std::size_t>(s)];
            if (mass == 0.0) continue;
            v_tc += mass * state_rewards[static_cast<std::size_t>(s)];
            // lowest-index tie break, matching the dense solver
            const std::vector<int>& outs = targets[static_cast<std::size_t>(s)];
            int pick = outs[0];
            double best = go[static_cast<std::size_t>(outs[0])];
            for (std::size_t c = 1; c < outs.size(); ++c) {
              const double v = go[static_cast<std::size_t>(outs[c])];
              if (v > best) {
                best = v;
                pick = outs[c];
              }
            }
            next[static_cast<std::size_t>(pick)] += mass;
          }
          std::swap(mu, next);
        }
      }

      const double delta = (v_opt - v_tc) / r_bar;
      if (delta < -kValueTol)
        throw NumericalError("negative regret in sweep engine");
      out[ki * (static_cast<std::size_t>(t_max) + 1) +
          static_cast<std::size_t>(horizon)] = delta;
    }
  }
  return out;
}

}  // namespace detail

SweepConfig sweep_config_from_json(const nlohmann::ordered_json& j) {
  SweepConfig cfg;
  cfg.n_states = j.value("n_states", cfg.n_states);
  cfg.n_instances = j.value("n_instances", cfg.n_instances);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.k_values = j.value("k_values", cfg.k_values);
  cfg.t_max = j.value("t_max", cfg.t_max);
  cfg.smoothing_window = j.value("smoothing_window", cfg.smoothing_window);
  cfg.workers = j.value("workers", cfg.workers);
  cfg.reward_max = j.value("reward_max", cfg.reward_max);
  cfg.log_raw = j.value("log_raw", cfg.log_raw);
  return cfg;
}

SweepResult run_sweep(const SweepConfig& cfg) {
  if (cfg.n_instances < 1) throw ValidationError("n_instances must be >= 1");
  if (cfg.k_values.empty()) throw ValidationError("k_values must be nonempty");
  for (int k : cfg.k_values)
    if (k < 1) throw ValidationError("k values must be >= 1");
  const int min_k = *std::min_element(cfg.k_values.begin(), cfg.k_values.end());
  if (cfg.t_max < min_k) throw ValidationError("t_max must be >= min k");

  const int n_instances = cfg.n_instances;
  std::vector<int> diameters(static_cast<std::size_t>(n_instances), 0);
  std::vector<std::vector<double>> deltas(static_cast<std::size_t>(n_instances));

  std::atomic<int> cursor{0};
  std::atomic<bool> failed{false};
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(n_instances));
  auto work = [&]() {
    for (int i = cursor.fetch_add(1); i < n_instances && !failed.load();
         i = cursor.fetch_add(1)) {
      try {
        DgtConfig gen;
        gen.n = cfg.n_states;
        gen.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i));
        gen.reward_max = cfg.reward_max;
        gen.horizon = 1;
        const DgtInstance dgt = dgt_random(gen);
        const ValidationReport report = validate_instance(dgt.instance);
        if (!report.ok)
          throw ValidationError("generated instance " + std::to_string(i) +
                                " failed validation: " +
                                report.violations.front());
        diameters[static_cast<std::size_t>(i)] = classic_diameter(dgt.graph);

        std::vector<double> rewards(static_cast<std::size_t>(cfg.n_states));
        for (int s = 0; s < cfg.n_states; ++s)
          rewards[static_cast<std::size_t>(s)] = dgt.instance.reward(0, 0, s);
        deltas[static_cast<std::size_t>(i)] = detail::instance_deltas(
            dgt.graph, rewards, cfg.k_values, cfg.t_max);
      } catch (...) {
        errors[static_cast<std::size_t>(i)] = std::current_exception();
        failed.store(true);
      }
    }
  };

  int workers = cfg.workers > 0
                    ? cfg.workers
                    : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min(workers, n_instances));
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  // Ordered reduction: bucket sums accumulate in instance-index order, so
  // the aggregate does not depend on worker scheduling.
  std::map<std::tuple<int, int, int>, std::pair<double, long>> buckets;
  SweepResult result;
  for (int i = 0; i < n_instances; ++i) {
    const int d = diameters[static_cast<std::size_t>(i)];
    for (std::size_t ki = 0; ki < cfg.k_values.size(); ++ki) {
      const int k = cfg.k_values[ki];
      for (int t = k; t <= cfg.t_max; ++t) {
        const double delta =
            deltas[static_cast<std::size_t>(i)]
                  [ki * (static_cast<std::size_t>(cfg.t_max) + 1) +
                   static_cast<std::size_t>(t)];
        auto& bucket = buckets[{k, d, t}];
        bucket.first += delta;
        bucket.second += 1;
        if (cfg.log_raw) result.raw.push_back({i, d, k, t, delta});
      }
    }
  }
  result.records.reserve(buckets.size());
  for (const auto& [key, sum_count] : buckets)
    result.records.push_back({std::get<0>(key), std::get<1>(key),
                              std::get<2>(key),
                              sum_count.first / static_cast<double>(sum_count.second),
                              sum_count.second});
  return result;
}

std::vector<MaxRecord> delta_hat_max(const std::vector<SweepRecord>& records) {
  if (records.empty()) throw ValidationError("no records to aggregate");
  std::map<std::pair<int, int>, MaxRecord> maxima;
  for (const SweepRecord& rec : records) {
    auto [it, inserted] = maxima.try_emplace(
        {rec.k, rec.d}, MaxRecord{rec.k, rec.d, rec.delta_hat, rec.count});
    if (!inserted)
      it->second.delta_hat_max = std::max(it->second.delta_hat_max, rec.delta_hat);
  }
  std::vector<MaxRecord> out;
  out.reserve(maxima.size());
  for (const auto& [key, rec] : maxima) out.push_back(rec);
  return out;
}

std::vector<double> moving_average(const std::vector<double>& series, int w) {
  if (series.empty()) throw ValidationError("cannot smooth an empty series");
  if (w < 1) throw ValidationError("window must be >= 1");
  const int n = static_cast<int>(series.size());
  const int left = (w - 1) / 2;
  const int right = w / 2;
  std::vector<double> out(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const int lo = std::max(0, i - left);
    const int hi = std::min(n - 1, i + right);
    double sum = 0.0;
    for (int j = lo; j <= hi; ++j) sum += series[static_cast<std::size_t>(j)];
    out[static_cast<std::size_t>(i)] = sum / static_cast<double>(hi - lo + 1);
  }
  return out;
}

namespace {

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

}  // namespace

void emit_csv(const std::vector<SweepRecord>& records,
              const std::filesystem::path& path) {
  if (records.empty()) throw ValidationError("no records to emit");
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path.string());
  out << "K,d,T,delta_hat,count\n";
  for (const SweepRecord& rec : records)
    out << rec.k << "," << rec.d << "," << rec.t << ","
        << format_real(rec.delta_hat) << "," << rec.count << "\n";
}

std::vector<SweepRecord> parse_records_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != "K,d,T,delta_hat,count")
    throw ValidationError("unexpected CSV header in " + path.string());
  std::vector<SweepRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    SweepRecord rec;
    char* end = nullptr;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream fields(line);
    if (!(fields >> rec.k >> rec.d >> rec.t))
      throw ValidationError("malformed CSV row: " + line);
    std::string delta_text;
    if (!(fields >> delta_text >> rec.count))
      throw ValidationError("malformed CSV row: " + line);
    rec.delta_hat = std::strtod(delta_text.c_str(), &end);
    if (end == delta_text.c_str())
      throw ValidationError("malformed CSV real: " + delta_text);
    records.push_back(rec);
  }
  return records;
}

void emit_plotdata(const std::vector<SweepRecord>& records,
                   const std::filesystem::path& directory, int window) {
  if (records.empty()) throw ValidationError("no records to emit");
  std::filesystem::create_directories(directory);

  std::map<std::pair<int, int>, std::vector<const SweepRecord*>> series;
  for (const SweepRecord& rec : records)
    series[{rec.k, rec.d}].push_back(&rec);

  for (auto& [key, cells] : series) {
    std::sort(cells.begin(), cells.end(),
              [](const SweepRecord* a, const SweepRecord* b) { return a->t < b->t; });
    std::vector<double> raw;
    raw.reserve(cells.size());
    for (const SweepRecord* rec : cells) raw.push_back(rec->delta_hat);
    const std::vector<double> smooth = moving_average(raw, window);

    char name[64];
    std::snprintf(name, sizeof(name), "K%d_d%d.dat", key.first, key.second);
    std::ofstream out(directory / name);
    if (!out) throw ValidationError("cannot open plot file " + std::string(name));
    out << "# K=" << key.first << " d=" << key.second
        << " count=" << cells.front()->count << "\n";
    out << "# T delta_hat smoothed\n";
    for (std::size_t i = 0; i < cells.size(); ++i)
      out << cells[i]->t << " " << format_real(raw[i]) << " "
          << format_real(smooth[i]) << "\n";
  }
}

}  // namespace tcmdp
