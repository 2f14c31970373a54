#include "tcmdp/diameter.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

namespace tcmdp {

namespace {

// BFS distances from source; -1 for unreachable.
std::vector<int> bfs_distances(const DirectedGraph& g, int source) {
  std::vector<int> dist(static_cast<std::size_t>(g.num_vertices()), -1);
  std::deque<int> queue;
  dist[static_cast<std::size_t>(source)] = 0;
  queue.push_back(source);
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : g.sorted_neighbors(v)) {
      if (dist[static_cast<std::size_t>(w)] < 0) {
        dist[static_cast<std::size_t>(w)] = dist[static_cast<std::size_t>(v)] + 1;
        queue.push_back(w);
      }
    }
  }
  return dist;
}

DirectedGraph reversed(const DirectedGraph& g) {
  DirectedGraph r(g.num_vertices());
  for (const auto& [i, j] : g.edge_list()) r.add_edge(j, i);
  return r;
}

void require_kernel_homogeneous(const Instance& inst) {
  if (inst.homogeneous_transitions()) return;
  const auto& tables = inst.transition_tables();
  for (std::size_t t = 1; t < tables.size(); ++t)
    if (tables[t] != tables[0])
      throw ValidationError("instance transitions are not time-homogeneous");
}

}  // namespace

DirectedGraph::DirectedGraph(int n) : n_(n), adj_(static_cast<std::size_t>(n)) {
  if (n < 1) throw ValidationError("graph must have at least one vertex");
}

void DirectedGraph::add_edge(int i, int j) {
  if (i < 0 || i >= n_ || j < 0 || j >= n_)
    throw ValidationError("edge endpoint out of range");
  adj_[static_cast<std::size_t>(i)].insert(j);
}

std::vector<int> DirectedGraph::sorted_neighbors(int i) const {
  std::vector<int> out(adj_[static_cast<std::size_t>(i)].begin(),
                       adj_[static_cast<std::size_t>(i)].end());
  std::sort(out.begin(), out.end());
  return out;
}

bool DirectedGraph::has_self_loop() const {
  for (int i = 0; i < n_; ++i)
    if (has_edge(i, i)) return true;
  return false;
}

std::size_t DirectedGraph::num_edges() const {
  std::size_t count = 0;
  for (const auto& set : adj_) count += set.size();
  return count;
}

std::vector<std::pair<int, int>> DirectedGraph::edge_list() const {
  std::vector<std::pair<int, int>> edges;
  edges.reserve(num_edges());
  for (int i = 0; i < n_; ++i)
    for (int j : sorted_neighbors(i)) edges.emplace_back(i, j);
  return edges;
}

bool strongly_connected(const DirectedGraph& g) {
  const auto forward = bfs_distances(g, 0);
  if (std::find(forward.begin(), forward.end(), -1) != forward.end())
    return false;
  const auto backward = bfs_distances(reversed(g), 0);
  return std::find(backward.begin(), backward.end(), -1) == backward.end();
}

int classic_diameter(const DirectedGraph& g) {
  if (!strongly_connected(g))
    throw ValidationError("graph is not strongly connected");
  int diameter = 0;
  for (int v = 0; v < g.num_vertices(); ++v) {
    const auto dist = bfs_distances(g, v);
    for (int w = 0; w < g.num_vertices(); ++w)
      if (w != v) diameter = std::max(diameter, dist[static_cast<std::size_t>(w)]);
  }
  return diameter;
}

DiameterReport tau0_bounds_dgt(const DirectedGraph& g) {
  DiameterReport report;
  report.strongly_connected = strongly_connected(g);
  report.has_self_loop = g.has_self_loop();
  if (!report.strongly_connected)
    throw ValidationError("graph is not strongly connected");
  if (!report.has_self_loop)
    throw ValidationError("graph has no self-loop");
  report.d_c = classic_diameter(g);
  report.tau0_lower = report.d_c;
  report.tau0_upper = 2 * report.d_c;
  return report;
}

double sgt_epsilon_threshold(int tau0, double xi) {
  if (tau0 < 0) throw ValidationError("tau0 must be >= 0");
  if (xi < 0.0 || xi >= 1.0) throw ValidationError("xi must lie in [0, 1)");
  return 1.0 - std::pow(1.0 - xi, static_cast<double>(tau0));
}

double sgt_f(double d_c, double xi) {
  if (d_c < 0.0) throw ValidationError("d_c must be >= 0");
  if (xi < 0.0 || xi >= 0.5)
    throw ValidationError("xi must lie in [0, 1/2); the factor is singular at 1/2");
  if (xi == 0.0) return 0.0;
  const double one_minus_2xi = 1.0 - 2.0 * xi;
  return 4.0 * xi * (1.0 - xi) / (one_minus_2xi * one_minus_2xi) *
         (2.0 + std::sqrt(4.0 + one_minus_2xi * d_c / (xi * (1.0 - xi))));
}

double sgt_tau_eps_bound(int d_c, double xi, double eps) {
  if (d_c < 0) throw ValidationError("d_c must be >= 0");
  if (xi < 0.0 || xi >= 0.5)
    throw ValidationError("xi must lie in [0, 1/2); the bound is singular at 1/2");
  if (xi == 0.0) return static_cast<double>(d_c);
  if (eps <= 0.0 || eps > 1.0) throw ValidationError("eps must lie in (0, 1]");
  return static_cast<double>(d_c) / (1.0 - 2.0 * xi) +
         sgt_f(static_cast<double>(d_c), xi) / eps;
}

double theorem1_bound(double r_max, double tau_eps, double eps) {
  if (!(r_max > 0.0)) throw ValidationError("r_max must be > 0");
  if (tau_eps < 0.0) throw ValidationError("tau_eps must be >= 0");
  if (eps < 0.0 || eps >= 1.0) throw ValidationError("eps must lie in [0, 1)");
  return r_max * tau_eps / (1.0 - eps);
}

DirectedGraph support_graph(const Instance& inst) {
  require_kernel_homogeneous(inst);
  const int S = inst.num_states();
  const int A = inst.num_actions();
  DirectedGraph g(S);
  for (int s = 0; s < S; ++s)
    for (int a = 0; a < A; ++a) {
      const double* row = inst.kernel_row(0, a, s);
      for (int j = 0; j < S; ++j)
        if (row[j] > 0.0) g.add_edge(s, j);
    }
  return g;
}

double d_star(const Instance& inst) {
  require_kernel_homogeneous(inst);
  const int S = inst.num_states();
  const int A = inst.num_actions();
  if (S < 2) throw ValidationError("d_star needs at least two states");

  const DirectedGraph support = support_graph(inst);
  for (int v = 0; v < S; ++v) {
    const auto dist = bfs_distances(support, v);
    for (int w = 0; w < S; ++w)
      if (dist[static_cast<std::size_t>(w)] < 0)
        throw ValidationError("states " + std::to_string(v) + " and " +
                              std::to_string(w) +
                              " do not communicate under any policy");
  }

  constexpr long kMaxSweeps = 1000000;
  const double divergence_cap = static_cast<double>(S) * 1e6;
  double overall = 0.0;

  std::vector<double> h(static_cast<std::size_t>(S));
  std::vector<double> h_next(static_cast<std::size_t>(S));
  for (int target = 0; target < S; ++target) {
    std::fill(h.begin(), h.end(), 0.0);
    bool converged = false;
    for (long sweep = 0; sweep < kMaxSweeps; ++sweep) {
      double max_change = 0.0;
      double max_value = 0.0;
      for (int s = 0; s < S; ++s) {
        if (s == target) {
          h_next[static_cast<std::size_t>(s)] = 0.0;
          continue;
        }
        double best = std::numeric_limits<double>::infinity();
        for (int a = 0; a < A; ++a) {
          const double* row = inst.kernel_row(0, a, s);
          double expect = 0.0;
          for (int j = 0; j < S; ++j)
            if (j != target) expect += row[j] * h[static_cast<std::size_t>(j)];
          best = std::min(best, 1.0 + expect);
        }
        h_next[static_cast<std::size_t>(s)] = best;
        max_change =
            std::max(max_change, std::abs(best - h[static_cast<std::size_t>(s)]));
        max_value = std::max(max_value, best);
      }
      std::swap(h, h_next);
      if (max_value > divergence_cap)
        throw NumericalError(
            "expected hitting time diverged; some pair communicates only "
            "with vanishing probability");
      if (max_change <= 1e-9) {
        converged = true;
        break;
      }
    }
    if (!converged)
      throw NumericalError("hitting-time value iteration did not converge");
    for (int s = 0; s < S; ++s)
      if (s != target) overall = std::max(overall, h[static_cast<std::size_t>(s)]);
  }
  return overall;
}

}  // namespace tcmdp
