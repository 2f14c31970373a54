#pragma once

#include <unordered_set>
#include <utility>
#include <vector>

#include "tcmdp/mdp.hpp"

namespace tcmdp {

/// Directed graph on vertices 0..n-1 with adjacency sets; self-loops allowed.
class DirectedGraph {
 public:
  explicit DirectedGraph(int n);

  int num_vertices() const { return n_; }
  void add_edge(int i, int j);
  bool has_edge(int i, int j) const {
    return adj_[static_cast<std::size_t>(i)].count(j) > 0;
  }
  int out_degree(int i) const {
    return static_cast<int>(adj_[static_cast<std::size_t>(i)].size());
  }
  /// Out-neighbors of i in ascending order.
  std::vector<int> sorted_neighbors(int i) const;
  bool has_self_loop() const;
  std::size_t num_edges() const;
  /// All edges sorted lexicographically.
  std::vector<std::pair<int, int>> edge_list() const;

 private:
  int n_;
  std::vector<std::unordered_set<int>> adj_;
};

bool strongly_connected(const DirectedGraph& g);

/// Max over ordered vertex pairs of the BFS shortest-path length.
/// Throws ValidationError if the graph is not strongly connected.
int classic_diameter(const DirectedGraph& g);

struct DiameterReport {
  int d_c = 0;
  int tau0_lower = 0;  // = d_c
  int tau0_upper = 0;  // = 2 * d_c
  bool strongly_connected = false;
  bool has_self_loop = false;
};

/// Sandwich on the zero-noise traversal diameter of the graph-traversal
/// instance of g: [d_c, 2*d_c]. Requires g strongly connected with at least
/// one self-loop; the failed condition is named otherwise.
DiameterReport tau0_bounds_dgt(const DirectedGraph& g);

/// Smallest total-variation allowance for which noise level xi certifies
/// tau_eps <= tau0: returns 1 - (1-xi)^tau0.
double sgt_epsilon_threshold(int tau0, double xi);

/// Additive factor of the noisy-traversal diameter bound:
/// 4*xi*(1-xi)/(1-2xi)^2 * (2 + sqrt(4 + (1-2xi)*d_c/(xi*(1-xi)))).
/// Zero in the xi -> 0 limit. Requires 0 <= xi < 1/2.
double sgt_f(double d_c, double xi);

/// Diameter bound d_c/(1-2xi) + f(d_c,xi)/eps for noisy traversal instances
/// whose graph is undirected with a noiseless self-loop at every vertex.
/// At xi = 0 returns d_c exactly. Requires xi in [0, 1/2), eps in (0, 1].
double sgt_tau_eps_bound(int d_c, double xi, double eps);

/// Horizon-independent regret bound r_max * tau_eps / (1 - eps). The caller
/// is responsible for tau_eps being a valid eps-diameter bound no larger
/// than half the horizon; that hypothesis is not machine-checkable here.
double theorem1_bound(double r_max, double tau_eps, double eps);

/// Support graph of a time-homogeneous instance: edge i -> j when some
/// action moves i to j with positive probability.
DirectedGraph support_graph(const Instance& inst);

/// Max over ordered state pairs (s, s') of the optimal expected hitting time
/// of s' from s. Computed by value iteration on the stochastic-shortest-path
/// fixed point h(s) = 1 + min_a sum_j P[a][s][j] h(j), h(s') = 0, converged
/// to 1e-9. Requires a time-homogeneous instance in which every ordered pair
/// communicates; divergence is reported as NumericalError.
double d_star(const Instance& inst);

}  // namespace tcmdp
