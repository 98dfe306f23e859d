#include "dchoice/feasibility.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

#include "dchoice/errors.hpp"

namespace dchoice {

namespace {

// Dinic on real capacities.
class MaxFlow {
 public:
  explicit MaxFlow(int n_vertices, double eps) : graph_(n_vertices), eps_(eps) {}

  int add_edge(int from, int to, double cap) {
    int id = static_cast<int>(to_.size());
    graph_[from].push_back(id);
    to_.push_back(to);
    cap_.push_back(cap);
    graph_[to].push_back(id + 1);
    to_.push_back(from);
    cap_.push_back(0.0);
    return id;
  }

  double flow_on(int edge_id) const { return cap_[edge_id ^ 1]; }

  double run(int s, int t) {
    double total = 0.0;
    while (bfs(s, t)) {
      iter_.assign(graph_.size(), 0);
      double f;
      while ((f = dfs(s, t, std::numeric_limits<double>::infinity())) > eps_) total += f;
    }
    return total;
  }

  // Vertices reachable from s in the residual graph (min-cut source side).
  std::vector<char> reachable(int s) const {
    std::vector<char> seen(graph_.size(), 0);
    std::queue<int> q;
    q.push(s);
    seen[s] = 1;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int id : graph_[v])
        if (cap_[id] > eps_ && !seen[to_[id]]) {
          seen[to_[id]] = 1;
          q.push(to_[id]);
        }
    }
    return seen;
  }

 private:
  bool bfs(int s, int t) {
    level_.assign(graph_.size(), -1);
    std::queue<int> q;
    q.push(s);
    level_[s] = 0;
    while (!q.empty()) {
      int v = q.front();
      q.pop();
      for (int id : graph_[v])
        if (cap_[id] > eps_ && level_[to_[id]] < 0) {
          level_[to_[id]] = level_[v] + 1;
          q.push(to_[id]);
        }
    }
    return level_[t] >= 0;
  }

  double dfs(int v, int t, double f) {
    if (v == t) return f;
    for (std::size_t& i = iter_[v]; i < graph_[v].size(); ++i) {
      int id = graph_[v][i];
      int u = to_[id];
      if (cap_[id] > eps_ && level_[u] == level_[v] + 1) {
        double got = dfs(u, t, std::min(f, cap_[id]));
        if (got > eps_) {
          cap_[id] -= got;
          cap_[id ^ 1] += got;
          return got;
        }
      }
    }
    return 0.0;
  }

  std::vector<std::vector<int>> graph_;
  std::vector<int> to_;
  std::vector<double> cap_;
  std::vector<int> level_;
  std::vector<std::size_t> iter_;
  double eps_;
};

}  // namespace

FeasibilityVerdict check_flow(const StorageAllocation& alloc,
                              const std::vector<double>& rho, double m) {
  unsigned k = alloc.n_objects();
  unsigned n = alloc.n_nodes();
  if (rho.size() != k) throw LengthMismatch("demand vector length != number of objects");
  if (!(m > 0)) throw NonpositiveThreshold("threshold m must be positive");

  double sum_rho = 0.0;
  for (double r : rho) {
    if (!(r >= 0) || !std::isfinite(r)) throw LengthMismatch("demands must be finite and >= 0");
    sum_rho += r;
  }
  const double eps = 1e-12 * std::max(1.0, sum_rho);
  const int source = 0, sink = 1 + k + n;
  MaxFlow mf(k + n + 2, eps);
  std::vector<std::vector<int>> obj_edges(k);
  for (unsigned i = 0; i < k; ++i) {
    if (rho[i] <= 0.0) continue;
    mf.add_edge(source, 1 + i, rho[i]);
    for (unsigned node : alloc.choices(i))
      obj_edges[i].push_back(
          mf.add_edge(1 + i, 1 + k + node, std::numeric_limits<double>::infinity()));
  }
  for (unsigned node = 0; node < n; ++node) mf.add_edge(1 + k + node, sink, m);

  FeasibilityVerdict verdict;
  verdict.max_served = mf.run(source, sink);
  // Non-strict region boundary: absolute slack so saturating vectors count
  // as feasible.
  verdict.feasible = verdict.max_served >= sum_rho - (1e-9 * sum_rho + 1e-12);
  if (verdict.feasible) {
    for (unsigned i = 0; i < k; ++i) {
      const auto& ch = alloc.choices(i);
      for (std::size_t j = 0; j < obj_edges[i].size(); ++j) {
        double f = mf.flow_on(obj_edges[i][j]);
        if (f > eps) verdict.flow.push_back({i, ch[j], f});
      }
    }
  } else {
    auto seen = mf.reachable(source);
    for (unsigned i = 0; i < k; ++i)
      if (seen[1 + i]) verdict.violating_subset.push_back(i);
    double demand = 0.0;
    for (unsigned i : verdict.violating_subset) demand += rho[i];
    if (!verdict.violating_subset.empty())
      verdict.demand_excess = demand - m * span(alloc, verdict.violating_subset);
  }
  return verdict;
}

FeasibilityVerdict check_subsets(const StorageAllocation& alloc,
                                 const std::vector<double>& rho, double m) {
  unsigned k = alloc.n_objects();
  if (rho.size() != k) throw LengthMismatch("demand vector length != number of objects");
  if (!(m > 0)) throw NonpositiveThreshold("threshold m must be positive");
  if (k > 22) throw TooLarge("check_subsets enumerates 2^k subsets; k <= 22 required");

  std::vector<unsigned> cover(alloc.n_nodes(), 0);
  std::vector<unsigned> selected;
  unsigned covered = 0;
  double selected_demand = 0.0;
  FeasibilityVerdict verdict;
  verdict.feasible = true;

  // DFS over subsets, maintaining span and demand incrementally.
  auto rec = [&](auto&& self, unsigned next) -> bool {
    for (unsigned i = next; i < k; ++i) {
      unsigned added = 0;
      for (unsigned node : alloc.choices(i))
        if (cover[node]++ == 0) ++added;
      covered += added;
      selected_demand += rho[i];
      selected.push_back(i);
      if (selected_demand > m * covered + 1e-9 * selected_demand + 1e-12) {
        verdict.feasible = false;
        verdict.violating_subset = selected;
        verdict.demand_excess = selected_demand - m * covered;
        return true;
      }
      if (self(self, i + 1)) return true;
      selected.pop_back();
      selected_demand -= rho[i];
      covered -= added;
      for (unsigned node : alloc.choices(i))
        --cover[node];
    }
    return false;
  };
  rec(rec, 0);
  double sum_rho = 0.0;
  for (double r : rho) sum_rho += r;
  verdict.max_served = verdict.feasible ? sum_rho : sum_rho - verdict.demand_excess;
  return verdict;
}

double min_threshold(const StorageAllocation& alloc, const std::vector<double>& rho) {
  double sum_rho = 0.0;
  for (double r : rho) sum_rho += r;
  if (sum_rho <= 0.0) return 0.0;
  double lo = 0.0, hi = sum_rho;  // m = sum(rho) is always feasible
  while (hi - lo > 1e-6) {
    double mid = 0.5 * (lo + hi);
    if (check_flow(alloc, rho, mid).feasible)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

}  // namespace dchoice
