#include "scud/parser/mst.h"

#include <limits>
#include <stdexcept>

namespace scud::parser {

namespace {

constexpr double kForbidden = -1e18;  // stands in for -inf inside the solver

// Chu-Liu/Edmonds over a dense matrix s(h, d) for nodes 0..m-1 (0 = root).
// Returns head[d] for d >= 1; head[0] is unused.
std::vector<int> chu_liu_edmonds(const Eigen::MatrixXd& s) {
  int m = static_cast<int>(s.rows());
  std::vector<int> best(m, -1);
  for (int d = 1; d < m; ++d) {
    double top = -std::numeric_limits<double>::infinity();
    for (int h = 0; h < m; ++h) {
      if (h == d) continue;
      if (s(h, d) > top) {
        top = s(h, d);
        best[d] = h;
      }
    }
  }

  // Look for a cycle among the greedy picks.
  std::vector<int> color(m, 0);  // 0 unseen, 1 in progress, 2 done
  std::vector<int> cycle;
  color[0] = 2;
  for (int start = 1; start < m && cycle.empty(); ++start) {
    if (color[start] != 0) continue;
    int v = start;
    std::vector<int> path;
    while (v != -1 && color[v] == 0) {
      color[v] = 1;
      path.push_back(v);
      v = best[v];
    }
    if (v != -1 && color[v] == 1) {
      auto it = std::find(path.begin(), path.end(), v);
      cycle.assign(it, path.end());
    }
    for (int p : path) color[p] = 2;
  }
  if (cycle.empty()) return best;

  // Contract the cycle into one supernode (the last index of the new graph).
  std::vector<bool> in_cycle(m, false);
  for (int v : cycle) in_cycle[v] = true;
  std::vector<int> old_of;  // new index -> old index (non-cycle nodes)
  std::vector<int> new_of(m, -1);
  for (int v = 0; v < m; ++v) {
    if (!in_cycle[v]) {
      new_of[v] = static_cast<int>(old_of.size());
      old_of.push_back(v);
    }
  }
  int c = static_cast<int>(old_of.size());  // supernode index
  int m2 = c + 1;

  double cycle_weight = 0.0;
  for (int v : cycle) cycle_weight += s(best[v], v);

  Eigen::MatrixXd s2 =
      Eigen::MatrixXd::Constant(m2, m2, kForbidden * 2);
  std::vector<int> entry(m, -1);  // old head -> cycle node its c-edge enters
  std::vector<int> exit_of(m, -1);  // old dependent -> cycle node heading it
  for (int h = 0; h < m; ++h) {
    for (int d = 1; d < m; ++d) {
      if (h == d) continue;
      if (!in_cycle[h] && !in_cycle[d]) {
        s2(new_of[h], new_of[d]) = s(h, d);
      } else if (!in_cycle[h] && in_cycle[d]) {
        double w = s(h, d) - s(best[d], d) + cycle_weight;
        if (w > s2(new_of[h], c)) {
          s2(new_of[h], c) = w;
          entry[h] = d;
        }
      } else if (in_cycle[h] && !in_cycle[d]) {
        if (s(h, d) > s2(c, new_of[d])) {
          s2(c, new_of[d]) = s(h, d);
          exit_of[d] = h;
        }
      }
    }
  }

  std::vector<int> sub = chu_liu_edmonds(s2);

  std::vector<int> heads(m, -1);
  for (int v : cycle) heads[v] = best[v];
  for (int nd = 1; nd < m2; ++nd) {
    int nh = sub[nd];
    if (nd == c) {
      int h_old = old_of[nh];  // root is never contracted, so nh != c
      int broken = entry[h_old];
      heads[broken] = h_old;
    } else {
      int d_old = old_of[nd];
      heads[d_old] = (nh == c) ? exit_of[d_old] : old_of[nh];
    }
  }
  return heads;
}

Eigen::MatrixXd padded(const Eigen::MatrixXd& scores) {
  int n = static_cast<int>(scores.cols());
  Eigen::MatrixXd s = Eigen::MatrixXd::Constant(n + 1, n + 1, kForbidden);
  for (int d = 1; d <= n; ++d)
    for (int h = 0; h <= n; ++h) {
      double v = scores(h, d - 1);
      s(h, d) = std::isinf(v) && v < 0 ? kForbidden : v;
    }
  return s;
}

}  // namespace

double tree_score(const Eigen::MatrixXd& scores,
                  const std::vector<int>& heads) {
  double total = 0.0;
  for (size_t d = 0; d < heads.size(); ++d)
    total += scores(heads[d], static_cast<int>(d));
  return total;
}

std::vector<int> decode_mst(const Eigen::MatrixXd& scores) {
  int n = static_cast<int>(scores.cols());
  if (n <= 0) return {};
  if (scores.rows() != n + 1)
    throw std::runtime_error("arc score matrix must be (n+1) x n");
  if (n == 1) return {0};

  Eigen::MatrixXd s = padded(scores);
  std::vector<int> heads = chu_liu_edmonds(s);
  int roots = 0;
  for (int d = 1; d <= n; ++d)
    if (heads[d] == 0) ++roots;
  if (roots != 1) {
    // Re-solve once per candidate root with the other root arcs masked.
    double best_total = -std::numeric_limits<double>::infinity();
    std::vector<int> best_heads;
    for (int r = 1; r <= n; ++r) {
      Eigen::MatrixXd sr = s;
      for (int d = 1; d <= n; ++d)
        if (d != r) sr(0, d) = kForbidden;
      std::vector<int> cand = chu_liu_edmonds(sr);
      double total = 0.0;
      for (int d = 1; d <= n; ++d) total += sr(cand[d], d);
      if (total > best_total) {
        best_total = total;
        best_heads = cand;
      }
    }
    heads = best_heads;
  }
  return std::vector<int>(heads.begin() + 1, heads.end());
}

}  // namespace scud::parser
