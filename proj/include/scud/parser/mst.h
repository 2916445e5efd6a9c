// Maximum spanning arborescence decoding with a single-root constraint.
#pragma once

#include <vector>

#include <Eigen/Core>

namespace scud::parser {

// scores: (n+1) x n; scores(h, d-1) = score of head position h governing
// dependent d; -inf entries are forbidden arcs. Returns heads[d-1] in 0..n
// for the maximum-total-score arborescence rooted at 0 with exactly one
// child of the root (Chu-Liu/Edmonds; the best root is selected and other
// root arcs masked when the unconstrained optimum is multi-rooted).
std::vector<int> decode_mst(const Eigen::MatrixXd& scores);

// Total score of a head assignment under `scores`, summed in dependent order.
double tree_score(const Eigen::MatrixXd& scores, const std::vector<int>& heads);

}  // namespace scud::parser
