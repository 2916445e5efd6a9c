#include <limits>
#include <vector>

#include "doctest.h"
#include "scud/parser/mst.h"
#include "scud/rng.h"

using namespace scud;
using namespace scud::parser;

namespace {

// Exhaustive oracle: enumerate every head assignment, keep single-root
// acyclic ones, return the best total score. n <= 6 keeps this tractable.
struct BruteForce {
  double best = -std::numeric_limits<double>::infinity();
  std::vector<int> best_heads;

  static bool valid_tree(const std::vector<int>& heads) {
    int n = static_cast<int>(heads.size());
    int roots = 0;
    for (int d = 1; d <= n; ++d)
      if (heads[d - 1] == 0) ++roots;
    if (roots != 1) return false;
    for (int d = 1; d <= n; ++d) {
      int cur = d, steps = 0;
      while (cur != 0) {
        cur = heads[cur - 1];
        if (++steps > n) return false;  // cycle
      }
    }
    return true;
  }

  void search(const Eigen::MatrixXd& scores) {
    int n = static_cast<int>(scores.cols());
    std::vector<int> heads(n, 0);
    enumerate(scores, heads, 1, n);
  }

  void enumerate(const Eigen::MatrixXd& scores, std::vector<int>& heads, int d,
                 int n) {
    if (d > n) {
      if (!valid_tree(heads)) return;
      double total = tree_score(scores, heads);
      if (total > best) {
        best = total;
        best_heads = heads;
      }
      return;
    }
    for (int h = 0; h <= n; ++h) {
      if (h == d) continue;
      heads[d - 1] = h;
      enumerate(scores, heads, d + 1, n);
    }
  }
};

Eigen::MatrixXd random_scores(int n, CounterRng& rng, bool integers) {
  Eigen::MatrixXd s(n + 1, n);
  for (int d = 1; d <= n; ++d)
    for (int h = 0; h <= n; ++h)
      s(h, d - 1) = integers ? static_cast<double>(rng.next_int(0, 99))
                             : rng.next_unit() * 10.0 - 5.0;
  for (int d = 1; d <= n; ++d)
    s(d, d - 1) = -std::numeric_limits<double>::infinity();
  return s;
}

}  // namespace

TEST_CASE("n=1: the only head is ROOT") {
  Eigen::MatrixXd s(2, 1);
  s << 3.0, -std::numeric_limits<double>::infinity();
  CHECK(decode_mst(s) == std::vector<int>{0});
}

TEST_CASE("n=2 hand case: chain beats double-root") {
  Eigen::MatrixXd s(3, 2);
  // heads: rows 0..2 (ROOT, tok1, tok2); cols: dependents 1, 2
  s(0, 0) = 10.0;  s(0, 1) = 9.0;
  s(1, 0) = -std::numeric_limits<double>::infinity(); s(1, 1) = 8.0;
  s(2, 0) = 1.0;   s(2, 1) = -std::numeric_limits<double>::infinity();
  // ROOT->1 + 1->2 = 18 beats single-root alternatives (ROOT->2 + 2->1 = 10)
  CHECK(decode_mst(s) == std::vector<int>{0, 1});
}

TEST_CASE("single-root constraint forbids the two-root optimum") {
  Eigen::MatrixXd s(3, 2);
  s(0, 0) = 10.0;  s(0, 1) = 10.0;   // both tokens love ROOT (total 20)
  s(1, 0) = -std::numeric_limits<double>::infinity(); s(1, 1) = 5.0;
  s(2, 0) = 4.0;   s(2, 1) = -std::numeric_limits<double>::infinity();
  std::vector<int> heads = decode_mst(s);
  int roots = 0;
  for (int h : heads)
    if (h == 0) ++roots;
  CHECK(roots == 1);
  CHECK(tree_score(s, heads) == doctest::Approx(15.0));
}

TEST_CASE("decoder matches exhaustive enumeration on random matrices") {
  CounterRng rng(2024, 0);
  for (int trial = 0; trial < 300; ++trial) {
    int n = 2 + static_cast<int>(rng.next_int(0, 4));  // 2..6
    Eigen::MatrixXd s = random_scores(n, rng, false);
    std::vector<int> heads = decode_mst(s);
    REQUIRE(static_cast<int>(heads.size()) == n);
    BruteForce oracle;
    oracle.search(s);
    REQUIRE(BruteForce::valid_tree(heads));
    CHECK(tree_score(s, heads) == doctest::Approx(oracle.best).epsilon(1e-12));
  }
}

TEST_CASE("decoder achieves exact equality on integer-valued scores") {
  CounterRng rng(2025, 0);
  for (int trial = 0; trial < 200; ++trial) {
    int n = 2 + static_cast<int>(rng.next_int(0, 4));
    Eigen::MatrixXd s = random_scores(n, rng, true);
    std::vector<int> heads = decode_mst(s);
    BruteForce oracle;
    oracle.search(s);
    REQUIRE(BruteForce::valid_tree(heads));
    CHECK(tree_score(s, heads) == oracle.best);  // exact: integer sums
  }
}

TEST_CASE("forbidden arcs are never chosen when avoidable") {
  CounterRng rng(2026, 0);
  for (int trial = 0; trial < 50; ++trial) {
    int n = 3 + static_cast<int>(rng.next_int(0, 2));
    Eigen::MatrixXd s = random_scores(n, rng, false);
    // additionally forbid token 1 from heading anything
    for (int d = 2; d <= n; ++d)
      s(1, d - 1) = -std::numeric_limits<double>::infinity();
    std::vector<int> heads = decode_mst(s);
    for (int d = 2; d <= n; ++d) CHECK(heads[d - 1] != 1);
    CHECK(BruteForce::valid_tree(heads));
  }
}
