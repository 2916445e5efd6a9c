#include <cmath>

#include "doctest.h"
#include "scud/parser/embeddings.h"
#include "scud/parser/network.h"
#include "scud/rng.h"

using namespace scud;
using namespace scud::parser;

namespace {

ParserConfig tiny_config(int layers, bool gold_pos) {
  ParserConfig cfg;
  cfg.embed_dim = 4;
  cfg.pos_embed_dim = 3;
  cfg.hidden_size = 4;
  cfg.arc_size = 4;
  cfg.label_size = 4;
  cfg.layers = layers;
  cfg.dropout = 0.0;
  cfg.word_dropout = 0.0;
  cfg.seed = 123;
  cfg.use_gold_pos = gold_pos;
  return cfg;
}

// Randomize every block so no path is degenerate (the default biaffine
// zero-init would hide sensitivity to upstream parameters).
template <typename T>
void randomize(Network<T>& net, uint64_t seed) {
  CounterRng rng(seed, 77);
  for (auto& b : net.params().blocks())
    for (Eigen::Index j = 0; j < b.block->cols(); ++j)
      for (Eigen::Index i = 0; i < b.block->rows(); ++i)
        (*b.block)(i, j) = static_cast<T>(rng.next_gaussian() * 0.3);
}

std::vector<TrainExample> tiny_batch(bool gold_pos) {
  // Two sentences, n = 3 and n = 2.
  TrainExample a;
  a.word_rows = {0, 2, 3, 4};
  a.gold_head = {2, 0, 2};
  a.gold_label = {0, 1, 2};
  TrainExample b;
  b.word_rows = {0, 4, 2};
  b.gold_head = {2, 0};
  b.gold_label = {2, 1};
  if (gold_pos) {
    a.pos_rows = {0, 3, 5, 7};
    b.pos_rows = {0, 7, 3};
  }
  return {a, b};
}

// Central-difference gradient check over every block entry.
double max_relative_error(int layers, bool gold_pos, uint64_t seed) {
  Network<double> net(tiny_config(layers, gold_pos), 6, 3);
  randomize(net, seed);
  auto batch = tiny_batch(gold_pos);

  net.zero_grads();
  net.forward_backward(batch, nullptr);

  const double step = 1e-5;
  double worst = 0.0;
  auto params = net.params().blocks();
  auto grads = net.grads().blocks();
  for (size_t k = 0; k < params.size(); ++k) {
    for (Eigen::Index j = 0; j < params[k].block->cols(); ++j) {
      for (Eigen::Index i = 0; i < params[k].block->rows(); ++i) {
        double saved = (*params[k].block)(i, j);
        (*params[k].block)(i, j) = saved + step;
        double up = net.loss(batch).total;
        (*params[k].block)(i, j) = saved - step;
        double down = net.loss(batch).total;
        (*params[k].block)(i, j) = saved;
        double numeric = (up - down) / (2.0 * step);
        double analytic = (*grads[k].block)(i, j);
        // Floor keeps the metric meaningful for near-zero entries: below
        // 1e-4 magnitude this becomes an absolute bound of 1e-8, well
        // under FD noise for a real mismatch.
        double denom = std::max(1e-4, std::abs(numeric) + std::abs(analytic));
        worst = std::max(worst, std::abs(numeric - analytic) / denom);
      }
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("gradients match central finite differences (1 layer)") {
  CHECK(max_relative_error(1, false, 501) < 1e-4);
}

TEST_CASE("gradients match central finite differences (2 layers)") {
  CHECK(max_relative_error(2, false, 502) < 1e-4);
}

TEST_CASE("gradients match central finite differences (gold POS features)") {
  CHECK(max_relative_error(2, true, 503) < 1e-4);
}

TEST_CASE("initial loss is ln(n+1) per token with a single label") {
  // Zero-initialized biaffine tensors make the initial logits exactly zero,
  // so the arc loss is exactly ln(n+1) per token and the label loss ln(1)=0.
  ParserConfig cfg = tiny_config(2, false);
  cfg.embed_dim = 8;
  cfg.hidden_size = 8;
  Network<float> net(cfg, 10, 1);
  net.init_params(cfg.seed);
  for (int n : {1, 2, 4, 7}) {
    TrainExample ex;
    ex.word_rows.assign(n + 1, 2);
    ex.word_rows[0] = 0;
    ex.gold_head.assign(n, 0);
    for (int d = 2; d <= n; ++d) ex.gold_head[d - 1] = 1;
    ex.gold_label.assign(n, 0);
    LossStats stats = net.loss({ex});
    double per_token = stats.total / static_cast<double>(stats.tokens);
    CHECK(per_token == doctest::Approx(std::log(n + 1.0)).epsilon(0.10));
    CHECK(stats.label == doctest::Approx(0.0));
  }
}

TEST_CASE("score shapes and the -inf diagonal sentinel") {
  Network<float> net(tiny_config(1, false), 6, 3);
  net.init_params(9);
  TrainExample ex;
  ex.word_rows = {0, 2};
  SentenceScores s = net.score(ex);
  REQUIRE(s.arc.rows() == 2);
  REQUIRE(s.arc.cols() == 1);
  CHECK(std::isfinite(s.arc(0, 0)));
  CHECK(std::isinf(s.arc(1, 0)));
  REQUIRE(s.labels.size() == 3);
  CHECK(s.labels[0].rows() == 2);
  CHECK(s.labels[0].cols() == 1);

  TrainExample three;
  three.word_rows = {0, 2, 3, 4};
  SentenceScores t = net.score(three);
  REQUIRE(t.arc.rows() == 4);
  REQUIRE(t.arc.cols() == 3);
  for (int d = 1; d <= 3; ++d)
    for (int h = 0; h <= 3; ++h) {
      if (h == d)
        CHECK(std::isinf(t.arc(h, d - 1)));
      else
        CHECK(std::isfinite(t.arc(h, d - 1)));
    }
}

TEST_CASE("scores are independent of batch composition and repeatable") {
  Network<float> net(tiny_config(2, false), 6, 3);
  randomize(net, 777);
  TrainExample a, b;
  a.word_rows = {0, 2, 3};
  b.word_rows = {0, 4, 5, 3};
  SentenceScores first = net.score(a);
  net.score(b);  // interleave another sentence
  SentenceScores second = net.score(a);
  CHECK(first.arc.topRows(1) == second.arc.topRows(1));
  CHECK(first.arc(0, 0) == second.arc(0, 0));
  for (size_t r = 0; r < first.labels.size(); ++r)
    CHECK(first.labels[r] == second.labels[r]);
}

TEST_CASE("every parameter block influences the scores") {
  Network<float> net(tiny_config(1, false), 6, 3);
  randomize(net, 31337);
  TrainExample ex;
  ex.word_rows = {0, 2, 3};
  SentenceScores base = net.score(ex);
  for (auto& b : net.params().blocks()) {
    if (b.name == "embed.word") {
      // only rows used by the example feed the forward pass
      float saved = (*b.block)(2, 0);
      (*b.block)(2, 0) += 0.5f;
      SentenceScores bumped = net.score(ex);
      CHECK(bumped.arc(0, 0) != base.arc(0, 0));
      (*b.block)(2, 0) = saved;
      continue;
    }
    float saved = (*b.block)(0, 0);
    (*b.block)(0, 0) += 0.5f;
    SentenceScores bumped = net.score(ex);
    bool arc_changed = bumped.arc(0, 0) != base.arc(0, 0) ||
                       bumped.arc(0, 1) != base.arc(0, 1) ||
                       bumped.arc(2, 0) != base.arc(2, 0);
    bool label_changed = false;
    for (size_t r = 0; r < base.labels.size(); ++r)
      if (bumped.labels[r] != base.labels[r]) label_changed = true;
    bool influences_scores = arc_changed || label_changed;
    CHECK_MESSAGE(influences_scores, "block ", b.name);
    (*b.block)(0, 0) = saved;
  }
}

TEST_CASE("embedding loader: counts, fallbacks and the <unk> mean") {
  EmbeddingTable t = parse_embeddings("dogs 1 2 3\nCats 4 5 6\n", 3);
  CHECK(t.size() == 4);  // 2 words + <root> + <unk>
  CHECK(t.dim == 3);
  CHECK(t.matrix.row(kRootRow).isZero());
  // <unk> is the element-wise mean of the loaded rows
  CHECK(t.matrix(kUnkRow, 0) == doctest::Approx(2.5));
  CHECK(t.matrix(kUnkRow, 1) == doctest::Approx(3.5));
  CHECK(t.matrix(kUnkRow, 2) == doctest::Approx(4.5));
  // lookup: exact -> lowercase -> <unk>
  CHECK(t.lookup("dogs") == 2);
  CHECK(t.lookup("Dogs") == 2);
  CHECK(t.lookup("Cats") == 3);
  CHECK(t.lookup("zebra") == kUnkRow);

  CHECK_THROWS_WITH_AS(parse_embeddings("dogs 1 2\n", 3),
                       doctest::Contains("line 1"), std::runtime_error);
  CHECK_THROWS_AS(parse_embeddings("a 1 2 3\nb 1 2 3 4\n", 3),
                  std::runtime_error);
}
