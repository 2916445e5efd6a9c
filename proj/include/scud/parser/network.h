// Graph-based biaffine parser network: word (and optional POS) embeddings, a
// stacked bidirectional LSTM encoder, tanh MLP projections, and biaffine arc
// and label scorers, with analytic gradients for the whole stack.
//
// Templated on the scalar so training/inference run in float and gradient
// checking runs in double.
#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "scud/parser/config.h"
#include "scud/rng.h"

namespace scud::parser {

template <typename T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;

// One sentence prepared for the network. Position 0 is the virtual ROOT;
// positions 1..n are surface tokens. gold vectors are empty at inference.
struct TrainExample {
  std::vector<int> word_rows;   // size n+1, [0] = <root> row
  std::vector<int> pos_rows;    // size n+1 when POS features are enabled
  std::vector<int> gold_head;   // size n, head position in 0..n
  std::vector<int> gold_label;  // size n, label index

  int n() const { return static_cast<int>(word_rows.size()) - 1; }
};

struct LossStats {
  double total = 0.0;
  double arc = 0.0;
  double label = 0.0;
  size_t tokens = 0;
};

// Inference-time scores. arc(h, d-1) = score of head position h governing
// dependent d; self-arcs carry a -inf sentinel. labels[r](h, d-1) likewise.
struct SentenceScores {
  Eigen::MatrixXd arc;
  std::vector<Eigen::MatrixXd> labels;

  double label_score(int head, int dep, int relation) const {
    return labels[relation](head, dep - 1);
  }
};

inline constexpr int kPosVocabSize = 19;  // 17 UPOS + <root> + <unk>
int pos_row(const std::string& upos);

template <typename T>
struct LstmDirection {
  Mat<T> w_ih;  // 4H x in
  Mat<T> w_hh;  // 4H x H
  Mat<T> bias;  // 4H x 1
};

template <typename T>
struct NetParams {
  Mat<T> embed_word;                      // |V| x D
  Mat<T> embed_pos;                       // 19 x P, empty unless POS enabled
  std::vector<LstmDirection<T>> lstm_fw;  // per layer
  std::vector<LstmDirection<T>> lstm_bw;
  Mat<T> arc_head_w, arc_head_b;          // A x 2H, A x 1
  Mat<T> arc_dep_w, arc_dep_b;
  Mat<T> lab_head_w, lab_head_b;          // B x 2H, B x 1
  Mat<T> lab_dep_w, lab_dep_b;
  Mat<T> arc_bilinear;                    // (A+1) x A
  Mat<T> label_bilinear;                  // |R|*(B+1) x (B+1)

  struct BlockRef {
    std::string name;
    Mat<T>* block;
  };
  struct ConstBlockRef {
    std::string name;
    const Mat<T>* block;
  };

  std::vector<ConstBlockRef> blocks() const {
    auto mutable_blocks = const_cast<NetParams*>(this)->blocks();
    std::vector<ConstBlockRef> out;
    out.reserve(mutable_blocks.size());
    for (auto& b : mutable_blocks) out.push_back({b.name, b.block});
    return out;
  }

  // Stable block order; checkpoints and the optimizer rely on it.
  std::vector<BlockRef> blocks() {
    std::vector<BlockRef> out;
    out.push_back({"embed.word", &embed_word});
    if (embed_pos.size() > 0) out.push_back({"embed.pos", &embed_pos});
    for (size_t l = 0; l < lstm_fw.size(); ++l) {
      std::string p = "lstm" + std::to_string(l);
      out.push_back({p + ".fw.w_ih", &lstm_fw[l].w_ih});
      out.push_back({p + ".fw.w_hh", &lstm_fw[l].w_hh});
      out.push_back({p + ".fw.bias", &lstm_fw[l].bias});
      out.push_back({p + ".bw.w_ih", &lstm_bw[l].w_ih});
      out.push_back({p + ".bw.w_hh", &lstm_bw[l].w_hh});
      out.push_back({p + ".bw.bias", &lstm_bw[l].bias});
    }
    out.push_back({"mlp.arc_head.w", &arc_head_w});
    out.push_back({"mlp.arc_head.b", &arc_head_b});
    out.push_back({"mlp.arc_dep.w", &arc_dep_w});
    out.push_back({"mlp.arc_dep.b", &arc_dep_b});
    out.push_back({"mlp.lab_head.w", &lab_head_w});
    out.push_back({"mlp.lab_head.b", &lab_head_b});
    out.push_back({"mlp.lab_dep.w", &lab_dep_w});
    out.push_back({"mlp.lab_dep.b", &lab_dep_b});
    out.push_back({"biaffine.arc", &arc_bilinear});
    out.push_back({"biaffine.label", &label_bilinear});
    return out;
  }

  void set_zero() {
    for (auto& b : blocks()) b.block->setZero();
  }
};

template <typename T>
class Network {
 public:
  Network(const ParserConfig& cfg, int vocab_size, int n_labels)
      : cfg_(cfg), vocab_size_(vocab_size), n_labels_(n_labels) {
    cfg_.check();
    if (n_labels_ <= 0) throw std::runtime_error("network needs labels");
    if (vocab_size_ < 2) throw std::runtime_error("network needs a vocabulary");
    input_dim_ = cfg_.embed_dim + (cfg_.use_gold_pos ? cfg_.pos_embed_dim : 0);
    resize(params_);
    resize(grads_);
    grads_.set_zero();
  }

  const ParserConfig& config() const { return cfg_; }
  int vocab_size() const { return vocab_size_; }
  int n_labels() const { return n_labels_; }
  NetParams<T>& params() { return params_; }
  const NetParams<T>& params() const { return params_; }
  NetParams<T>& grads() { return grads_; }
  void zero_grads() { grads_.set_zero(); }

  // Seeded initialization: scaled-uniform weights, forget-gate bias 1, zero
  // biaffine tensors (so initial logits are exactly zero).
  void init_params(uint64_t seed) {
    CounterRng rng(seed, 0x1A17);
    auto uniform = [&rng](Mat<T>& m, double scale) {
      for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
          m(i, j) = static_cast<T>((rng.next_unit() * 2.0 - 1.0) * scale);
    };
    int h = cfg_.hidden_size;
    uniform(params_.embed_word,
            1.0 / std::sqrt(static_cast<double>(cfg_.embed_dim)));
    if (params_.embed_pos.size() > 0)
      uniform(params_.embed_pos,
              1.0 / std::sqrt(static_cast<double>(cfg_.pos_embed_dim)));
    for (int l = 0; l < cfg_.layers; ++l) {
      for (auto* dir : {&params_.lstm_fw[l], &params_.lstm_bw[l]}) {
        uniform(dir->w_ih, 1.0 / std::sqrt(static_cast<double>(dir->w_ih.cols())));
        uniform(dir->w_hh, 1.0 / std::sqrt(static_cast<double>(h)));
        dir->bias.setZero();
        dir->bias.block(h, 0, h, 1).setOnes();  // forget gate
      }
    }
    for (Mat<T>* w : {&params_.arc_head_w, &params_.arc_dep_w,
                      &params_.lab_head_w, &params_.lab_dep_w})
      uniform(*w, 1.0 / std::sqrt(static_cast<double>(2 * h)));
    params_.arc_head_b.setZero();
    params_.arc_dep_b.setZero();
    params_.lab_head_b.setZero();
    params_.lab_dep_b.setZero();
    params_.arc_bilinear.setZero();
    params_.label_bilinear.setZero();
  }

  void set_embeddings(const Eigen::MatrixXf& table) {
    if (table.rows() != vocab_size_ || table.cols() != cfg_.embed_dim)
      throw std::runtime_error("embedding table shape mismatch");
    params_.embed_word = table.template cast<T>();
  }

  // Forward + backward over a batch; gradients accumulate into grads().
  // dropout_rng == nullptr disables dropout (gradient checks).
  LossStats forward_backward(const std::vector<TrainExample>& batch,
                             CounterRng* dropout_rng) {
    LossStats stats;
    for (const auto& ex : batch) {
      Cache cache;
      run_forward(ex, dropout_rng, cache);
      accumulate_loss(ex, cache, stats, &cache.d_arc_logits, &cache.d_lab_head,
                      &cache.d_lab_dep);
      backprop(ex, cache);
    }
    return stats;
  }

  // Loss without gradients or dropout.
  LossStats loss(const std::vector<TrainExample>& batch) const {
    LossStats stats;
    for (const auto& ex : batch) {
      Cache cache;
      run_forward(ex, nullptr, cache);
      // The no-gradient path never touches mutable state.
      const_cast<Network*>(this)->accumulate_loss(ex, cache, stats, nullptr,
                                                  nullptr, nullptr);
    }
    return stats;
  }

  // Deterministic inference scores (dropout off, -inf self-arc sentinels).
  SentenceScores score(const TrainExample& ex) const {
    Cache cache;
    run_forward(ex, nullptr, cache);
    int n = ex.n();
    SentenceScores out;
    out.arc = cache.arc_logits.template cast<double>();
    for (int d = 1; d <= n; ++d)
      out.arc(d, d - 1) = -std::numeric_limits<double>::infinity();

    int bp = cfg_.label_size + 1;
    Mat<T> head_b = with_ones_row(cache.lab_head);
    Mat<T> dep_b = with_ones_row(cache.lab_dep);
    out.labels.resize(n_labels_);
    for (int r = 0; r < n_labels_; ++r) {
      Mat<T> m = head_b.transpose() *
                 params_.label_bilinear.block(r * bp, 0, bp, bp);
      out.labels[r] = (m * dep_b.rightCols(n)).template cast<double>();
    }
    return out;
  }

 private:
  struct DirCache {
    Mat<T> i, f, g, o, c, tc, h;  // H x T
  };
  struct LayerCache {
    Mat<T> in;   // input consumed by both directions (in_dim x T)
    DirCache fw, bw;
    Mat<T> mask;  // dropout mask applied to this layer's output
  };
  struct Cache {
    Mat<T> x_raw;  // input_dim x T before dropout
    Mat<T> x_mask;
    std::vector<LayerCache> layers;
    Mat<T> enc;  // final masked encoder output (2H x T)
    Mat<T> arc_head, arc_dep, lab_head, lab_dep;          // masked tanh outputs
    Mat<T> m_arc_head, m_arc_dep, m_lab_head, m_lab_dep;  // dropout masks
    Mat<T> arc_logits;  // (n+1) x n
    Mat<T> d_arc_logits, d_lab_head, d_lab_dep;  // filled by accumulate_loss
  };

  void resize(NetParams<T>& p) {
    int d = cfg_.embed_dim, h = cfg_.hidden_size, a = cfg_.arc_size,
        b = cfg_.label_size;
    p.embed_word.resize(vocab_size_, d);
    if (cfg_.use_gold_pos)
      p.embed_pos.resize(kPosVocabSize, cfg_.pos_embed_dim);
    else
      p.embed_pos.resize(0, 0);
    p.lstm_fw.resize(cfg_.layers);
    p.lstm_bw.resize(cfg_.layers);
    for (int l = 0; l < cfg_.layers; ++l) {
      int in_dim = l == 0 ? input_dim_ : 2 * h;
      for (auto* dir : {&p.lstm_fw[l], &p.lstm_bw[l]}) {
        dir->w_ih.resize(4 * h, in_dim);
        dir->w_hh.resize(4 * h, h);
        dir->bias.resize(4 * h, 1);
      }
    }
    p.arc_head_w.resize(a, 2 * h);
    p.arc_head_b.resize(a, 1);
    p.arc_dep_w.resize(a, 2 * h);
    p.arc_dep_b.resize(a, 1);
    p.lab_head_w.resize(b, 2 * h);
    p.lab_head_b.resize(b, 1);
    p.lab_dep_w.resize(b, 2 * h);
    p.lab_dep_b.resize(b, 1);
    p.arc_bilinear.resize(a + 1, a);
    p.label_bilinear.resize(n_labels_ * (b + 1), b + 1);
  }

  static Mat<T> with_ones_row(const Mat<T>& m) {
    Mat<T> out(m.rows() + 1, m.cols());
    out.topRows(m.rows()) = m;
    out.row(m.rows()).setOnes();
    return out;
  }

  Mat<T> make_mask(Eigen::Index rows, Eigen::Index cols,
                   CounterRng* rng) const {
    Mat<T> mask;
    if (!rng || cfg_.dropout <= 0.0) return mask;
    mask.resize(rows, cols);
    T keep_scale = static_cast<T>(1.0 / (1.0 - cfg_.dropout));
    for (Eigen::Index j = 0; j < cols; ++j)
      for (Eigen::Index i = 0; i < rows; ++i)
        mask(i, j) = rng->next_unit() < cfg_.dropout ? T(0) : keep_scale;
    return mask;
  }

  static void apply_mask(Mat<T>& m, const Mat<T>& mask) {
    if (mask.size() > 0) m.array() *= mask.array();
  }

  void lstm_forward(const LstmDirection<T>& p, const Mat<T>& in, bool reverse,
                    DirCache& c) const {
    int h = cfg_.hidden_size;
    Eigen::Index t_len = in.cols();
    for (Mat<T>* m : {&c.i, &c.f, &c.g, &c.o, &c.c, &c.tc, &c.h})
      m->resize(h, t_len);
    Mat<T> zx = (p.w_ih * in).colwise() + p.bias.col(0);  // 4H x T
    Mat<T> h_prev = Mat<T>::Zero(h, 1);
    Mat<T> c_prev = Mat<T>::Zero(h, 1);
    Mat<T> z(4 * h, 1);
    for (Eigen::Index step = 0; step < t_len; ++step) {
      Eigen::Index t = reverse ? t_len - 1 - step : step;
      z = zx.col(t) + p.w_hh * h_prev;
      auto seg = [&](int block) { return z.col(0).segment(block * h, h).array(); };
      c.i.col(t) = (T(1) / (T(1) + (-seg(0)).exp())).matrix();
      c.f.col(t) = (T(1) / (T(1) + (-seg(1)).exp())).matrix();
      c.g.col(t) = seg(2).tanh().matrix();
      c.o.col(t) = (T(1) / (T(1) + (-seg(3)).exp())).matrix();
      c.c.col(t) = (c.f.col(t).array() * c_prev.col(0).array() +
                    c.i.col(t).array() * c.g.col(t).array())
                       .matrix();
      c.tc.col(t) = c.c.col(t).array().tanh().matrix();
      c.h.col(t) = (c.o.col(t).array() * c.tc.col(t).array()).matrix();
      h_prev = c.h.col(t);
      c_prev = c.c.col(t);
    }
  }

  // dh_out: gradient wrt this direction's h outputs. Adds parameter gradients
  // to `g` and the input gradient to `din`.
  void lstm_backward(const LstmDirection<T>& p, LstmDirection<T>& g,
                     const Mat<T>& in, bool reverse, const DirCache& c,
                     const Eigen::Ref<const Mat<T>>& dh_out, Mat<T>& din) {
    int h = cfg_.hidden_size;
    Eigen::Index t_len = in.cols();
    Mat<T> dz_all = Mat<T>::Zero(4 * h, t_len);
    Mat<T> dh_rec = Mat<T>::Zero(h, 1);
    Mat<T> dc = Mat<T>::Zero(h, 1);
    for (Eigen::Index step = t_len; step-- > 0;) {
      Eigen::Index t = reverse ? t_len - 1 - step : step;
      bool first_step = step == 0;
      Eigen::Index t_prev = reverse ? t + 1 : t - 1;

      auto iv = c.i.col(t).array();
      auto fv = c.f.col(t).array();
      auto gv = c.g.col(t).array();
      auto ov = c.o.col(t).array();
      auto tcv = c.tc.col(t).array();
      Eigen::Array<T, Eigen::Dynamic, 1> dh =
          dh_out.col(t).array() + dh_rec.col(0).array();
      Eigen::Array<T, Eigen::Dynamic, 1> dov = dh * tcv;
      Eigen::Array<T, Eigen::Dynamic, 1> dcv =
          dc.col(0).array() + dh * ov * (T(1) - tcv * tcv);
      Eigen::Array<T, Eigen::Dynamic, 1> cprev =
          first_step ? Eigen::Array<T, Eigen::Dynamic, 1>::Zero(h).eval()
                     : c.c.col(t_prev).array().eval();
      dz_all.col(t).segment(0, h) = (dcv * gv * iv * (T(1) - iv)).matrix();
      dz_all.col(t).segment(h, h) = (dcv * cprev * fv * (T(1) - fv)).matrix();
      dz_all.col(t).segment(2 * h, h) = (dcv * iv * (T(1) - gv * gv)).matrix();
      dz_all.col(t).segment(3 * h, h) = (dov * ov * (T(1) - ov)).matrix();
      dc.col(0) = (dcv * fv).matrix();
      if (!first_step)
        dh_rec = p.w_hh.transpose() * dz_all.col(t);
    }
    g.w_ih += dz_all * in.transpose();
    g.bias += dz_all.rowwise().sum();
    din += p.w_ih.transpose() * dz_all;
    // Recurrent weights see h from the previous step in processing order.
    Mat<T> h_prev_all = Mat<T>::Zero(h, t_len);
    for (Eigen::Index t = 0; t < t_len; ++t) {
      Eigen::Index tp = reverse ? t + 1 : t - 1;
      if (tp >= 0 && tp < t_len) h_prev_all.col(t) = c.h.col(tp);
    }
    g.w_hh += dz_all * h_prev_all.transpose();
  }

  void run_forward(const TrainExample& ex, CounterRng* rng,
                   Cache& cache) const {
    int n = ex.n();
    if (n < 1) throw std::runtime_error("sentence has no surface tokens");
    Eigen::Index t_len = n + 1;
    int d = cfg_.embed_dim;

    cache.x_raw.resize(input_dim_, t_len);
    for (Eigen::Index t = 0; t < t_len; ++t) {
      int row = ex.word_rows[t];
      if (row < 0 || row >= vocab_size_)
        throw std::runtime_error("word row out of range");
      cache.x_raw.col(t).topRows(d) = params_.embed_word.row(row).transpose();
      if (cfg_.use_gold_pos)
        cache.x_raw.col(t).bottomRows(cfg_.pos_embed_dim) =
            params_.embed_pos.row(ex.pos_rows.at(t)).transpose();
    }
    cache.x_mask = make_mask(input_dim_, t_len, rng);
    Mat<T> x = cache.x_raw;
    apply_mask(x, cache.x_mask);

    cache.layers.resize(cfg_.layers);
    Mat<T> layer_in = std::move(x);
    for (int l = 0; l < cfg_.layers; ++l) {
      LayerCache& lc = cache.layers[l];
      lc.in = std::move(layer_in);
      lstm_forward(params_.lstm_fw[l], lc.in, false, lc.fw);
      lstm_forward(params_.lstm_bw[l], lc.in, true, lc.bw);
      Mat<T> out(2 * cfg_.hidden_size, t_len);
      out.topRows(cfg_.hidden_size) = lc.fw.h;
      out.bottomRows(cfg_.hidden_size) = lc.bw.h;
      lc.mask = make_mask(2 * cfg_.hidden_size, t_len, rng);
      apply_mask(out, lc.mask);
      layer_in = std::move(out);
    }
    cache.enc = std::move(layer_in);

    auto mlp = [&](const Mat<T>& w, const Mat<T>& b, Mat<T>& out, Mat<T>& mask) {
      out = (w * cache.enc).colwise() + b.col(0);
      out = out.array().tanh().matrix();
      mask = make_mask(out.rows(), out.cols(), rng);
      apply_mask(out, mask);
    };
    mlp(params_.arc_head_w, params_.arc_head_b, cache.arc_head, cache.m_arc_head);
    mlp(params_.arc_dep_w, params_.arc_dep_b, cache.arc_dep, cache.m_arc_dep);
    mlp(params_.lab_head_w, params_.lab_head_b, cache.lab_head, cache.m_lab_head);
    mlp(params_.lab_dep_w, params_.lab_dep_b, cache.lab_dep, cache.m_lab_dep);

    // Arc logits over all head positions (self included: training keeps the
    // full softmax support of n+1 heads; decoding masks the diagonal).
    Mat<T> head_b = with_ones_row(cache.arc_head);                    // (A+1) x T
    Mat<T> proj = params_.arc_bilinear * cache.arc_dep.rightCols(n);  // (A+1) x n
    cache.arc_logits = head_b.transpose() * proj;                     // T x n
  }

  // Softmax cross-entropy over one logit column; optionally writes dlogits.
  static double softmax_ce(const Eigen::Ref<const Mat<T>>& col, int gold,
                           Mat<T>* dcol) {
    T max_v = col.col(0).maxCoeff();
    double denom = 0.0;
    for (Eigen::Index i = 0; i < col.rows(); ++i)
      denom += std::exp(static_cast<double>(col(i, 0) - max_v));
    double log_denom = std::log(denom) + static_cast<double>(max_v);
    double loss = log_denom - static_cast<double>(col(gold, 0));
    if (dcol) {
      dcol->resize(col.rows(), 1);
      for (Eigen::Index i = 0; i < col.rows(); ++i)
        (*dcol)(i, 0) = static_cast<T>(
            std::exp(static_cast<double>(col(i, 0)) - log_denom));
      (*dcol)(gold, 0) -= T(1);
    }
    return loss;
  }

  // Computes the summed loss; when the d_* outputs are non-null also fills
  // the logit/representation gradients consumed by backprop(). The label
  // scorer is evaluated only at gold heads.
  void accumulate_loss(const TrainExample& ex, const Cache& cache,
                       LossStats& stats, Mat<T>* d_arc_logits,
                       Mat<T>* d_lab_head, Mat<T>* d_lab_dep) {
    int n = ex.n();
    int bp = cfg_.label_size + 1;
    if (static_cast<int>(ex.gold_head.size()) != n ||
        static_cast<int>(ex.gold_label.size()) != n)
      throw std::runtime_error("example missing gold annotations");
    bool backward = d_arc_logits != nullptr;
    if (backward) {
      *d_arc_logits = Mat<T>::Zero(n + 1, n);
      *d_lab_head = Mat<T>::Zero(cfg_.label_size, n + 1);
      *d_lab_dep = Mat<T>::Zero(cfg_.label_size, n + 1);
    }

    for (int dep = 1; dep <= n; ++dep) {
      int gold_h = ex.gold_head[dep - 1];
      int gold_r = ex.gold_label[dep - 1];
      if (gold_h < 0 || gold_h > n || gold_h == dep)
        throw std::runtime_error("gold head out of range");
      if (gold_r < 0 || gold_r >= n_labels_)
        throw std::runtime_error("gold label out of range");

      Mat<T> d_col;
      stats.arc += softmax_ce(cache.arc_logits.col(dep - 1), gold_h,
                              backward ? &d_col : nullptr);
      if (backward) d_arc_logits->col(dep - 1) = d_col.col(0);

      Mat<T> u(bp, 1), v(bp, 1);
      u.topRows(cfg_.label_size) = cache.lab_head.col(gold_h);
      u(bp - 1, 0) = T(1);
      v.topRows(cfg_.label_size) = cache.lab_dep.col(dep);
      v(bp - 1, 0) = T(1);
      Mat<T> chunks = params_.label_bilinear * v;  // |R|*(B+1) x 1
      Mat<T> scores(n_labels_, 1);
      for (int r = 0; r < n_labels_; ++r)
        scores(r, 0) = u.col(0).dot(chunks.block(r * bp, 0, bp, 1).col(0));
      Mat<T> d_scores;
      stats.label +=
          softmax_ce(scores, gold_r, backward ? &d_scores : nullptr);

      if (backward) {
        // Stack delta_r * u over relations: one outer product then covers
        // every per-relation bilinear gradient, and du/dv fall out of the
        // same stacked form.
        Mat<T> weighted_u(n_labels_ * bp, 1);
        Mat<T> du = Mat<T>::Zero(bp, 1);
        for (int r = 0; r < n_labels_; ++r) {
          T delta = d_scores(r, 0);
          weighted_u.block(r * bp, 0, bp, 1) = delta * u;
          du += delta * chunks.block(r * bp, 0, bp, 1);
        }
        grads_.label_bilinear += weighted_u * v.transpose();
        Mat<T> dv = params_.label_bilinear.transpose() * weighted_u;
        d_lab_head->col(gold_h) += du.topRows(cfg_.label_size);
        d_lab_dep->col(dep) += dv.topRows(cfg_.label_size);
      }
      ++stats.tokens;
    }
    stats.total = stats.arc + stats.label;
  }

  void backprop(const TrainExample& ex, const Cache& cache) {
    int n = ex.n();
    Eigen::Index t_len = n + 1;

    // Biaffine arc.
    Mat<T> head_b = with_ones_row(cache.arc_head);  // (A+1) x T
    Mat<T> dep_cols = cache.arc_dep.rightCols(n);   // A x n
    grads_.arc_bilinear += (head_b * cache.d_arc_logits) * dep_cols.transpose();
    Mat<T> d_head_b =
        (params_.arc_bilinear * dep_cols) * cache.d_arc_logits.transpose();
    Mat<T> d_arc_head = d_head_b.topRows(cfg_.arc_size);
    Mat<T> d_arc_dep = Mat<T>::Zero(cfg_.arc_size, t_len);
    d_arc_dep.rightCols(n) =
        params_.arc_bilinear.transpose() * head_b * cache.d_arc_logits;

    // MLPs back into the encoder output.
    Mat<T> d_enc = Mat<T>::Zero(2 * cfg_.hidden_size, t_len);
    auto mlp_backward = [&](const Mat<T>& w, Mat<T>& gw, Mat<T>& gb,
                            const Mat<T>& out, const Mat<T>& mask,
                            Mat<T> d_out) {
      apply_mask(d_out, mask);
      // `out` holds masked tanh values; divide the mask back out to recover
      // tanh for its derivative (zeroed entries carry zero gradient anyway).
      Mat<T> tanh_out = out;
      if (mask.size() > 0)
        tanh_out = (mask.array() == T(0))
                       .select(Mat<T>::Zero(out.rows(), out.cols()),
                               out.array() / mask.array())
                       .matrix();
      Mat<T> d_pre =
          (d_out.array() * (T(1) - tanh_out.array().square())).matrix();
      gw += d_pre * cache.enc.transpose();
      gb += d_pre.rowwise().sum();
      d_enc += w.transpose() * d_pre;
    };
    mlp_backward(params_.arc_head_w, grads_.arc_head_w, grads_.arc_head_b,
                 cache.arc_head, cache.m_arc_head, d_arc_head);
    mlp_backward(params_.arc_dep_w, grads_.arc_dep_w, grads_.arc_dep_b,
                 cache.arc_dep, cache.m_arc_dep, d_arc_dep);
    mlp_backward(params_.lab_head_w, grads_.lab_head_w, grads_.lab_head_b,
                 cache.lab_head, cache.m_lab_head, cache.d_lab_head);
    mlp_backward(params_.lab_dep_w, grads_.lab_dep_w, grads_.lab_dep_b,
                 cache.lab_dep, cache.m_lab_dep, cache.d_lab_dep);

    // Encoder stack.
    Mat<T> d_layer_out = std::move(d_enc);
    for (int l = cfg_.layers - 1; l >= 0; --l) {
      const LayerCache& lc = cache.layers[l];
      apply_mask(d_layer_out, lc.mask);
      Mat<T> d_in = Mat<T>::Zero(lc.in.rows(), t_len);
      lstm_backward(params_.lstm_fw[l], grads_.lstm_fw[l], lc.in, false, lc.fw,
                    d_layer_out.topRows(cfg_.hidden_size), d_in);
      lstm_backward(params_.lstm_bw[l], grads_.lstm_bw[l], lc.in, true, lc.bw,
                    d_layer_out.bottomRows(cfg_.hidden_size), d_in);
      d_layer_out = std::move(d_in);
    }

    // Embeddings.
    apply_mask(d_layer_out, cache.x_mask);
    for (Eigen::Index t = 0; t < t_len; ++t) {
      grads_.embed_word.row(ex.word_rows[t]) +=
          d_layer_out.col(t).topRows(cfg_.embed_dim).transpose();
      if (cfg_.use_gold_pos)
        grads_.embed_pos.row(ex.pos_rows[t]) +=
            d_layer_out.col(t).bottomRows(cfg_.pos_embed_dim).transpose();
    }
  }

  ParserConfig cfg_;
  int vocab_size_;
  int n_labels_;
  int input_dim_;
  NetParams<T> params_;
  NetParams<T> grads_;
};

}  // namespace scud::parser
