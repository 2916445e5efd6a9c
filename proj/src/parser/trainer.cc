#include "scud/parser/trainer.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include "scud/parser/mst.h"
#include "scud/rng.h"

namespace scud::parser {

namespace {

class Adam {
 public:
  explicit Adam(Network<float>& net, double lr) : net_(net), lr_(lr) {
    for (auto& b : net_.params().blocks()) {
      m_.push_back(Mat<float>::Zero(b.block->rows(), b.block->cols()));
      v_.push_back(Mat<float>::Zero(b.block->rows(), b.block->cols()));
    }
  }

  void step() {
    ++t_;
    auto params = net_.params().blocks();
    auto grads = net_.grads().blocks();
    float bc1 = 1.0f - std::pow(kBeta1, static_cast<float>(t_));
    float bc2 = 1.0f - std::pow(kBeta2, static_cast<float>(t_));
    for (size_t k = 0; k < params.size(); ++k) {
      auto& g = *grads[k].block;
      m_[k] = kBeta1 * m_[k] + (1.0f - kBeta1) * g;
      v_[k] = (kBeta2 * v_[k].array() +
               (1.0f - kBeta2) * g.array().square()).matrix();
      auto m_hat = m_[k].array() / bc1;
      auto v_hat = v_[k].array() / bc2;
      params[k].block->array() -=
          static_cast<float>(lr_) * m_hat / (v_hat.sqrt() + kEps);
    }
  }

 private:
  static constexpr float kBeta1 = 0.9f;
  static constexpr float kBeta2 = 0.999f;
  static constexpr float kEps = 1e-8f;
  Network<float>& net_;
  double lr_;
  int t_ = 0;
  std::vector<Mat<float>> m_, v_;
};

struct DevMetrics {
  double loss = 0.0;  // per token
  double uas = 0.0;
  double las = 0.0;
};

DevMetrics evaluate_dev(const ParserModel& model,
                        const std::vector<TrainExample>& dev) {
  DevMetrics m;
  LossStats stats = model.net().loss(dev);
  size_t head_ok = 0, labeled_ok = 0, tokens = 0;
  for (const auto& ex : dev) {
    SentenceScores scores = model.net().score(ex);
    std::vector<int> heads = decode_mst(scores.arc);
    std::vector<int> labels =
        assign_labels(scores, heads, model.root_label_id());
    for (int d = 0; d < ex.n(); ++d) {
      ++tokens;
      if (heads[d] == ex.gold_head[d]) {
        ++head_ok;
        if (labels[d] == ex.gold_label[d]) ++labeled_ok;
      }
    }
  }
  m.loss = stats.tokens ? stats.total / static_cast<double>(stats.tokens) : 0.0;
  if (tokens) {
    m.uas = 100.0 * static_cast<double>(head_ok) / tokens;
    m.las = 100.0 * static_cast<double>(labeled_ok) / tokens;
  }
  return m;
}

std::vector<TrainExample> build_examples(const ParserModel& model,
                                         const Corpus& corpus,
                                         const char* which) {
  std::vector<TrainExample> out;
  out.reserve(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (corpus[i].surface_count() == 0)
      throw std::runtime_error(std::string(which) + " sentence " +
                               std::to_string(i + 1) + " has no tokens");
    out.push_back(model.make_example(corpus[i], true));
  }
  return out;
}

// Count surface forms so singletons can be word-dropped to train <unk>.
std::map<std::string, size_t> form_counts(const Corpus& corpus) {
  std::map<std::string, size_t> counts;
  for (const auto& s : corpus)
    for (const auto& t : s.tokens)
      if (!t.id.is_empty_node()) ++counts[t.form];
  return counts;
}

struct LoopOptions {
  bool finetune_rule = false;
};

TrainResult run_training(ParserModel model, const Corpus& train_corpus,
                         const Corpus& dev_corpus, const LoopOptions& opts) {
  const ParserConfig& cfg = model.config();
  if (train_corpus.empty()) throw std::runtime_error("training corpus is empty");
  if (dev_corpus.empty()) throw std::runtime_error("dev corpus is empty");

  std::vector<TrainExample> train = build_examples(model, train_corpus, "train");
  std::vector<TrainExample> dev = build_examples(model, dev_corpus, "dev");

  // Which training tokens are singletons (eligible for word dropout).
  auto counts = form_counts(train_corpus);
  std::vector<std::vector<bool>> singleton(train.size());
  {
    size_t si = 0;
    for (const auto& s : train_corpus) {
      for (const auto& t : s.tokens)
        if (!t.id.is_empty_node())
          singleton[si].push_back(counts.at(t.form) == 1);
      ++si;
    }
  }

  TrainResult result{std::move(model), {}, 0, 0.0};

  DevMetrics pre = evaluate_dev(result.model, dev);
  result.log.push_back({0, 0.0, pre.loss, pre.uas, pre.las});
  result.best_dev_las = pre.las;
  result.best_epoch = 0;

  // Snapshot of the best-dev parameters.
  NetParams<float> best_params = result.model.net().params();

  if (opts.finetune_rule && std::isinf(cfg.finetune_epsilon))
    return result;  // stability declared immediately; model == checkpoint

  Adam adam(result.model.net(), cfg.learning_rate);
  CounterRng dropout_rng(cfg.seed, 0xD12);
  CounterRng word_rng(cfg.seed, 0x30BD);

  std::vector<size_t> order(train.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;

  int since_best = 0;
  std::vector<double> dev_losses{pre.loss};
  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    // Deterministic shuffle keyed by (seed, epoch).
    CounterRng shuffle_rng(cfg.seed ^ 0x5u, static_cast<uint64_t>(epoch));
    for (size_t i = order.size(); i > 1; --i)
      std::swap(order[i - 1], order[shuffle_rng.next_int(0, i - 1)]);

    double epoch_loss = 0.0;
    size_t epoch_tokens = 0;
    size_t pos = 0;
    while (pos < order.size()) {
      size_t batch_end = std::min(pos + static_cast<size_t>(cfg.batch_size),
                                  order.size());
      std::vector<TrainExample> batch;
      batch.reserve(batch_end - pos);
      for (size_t k = pos; k < batch_end; ++k) {
        TrainExample ex = train[order[k]];
        if (cfg.word_dropout > 0.0) {
          for (int d = 1; d <= ex.n(); ++d)
            if (singleton[order[k]][d - 1] &&
                word_rng.next_unit() < cfg.word_dropout)
              ex.word_rows[d] = kUnkRow;
        }
        batch.push_back(std::move(ex));
      }
      result.model.net().zero_grads();
      LossStats stats =
          result.model.net().forward_backward(batch, &dropout_rng);
      epoch_loss += stats.total;
      epoch_tokens += stats.tokens;
      // Scale summed gradients to a per-token average for a stable step size.
      float inv = 1.0f / static_cast<float>(stats.tokens);
      for (auto& b : result.model.net().grads().blocks()) *b.block *= inv;
      if (cfg.freeze_pretrained) {
        auto& ge = result.model.net().grads().embed_word;
        if (ge.rows() > 2) ge.bottomRows(ge.rows() - 2).setZero();
      }
      adam.step();
      pos = batch_end;
    }

    DevMetrics dm = evaluate_dev(result.model, dev);
    result.log.push_back({epoch, epoch_loss / static_cast<double>(epoch_tokens),
                          dm.loss, dm.uas, dm.las});
    dev_losses.push_back(dm.loss);

    if (dm.las > result.best_dev_las) {
      result.best_dev_las = dm.las;
      result.best_epoch = epoch;
      best_params = result.model.net().params();
      since_best = 0;
    } else {
      ++since_best;
    }

    if (opts.finetune_rule && dev_losses.size() >= 4) {
      bool stable = true;
      size_t last = dev_losses.size() - 1;
      for (size_t k = last - 2; k <= last; ++k) {
        double prev = dev_losses[k - 1];
        double rel = std::abs(dev_losses[k] - prev) /
                     std::max(std::abs(prev), 1e-12);
        if (rel >= cfg.finetune_epsilon) stable = false;
      }
      if (stable) break;
    }
    if (since_best >= cfg.patience) break;
  }

  result.model.net().params() = best_params;
  return result;
}

}  // namespace

TrainResult train(const Corpus& train_corpus, const Corpus& dev_corpus,
                  const EmbeddingTable& embeddings, const ParserConfig& config,
                  const Tagset& tagset) {
  config.check();
  if (!tagset.count("root"))
    throw std::runtime_error("tagset must contain 'root'");
  for (const auto& s : train_corpus)
    for (const auto& t : s.tokens)
      if (t.deprel && !tagset.count(t.deprel->name))
        throw std::runtime_error("training label '" + t.deprel->name +
                                 "' is not in the tagset");
  std::vector<std::string> labels(tagset.begin(), tagset.end());
  ParserModel model(config, embeddings, std::move(labels));
  return run_training(std::move(model), train_corpus, dev_corpus, {});
}

TrainResult finetune(const ParserModel& checkpoint, const Corpus& train_corpus,
                     const Corpus& dev_corpus) {
  for (const auto& s : train_corpus)
    for (const auto& t : s.tokens)
      if (t.deprel && !checkpoint.has_label(t.deprel->name))
        throw std::runtime_error("fine-tuning label '" + t.deprel->name +
                                 "' is not in the checkpoint vocabulary");
  LoopOptions opts;
  opts.finetune_rule = true;
  return run_training(checkpoint, train_corpus, dev_corpus, opts);
}

std::string TrainResult::log_tsv() const {
  std::string out = "epoch\ttrain_loss\tdev_loss\tdev_uas\tdev_las\n";
  char buf[160];
  for (const auto& e : log) {
    std::snprintf(buf, sizeof(buf), "%d\t%.6f\t%.6f\t%.2f\t%.2f\n", e.epoch,
                  e.train_loss, e.dev_loss, e.dev_uas, e.dev_las);
    out += buf;
  }
  return out;
}

}  // namespace scud::parser
