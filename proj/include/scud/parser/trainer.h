// Training and fine-tuning loops: Adam over summed cross-entropy of gold
// heads and gold labels, per-epoch dev evaluation, best-dev checkpointing,
// patience-based early stopping, and the dev-loss stabilization rule for
// fine-tuning. Fully deterministic given the seed.
#pragma once

#include <string>
#include <vector>

#include "scud/conllu.h"
#include "scud/parser/embeddings.h"
#include "scud/parser/model.h"
#include "scud/tagset.h"

namespace scud::parser {

struct EpochLog {
  int epoch = 0;
  double train_loss = 0.0;  // per-token, with dropout active
  double dev_loss = 0.0;    // per-token, dropout off
  double dev_uas = 0.0;
  double dev_las = 0.0;
};

struct TrainResult {
  ParserModel model;
  std::vector<EpochLog> log;
  int best_epoch = 0;
  double best_dev_las = 0.0;

  // TSV: epoch, train_loss, dev_loss, dev_uas, dev_las
  std::string log_tsv() const;
};

// Trains from scratch. The label vocabulary is the tagset (so fine-tuning on
// any tagset-conformant corpus never meets an unknown label); a training
// label outside the tagset is an error.
TrainResult train(const Corpus& train_corpus, const Corpus& dev_corpus,
                  const EmbeddingTable& embeddings, const ParserConfig& config,
                  const Tagset& tagset);

// Resumes from a checkpoint with identical hyperparameters and a fresh
// optimizer; stops when the relative dev-loss change stays below
// config.finetune_epsilon for 3 consecutive evaluations (or on patience /
// max_epochs). The log's epoch-0 row holds the pre-finetune dev metrics.
TrainResult finetune(const ParserModel& checkpoint, const Corpus& train_corpus,
                     const Corpus& dev_corpus);

}  // namespace scud::parser
