// Attachment-score evaluation and per-relation diagnostics.
#pragma once

#include <map>
#include <string>
#include <vector>

#include "scud/conllu.h"

namespace scud {

struct RelationScore {
  std::string tag;          // primary name
  size_t gold_count = 0;
  size_t pred_count = 0;
  size_t correct = 0;       // head and label both right
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

struct EvalResult {
  double uas = 0.0;
  double las = 0.0;
  size_t token_count = 0;
  std::vector<RelationScore> relations;
  // Confusion over primary names for tokens whose head is correct.
  std::map<std::pair<std::string, std::string>, size_t> confusion;

  std::string summary() const;
  std::string relation_table_tsv() const;
  std::string confusion_tsv() const;
};

struct EvalOptions {
  bool exclude_punct = false;   // drop gold-punct tokens from scoring
  bool include_empty = false;   // also score empty nodes
};

// Requires aligned tokenization and fully attached tokens in both corpora.
// Throws with the first divergence.
EvalResult uas_las(const Corpus& gold, const Corpus& pred,
                   const EvalOptions& opts = {}, unsigned jobs = 1);

}  // namespace scud
