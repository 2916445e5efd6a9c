// Inter-annotator agreement between two annotation passes over the same
// token sequence: the percentage of dependencies that remained unchanged.
#pragma once

#include <string>
#include <vector>

#include "scud/conllu.h"

namespace scud {

struct SentenceAgreement {
  std::string sent_id;
  size_t tokens = 0;     // attached tokens considered
  size_t head_match = 0;
  size_t labeled_match = 0;
};

struct AgreementResult {
  size_t token_count = 0;
  double unlabeled_pct = 0.0;  // head match
  double labeled_pct = 0.0;    // head + primary relation match
  std::vector<SentenceAgreement> per_sentence;

  std::string per_sentence_tsv() const;
};

struct AgreementOptions {
  bool surface_only = false;  // exclude empty nodes
};

// Requires equal sentence counts and identical token sequences (forms, in
// order; empty nodes aligned by id). Throws with the first divergence.
AgreementResult attachment_agreement(const Corpus& a, const Corpus& b,
                                     const AgreementOptions& opts = {},
                                     unsigned jobs = 1);

}  // namespace scud
