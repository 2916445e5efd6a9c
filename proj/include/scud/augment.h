// Deterministic injection of speech phenomena and ASR errors into clean
// treebanks. Every transformation keeps the dependency graph valid under the
// validator's error-severity rules. Each insertion-type transformation has an
// exact inverse (below); word_drop is invertible up to the placeholder form
// via materialize_empty_nodes, and preterm truncation is lossy by nature.
#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "scud/conllu.h"

namespace scud {

struct AugmentConfig {
  uint64_t seed = 42;
  double word_split = 0.0;
  double word_drop = 0.0;
  double preterm_truncate = 0.0;
  double stutter = 0.0;
  double self_correct = 0.0;
  double filler = 0.0;
  std::vector<std::string> filler_lexicon = {"like", "you know", "well",
                                             "so",   "uh",       "um"};
  int max_stutter_repeats = 2;

  // Shipped defaults: truncation at the observed 5% turn-termination rate,
  // other phenomena conservative.
  static AugmentConfig defaults();
  // Flat "key = value" text; unknown keys rejected.
  static AugmentConfig from_file(const std::string& path);
  static AugmentConfig from_text(const std::string& text);
  void check() const;  // rates in [0,1]; lexicon non-empty if filler > 0
};

// Splits the surface token at `idx` at byte offset `split_point`. The first
// part inherits the original attachment; the second part gets POS X and
// attaches to the first with goeswith.
AnnotatedSentence split_word(const AnnotatedSentence& s, int idx,
                             int split_point);
// Inverse of split_word on its own output (idx = first-part position).
AnnotatedSentence merge_split(const AnnotatedSentence& s, int idx);

// Removes the dependent-free token at `idx` (deprel in the droppable set
// nsubj/obj/aux/cop/case/det) and inserts an empty node carrying its POS,
// head and relation, with placeholder form "E<position>.<minor>".
AnnotatedSentence drop_token_insert_empty(const AnnotatedSentence& s, int idx);
bool droppable(const AnnotatedSentence& s, int idx);

// Removes all tokens after surface position `cut`. Survivors whose head was
// removed are reattached: to the root with deprel preterm when the root
// survives; otherwise the leftmost surviving surface orphan becomes the new
// root and the rest attach to it with preterm.
AnnotatedSentence truncate_preterm(const AnnotatedSentence& s, int cut);

// Inserts `repeats` copies of token `idx` immediately after it, each attached
// to the original via flat.
AnnotatedSentence add_stutter(const AnnotatedSentence& s, int idx, int repeats);
// Inverse of add_stutter on its own output.
AnnotatedSentence remove_stutter(const AnnotatedSentence& s, int idx,
                                 int repeats);

// Inserts a disfluent span (form, upos pairs) before the repair token at
// `idx`; the first inserted token attaches to the repair with reparandum,
// further span tokens attach to the first with flat.
AnnotatedSentence add_self_correction(
    const AnnotatedSentence& s, int idx,
    const std::vector<std::pair<std::string, std::string>>& span);
// Inverse of add_self_correction on its own output.
AnnotatedSentence remove_self_correction(const AnnotatedSentence& s, int idx,
                                         size_t span_len);

// Inserts a filler word (possibly multi-token, e.g. "you know") before
// surface position `pos` (pos may be n+1 to append). The first token attaches
// to the root with discourse (POS INTJ, or ADV for "like"); further tokens
// attach to it with fixed.
AnnotatedSentence add_filler(const AnnotatedSentence& s, int pos,
                             const std::string& word);
// Inverse of add_filler on its own output.
AnnotatedSentence remove_filler(const AnnotatedSentence& s, int pos,
                                const std::string& word);

// Applies each transformation per its rate, sampling from a counter-based
// stream keyed by (config.seed, sentence index): a pure function of
// (corpus, config), independent of processing order.
Corpus augment_corpus(const Corpus& corpus, const AugmentConfig& config,
                      unsigned jobs = 1);

}  // namespace scud
