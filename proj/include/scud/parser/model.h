// Trainable parser model: network parameters plus vocabulary and label maps,
// and the corpus-level scoring/parsing entry points.
#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "scud/conllu.h"
#include "scud/parser/embeddings.h"
#include "scud/parser/network.h"

namespace scud::parser {

class ParserModel {
 public:
  // Builds an uninitialized-weight model; the trainer seeds parameters.
  ParserModel(const ParserConfig& cfg, const EmbeddingTable& embeddings,
              std::vector<std::string> label_names);
  // Used by checkpoint loading.
  ParserModel(const ParserConfig& cfg, std::vector<std::string> vocab_words,
              std::vector<std::string> label_names);

  const ParserConfig& config() const { return net_.config(); }
  Network<float>& net() { return net_; }
  const Network<float>& net() const { return net_; }
  const std::vector<std::string>& vocab_words() const { return vocab_words_; }
  const std::vector<std::string>& label_names() const { return labels_; }

  // exact form -> lowercase form -> <unk>
  int word_row(const std::string& form) const;
  bool has_label(const std::string& name) const {
    return label_index_.count(name) > 0;
  }
  int label_id(const std::string& name) const;
  int root_label_id() const { return root_label_; }

  // Surface tokens only; empty nodes are excluded. with_gold requires all
  // surface tokens attached with labels from the model's vocabulary.
  TrainExample make_example(const AnnotatedSentence& s, bool with_gold) const;

  // Inference scores for one sentence (deterministic; dropout off).
  SentenceScores score_sentence(const AnnotatedSentence& s) const;

  // Assigns every surface token a head and relation via constrained MST
  // decoding; empty nodes pass through unchanged. The single ROOT child is
  // labeled root.
  AnnotatedSentence parse_sentence(const AnnotatedSentence& s) const;
  Corpus parse(const Corpus& corpus, unsigned jobs = 1) const;

 private:
  std::vector<std::string> vocab_words_;  // row -> form
  std::unordered_map<std::string, int> vocab_index_;
  std::vector<std::string> labels_;       // id -> primary name
  std::unordered_map<std::string, int> label_index_;
  int root_label_ = -1;
  Network<float> net_;
};

// argmax label per dependent at its chosen head; ROOT-headed tokens are
// forced to `root_label`.
std::vector<int> assign_labels(const SentenceScores& scores,
                               const std::vector<int>& heads, int root_label);

}  // namespace scud::parser
