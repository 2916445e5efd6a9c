// Hyperparameter configuration for the biaffine parser.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace scud::parser {

struct ParserConfig {
  int embed_dim = 100;       // D: word embedding size
  int pos_embed_dim = 16;    // used only when use_gold_pos
  int hidden_size = 200;     // H: encoder hidden units per direction
  int layers = 2;            // L: bidirectional recurrent layers
  int arc_size = 400;        // A: arc representation size
  int label_size = 100;      // B: label representation size
  double dropout = 0.33;
  double word_dropout = 0.2;  // singleton -> <unk> replacement probability
  double learning_rate = 2e-3;
  int batch_size = 32;        // sentences
  int max_epochs = 200;
  int patience = 20;          // evaluations without dev-LAS improvement
  double finetune_epsilon = 1e-3;  // relative dev-loss change over 3 evals
  uint64_t seed = 42;
  bool use_gold_pos = false;  // ablation: concatenate gold-POS embeddings
  bool freeze_pretrained = false;

  void check() const {
    if (embed_dim <= 0 || hidden_size <= 0 || layers <= 0 || arc_size <= 0 ||
        label_size <= 0 || batch_size <= 0 || max_epochs <= 0 ||
        (use_gold_pos && pos_embed_dim <= 0))
      throw std::runtime_error("parser config: dimensions must be positive");
    if (dropout < 0.0 || dropout >= 1.0 || word_dropout < 0.0 ||
        word_dropout >= 1.0)
      throw std::runtime_error("parser config: rates must be in [0,1)");
    if (learning_rate <= 0.0)
      throw std::runtime_error("parser config: learning rate must be positive");
  }

  bool compatible_shapes(const ParserConfig& other) const {
    return embed_dim == other.embed_dim && hidden_size == other.hidden_size &&
           layers == other.layers && arc_size == other.arc_size &&
           label_size == other.label_size &&
           use_gold_pos == other.use_gold_pos &&
           pos_embed_dim == other.pos_embed_dim;
  }
};

}  // namespace scud::parser
