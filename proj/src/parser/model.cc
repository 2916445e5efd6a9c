#include "scud/parser/model.h"

#include <algorithm>
#include <array>
#include <cctype>
#include <stdexcept>

#include "scud/parallel.h"
#include "scud/parser/mst.h"

namespace scud::parser {

namespace {

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

std::vector<std::string> rows_in_order(const EmbeddingTable& table) {
  std::vector<std::string> words(table.size());
  for (const auto& [form, row] : table.vocabulary) words[row] = form;
  return words;
}

}  // namespace

int pos_row(const std::string& upos) {
  static const std::array<const char*, 17> kUpos = {
      "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET", "INTJ", "NOUN", "NUM",
      "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};
  for (size_t i = 0; i < kUpos.size(); ++i)
    if (upos == kUpos[i]) return static_cast<int>(i) + 2;
  return 1;  // unknown/unset
}

ParserModel::ParserModel(const ParserConfig& cfg,
                         const EmbeddingTable& embeddings,
                         std::vector<std::string> label_names)
    : ParserModel(cfg, rows_in_order(embeddings), std::move(label_names)) {
  if (embeddings.dim != cfg.embed_dim)
    throw std::runtime_error("embedding table dim " +
                             std::to_string(embeddings.dim) +
                             " does not match config embed_dim");
  net_.init_params(cfg.seed);
  net_.set_embeddings(embeddings.matrix);
}

ParserModel::ParserModel(const ParserConfig& cfg,
                         std::vector<std::string> vocab_words,
                         std::vector<std::string> label_names)
    : vocab_words_(std::move(vocab_words)),
      labels_(std::move(label_names)),
      net_(cfg, static_cast<int>(vocab_words_.size()),
           static_cast<int>(labels_.size())) {
  if (vocab_words_.size() < 2 || vocab_words_[0] != "<root>" ||
      vocab_words_[1] != "<unk>")
    throw std::runtime_error("vocabulary must start with <root>, <unk>");
  for (size_t i = 0; i < vocab_words_.size(); ++i) {
    if (!vocab_index_.emplace(vocab_words_[i], static_cast<int>(i)).second)
      throw std::runtime_error("duplicate vocabulary entry '" + vocab_words_[i] +
                               "'");
  }
  for (size_t i = 0; i < labels_.size(); ++i) {
    if (!label_index_.emplace(labels_[i], static_cast<int>(i)).second)
      throw std::runtime_error("duplicate label '" + labels_[i] + "'");
  }
  auto it = label_index_.find("root");
  if (it == label_index_.end())
    throw std::runtime_error("label vocabulary must contain 'root'");
  root_label_ = it->second;
}

int ParserModel::word_row(const std::string& form) const {
  if (auto it = vocab_index_.find(form); it != vocab_index_.end())
    return it->second;
  if (auto it = vocab_index_.find(lowercase(form)); it != vocab_index_.end())
    return it->second;
  return kUnkRow;
}

int ParserModel::label_id(const std::string& name) const {
  auto it = label_index_.find(name);
  if (it == label_index_.end())
    throw std::runtime_error("label '" + name + "' not in model vocabulary");
  return it->second;
}

TrainExample ParserModel::make_example(const AnnotatedSentence& s,
                                       bool with_gold) const {
  TrainExample ex;
  ex.word_rows.push_back(kRootRow);
  if (config().use_gold_pos) ex.pos_rows.push_back(kRootRow);
  for (const auto& t : s.tokens) {
    if (t.id.is_empty_node()) continue;
    ex.word_rows.push_back(word_row(t.form));
    if (config().use_gold_pos) ex.pos_rows.push_back(pos_row(t.upos));
    if (!with_gold) continue;
    if (!t.attached())
      throw std::runtime_error("token " + t.id.str() +
                               " is unattached in gold data");
    if (t.head->is_empty_node())
      throw std::runtime_error("token " + t.id.str() +
                               " is headed by an empty node");
    ex.gold_head.push_back(t.head->major);
    ex.gold_label.push_back(label_id(t.deprel->name));
  }
  return ex;
}

SentenceScores ParserModel::score_sentence(const AnnotatedSentence& s) const {
  return net_.score(make_example(s, false));
}

std::vector<int> assign_labels(const SentenceScores& scores,
                               const std::vector<int>& heads, int root_label) {
  std::vector<int> out(heads.size(), root_label);
  int n_labels = static_cast<int>(scores.labels.size());
  for (size_t d = 1; d <= heads.size(); ++d) {
    int h = heads[d - 1];
    if (h == 0) continue;  // forced root label
    int best = 0;
    double best_score = scores.label_score(h, static_cast<int>(d), 0);
    for (int r = 1; r < n_labels; ++r) {
      double v = scores.label_score(h, static_cast<int>(d), r);
      if (v > best_score) {
        best_score = v;
        best = r;
      }
    }
    out[d - 1] = best;
  }
  return out;
}

AnnotatedSentence ParserModel::parse_sentence(const AnnotatedSentence& s) const {
  AnnotatedSentence out = s;
  if (out.surface_count() == 0) return out;
  SentenceScores scores = score_sentence(out);
  std::vector<int> heads = decode_mst(scores.arc);
  std::vector<int> labels = assign_labels(scores, heads, root_label_);
  for (auto& t : out.tokens) {
    if (t.id.is_empty_node()) continue;
    int d = t.id.major;
    t.head = NodeId{heads[d - 1], 0};
    t.deprel = RelationTag{labels_[labels[d - 1]], ""};
  }
  return out;
}

Corpus ParserModel::parse(const Corpus& corpus, unsigned jobs) const {
  Corpus out(corpus.size());
  parallel_for(corpus.size(), jobs,
               [&](size_t i) { out[i] = parse_sentence(corpus[i]); });
  return out;
}

}  // namespace scud::parser
