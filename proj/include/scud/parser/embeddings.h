// Pre-trained word embedding table: text format, one entry per line
// ("token v1 v2 ... vD"). <unk> is the mean of all loaded vectors, <root>
// is zeros; lookup falls back exact -> lowercase -> <unk>.
#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Core>

namespace scud::parser {

inline constexpr int kRootRow = 0;
inline constexpr int kUnkRow = 1;

struct EmbeddingTable {
  std::unordered_map<std::string, int> vocabulary;  // token -> row
  Eigen::MatrixXf matrix;  // |V| x D, rows 0/1 = <root>/<unk>
  int dim = 0;

  int lookup(const std::string& form) const;
  size_t size() const { return static_cast<size_t>(matrix.rows()); }
};

EmbeddingTable load_embeddings(const std::string& path, int dim);
EmbeddingTable parse_embeddings(const std::string& text, int dim);

// Builds a table directly from a vocabulary with zero vectors (used when no
// pre-trained file is supplied).
EmbeddingTable zero_embeddings(const std::vector<std::string>& words, int dim);

}  // namespace scud::parser
