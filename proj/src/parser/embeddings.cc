#include "scud/parser/embeddings.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scud::parser {

namespace {

std::string lowercase(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}

}  // namespace

int EmbeddingTable::lookup(const std::string& form) const {
  if (auto it = vocabulary.find(form); it != vocabulary.end()) return it->second;
  if (auto it = vocabulary.find(lowercase(form)); it != vocabulary.end())
    return it->second;
  return kUnkRow;
}

EmbeddingTable parse_embeddings(const std::string& text, int dim) {
  if (dim <= 0) throw std::runtime_error("embedding dim must be positive");
  std::vector<std::pair<std::string, std::vector<float>>> entries;
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string token;
    fields >> token;
    std::vector<float> values;
    double v;
    while (fields >> v) values.push_back(static_cast<float>(v));
    if (static_cast<int>(values.size()) != dim || !fields.eof())
      throw std::runtime_error(
          "embedding line " + std::to_string(line_no) + ": expected " +
          std::to_string(dim) + " values, got " + std::to_string(values.size()));
    entries.emplace_back(std::move(token), std::move(values));
  }

  EmbeddingTable table;
  table.dim = dim;
  table.matrix = Eigen::MatrixXf::Zero(static_cast<int>(entries.size()) + 2, dim);
  Eigen::VectorXf mean = Eigen::VectorXf::Zero(dim);
  int row = 2;
  for (auto& [token, values] : entries) {
    if (table.vocabulary.count(token))
      throw std::runtime_error("duplicate embedding token '" + token + "'");
    for (int j = 0; j < dim; ++j) table.matrix(row, j) = values[j];
    mean += table.matrix.row(row).transpose();
    table.vocabulary[token] = row;
    ++row;
  }
  if (!entries.empty()) mean /= static_cast<float>(entries.size());
  table.matrix.row(kUnkRow) = mean.transpose();
  table.vocabulary["<root>"] = kRootRow;
  table.vocabulary["<unk>"] = kUnkRow;
  return table;
}

EmbeddingTable load_embeddings(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open embeddings file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_embeddings(ss.str(), dim);
}

EmbeddingTable zero_embeddings(const std::vector<std::string>& words, int dim) {
  EmbeddingTable table;
  table.dim = dim;
  table.matrix = Eigen::MatrixXf::Zero(static_cast<int>(words.size()) + 2, dim);
  table.vocabulary["<root>"] = kRootRow;
  table.vocabulary["<unk>"] = kUnkRow;
  int row = 2;
  for (const auto& w : words) {
    if (!table.vocabulary.count(w)) table.vocabulary[w] = row++;
  }
  table.matrix.conservativeResize(row, dim);
  return table;
}

}  // namespace scud::parser
