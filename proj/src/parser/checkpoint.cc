#include "scud/parser/checkpoint.h"

#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

namespace scud::parser {

namespace {

constexpr char kMagic[] = "SCUDPARSE";
constexpr size_t kMagicLen = 9;

void put_bytes(std::ostream& out, const void* data, size_t len) {
  out.write(static_cast<const char*>(data), static_cast<std::streamsize>(len));
}

template <typename V>
void put(std::ostream& out, V value) {
  put_bytes(out, &value, sizeof(V));
}

void put_string(std::ostream& out, const std::string& s) {
  put<uint32_t>(out, static_cast<uint32_t>(s.size()));
  put_bytes(out, s.data(), s.size());
}

void get_bytes(std::istream& in, void* data, size_t len,
               const char* what) {
  in.read(static_cast<char*>(data), static_cast<std::streamsize>(len));
  if (static_cast<size_t>(in.gcount()) != len)
    throw checkpoint_error(CheckpointError::kTruncated,
                           std::string("checkpoint truncated while reading ") +
                               what);
}

template <typename V>
V get(std::istream& in, const char* what) {
  V value;
  get_bytes(in, &value, sizeof(V), what);
  return value;
}

std::string get_string(std::istream& in, const char* what) {
  uint32_t len = get<uint32_t>(in, what);
  if (len > (1u << 24))
    throw checkpoint_error(CheckpointError::kTruncated,
                           std::string("implausible string length for ") + what);
  std::string s(len, '\0');
  if (len) get_bytes(in, s.data(), len, what);
  return s;
}

void put_config(std::ostream& out, const ParserConfig& c) {
  put<int32_t>(out, c.embed_dim);
  put<int32_t>(out, c.pos_embed_dim);
  put<int32_t>(out, c.hidden_size);
  put<int32_t>(out, c.layers);
  put<int32_t>(out, c.arc_size);
  put<int32_t>(out, c.label_size);
  put<double>(out, c.dropout);
  put<double>(out, c.word_dropout);
  put<double>(out, c.learning_rate);
  put<int32_t>(out, c.batch_size);
  put<int32_t>(out, c.max_epochs);
  put<int32_t>(out, c.patience);
  put<double>(out, c.finetune_epsilon);
  put<uint64_t>(out, c.seed);
  put<uint8_t>(out, c.use_gold_pos ? 1 : 0);
  put<uint8_t>(out, c.freeze_pretrained ? 1 : 0);
}

ParserConfig get_config(std::istream& in) {
  ParserConfig c;
  c.embed_dim = get<int32_t>(in, "config");
  c.pos_embed_dim = get<int32_t>(in, "config");
  c.hidden_size = get<int32_t>(in, "config");
  c.layers = get<int32_t>(in, "config");
  c.arc_size = get<int32_t>(in, "config");
  c.label_size = get<int32_t>(in, "config");
  c.dropout = get<double>(in, "config");
  c.word_dropout = get<double>(in, "config");
  c.learning_rate = get<double>(in, "config");
  c.batch_size = get<int32_t>(in, "config");
  c.max_epochs = get<int32_t>(in, "config");
  c.patience = get<int32_t>(in, "config");
  c.finetune_epsilon = get<double>(in, "config");
  c.seed = get<uint64_t>(in, "config");
  c.use_gold_pos = get<uint8_t>(in, "config") != 0;
  c.freeze_pretrained = get<uint8_t>(in, "config") != 0;
  return c;
}

}  // namespace

void save_checkpoint(const ParserModel& model, std::ostream& out) {
  put_bytes(out, kMagic, kMagicLen);
  put<uint32_t>(out, kCheckpointVersion);
  put_config(out, model.config());

  put<uint32_t>(out, static_cast<uint32_t>(model.vocab_words().size()));
  for (const auto& w : model.vocab_words()) put_string(out, w);
  put<uint32_t>(out, static_cast<uint32_t>(model.label_names().size()));
  for (const auto& l : model.label_names()) put_string(out, l);

  const auto blocks = model.net().params().blocks();
  put<uint32_t>(out, static_cast<uint32_t>(blocks.size()));
  for (const auto& b : blocks) {
    put_string(out, b.name);
    const Mat<float>& m = *b.block;
    put<uint32_t>(out, static_cast<uint32_t>(m.rows()));
    put<uint32_t>(out, static_cast<uint32_t>(m.cols()));
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) put<float>(out, m(i, j));
  }
  if (!out)
    throw std::runtime_error("checkpoint write failed");
}

void save_checkpoint(const ParserModel& model, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  save_checkpoint(model, out);
}

ParserModel load_checkpoint(std::istream& in) {
  char magic[kMagicLen];
  get_bytes(in, magic, kMagicLen, "magic");
  if (std::memcmp(magic, kMagic, kMagicLen) != 0)
    throw checkpoint_error(CheckpointError::kBadMagic,
                           "not a parser checkpoint (bad magic)");
  uint32_t version = get<uint32_t>(in, "version");
  if (version != kCheckpointVersion)
    throw checkpoint_error(CheckpointError::kBadVersion,
                           "unsupported checkpoint version " +
                               std::to_string(version));
  ParserConfig cfg = get_config(in);

  uint32_t n_words = get<uint32_t>(in, "vocabulary");
  std::vector<std::string> words;
  words.reserve(n_words);
  for (uint32_t i = 0; i < n_words; ++i)
    words.push_back(get_string(in, "vocabulary"));
  uint32_t n_labels = get<uint32_t>(in, "labels");
  std::vector<std::string> labels;
  labels.reserve(n_labels);
  for (uint32_t i = 0; i < n_labels; ++i)
    labels.push_back(get_string(in, "labels"));

  ParserModel model(cfg, std::move(words), std::move(labels));

  auto blocks = model.net().params().blocks();
  uint32_t n_blocks = get<uint32_t>(in, "block count");
  if (n_blocks != blocks.size())
    throw checkpoint_error(
        CheckpointError::kShapeMismatch,
        "checkpoint has " + std::to_string(n_blocks) + " parameter blocks, " +
            "model expects " + std::to_string(blocks.size()));
  for (auto& b : blocks) {
    std::string name = get_string(in, "block name");
    if (name != b.name)
      throw checkpoint_error(CheckpointError::kShapeMismatch,
                             "unexpected parameter block '" + name +
                                 "' (expected '" + b.name + "')");
    uint32_t rows = get<uint32_t>(in, name.c_str());
    uint32_t cols = get<uint32_t>(in, name.c_str());
    if (rows != static_cast<uint32_t>(b.block->rows()) ||
        cols != static_cast<uint32_t>(b.block->cols()))
      throw checkpoint_error(
          CheckpointError::kShapeMismatch,
          "shape mismatch in block '" + name + "': checkpoint " +
              std::to_string(rows) + "x" + std::to_string(cols) + ", model " +
              std::to_string(b.block->rows()) + "x" +
              std::to_string(b.block->cols()));
    for (uint32_t i = 0; i < rows; ++i)
      for (uint32_t j = 0; j < cols; ++j)
        (*b.block)(i, j) = get<float>(in, name.c_str());
  }
  // Nothing may follow the last block.
  char extra;
  in.read(&extra, 1);
  if (in.gcount() != 0)
    throw checkpoint_error(CheckpointError::kShapeMismatch,
                           "trailing bytes after the last parameter block");
  return model;
}

ParserModel load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open checkpoint " + path);
  return load_checkpoint(in);
}

}  // namespace scud::parser
