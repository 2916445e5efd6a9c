#include <limits>
#include <sstream>

#include "doctest.h"
#include "scud/parser/checkpoint.h"
#include "scud/parser/trainer.h"
#include "scud/tagset.h"
#include "scud/validate.h"
#include "support/synth.h"

using namespace scud;
using namespace scud::parser;

namespace {

ParserConfig small_config() {
  ParserConfig cfg;
  cfg.embed_dim = 16;
  cfg.hidden_size = 24;
  cfg.layers = 1;
  cfg.arc_size = 32;
  cfg.label_size = 16;
  cfg.dropout = 0.1;
  cfg.word_dropout = 0.0;
  cfg.learning_rate = 4e-3;
  cfg.batch_size = 8;
  cfg.max_epochs = 120;
  cfg.patience = 120;
  cfg.seed = 7;
  return cfg;
}

EmbeddingTable small_embeddings() {
  return parse_embeddings(synth::make_embedding_text(16, 99), 16);
}

double training_uas(const ParserModel& model, const Corpus& corpus) {
  Corpus pred = model.parse(corpus);
  size_t ok = 0, total = 0;
  for (size_t i = 0; i < corpus.size(); ++i)
    for (size_t k = 0; k < corpus[i].tokens.size(); ++k) {
      ++total;
      if (corpus[i].tokens[k].head == pred[i].tokens[k].head) ++ok;
    }
  return 100.0 * static_cast<double>(ok) / static_cast<double>(total);
}

}  // namespace

TEST_CASE("overfit sanity: a small fixture is memorized") {
  Corpus train = synth::make_corpus(24, 61);
  Corpus dev(train.begin(), train.begin() + 8);
  TrainResult r = scud::parser::train(train, dev, small_embeddings(),
                                      small_config(), default_tagset());
  CHECK(training_uas(r.model, train) >= 98.0);
  CHECK(r.log.size() >= 2);
}

TEST_CASE("training is deterministic: identical checkpoint bytes") {
  Corpus train = synth::make_corpus(12, 62);
  Corpus dev(train.begin(), train.begin() + 4);
  ParserConfig cfg = small_config();
  cfg.max_epochs = 5;
  std::ostringstream a, b;
  save_checkpoint(
      scud::parser::train(train, dev, small_embeddings(), cfg, default_tagset())
          .model,
      a);
  save_checkpoint(
      scud::parser::train(train, dev, small_embeddings(), cfg, default_tagset())
          .model,
      b);
  CHECK(a.str() == b.str());
  CHECK(a.str().size() > 1000);
}

TEST_CASE("dev-best keeping: reported best LAS is the max over the log") {
  Corpus train = synth::make_corpus(16, 63);
  Corpus dev = synth::make_corpus(8, 64);
  ParserConfig cfg = small_config();
  cfg.max_epochs = 12;
  TrainResult r =
      scud::parser::train(train, dev, small_embeddings(), cfg, default_tagset());
  double max_las = 0.0;
  for (const auto& e : r.log) max_las = std::max(max_las, e.dev_las);
  CHECK(r.best_dev_las == doctest::Approx(max_las));
  CHECK(r.log[r.best_epoch].dev_las == doctest::Approx(r.best_dev_las));
  CHECK(r.best_dev_las >= r.log.back().dev_las);
}

TEST_CASE("a training label outside the tagset is an error") {
  Corpus train = synth::make_corpus(4, 65);
  train[0].tokens[0].deprel = RelationTag{"mystery", ""};
  CHECK_THROWS_WITH_AS(scud::parser::train(train, train, small_embeddings(),
                                           small_config(), default_tagset()),
                       doctest::Contains("mystery"), std::runtime_error);
}

TEST_CASE("empty corpora are rejected") {
  Corpus train = synth::make_corpus(4, 66);
  CHECK_THROWS(scud::parser::train({}, train, small_embeddings(),
                                   small_config(), default_tagset()));
  CHECK_THROWS(scud::parser::train(train, {}, small_embeddings(),
                                   small_config(), default_tagset()));
}

TEST_CASE("finetune with an infinite threshold returns the checkpoint") {
  Corpus train = synth::make_corpus(10, 67);
  Corpus dev(train.begin(), train.begin() + 4);
  ParserConfig cfg = small_config();
  cfg.max_epochs = 3;
  TrainResult base =
      scud::parser::train(train, dev, small_embeddings(), cfg, default_tagset());

  ParserConfig frozen = base.model.config();
  frozen.finetune_epsilon = std::numeric_limits<double>::infinity();
  ParserModel restart(frozen, base.model.vocab_words(),
                      base.model.label_names());
  restart.net().params() = base.model.net().params();

  TrainResult ft = finetune(restart, train, dev);
  std::ostringstream before, after;
  save_checkpoint(restart, before);
  save_checkpoint(ft.model, after);
  CHECK(before.str() == after.str());
  CHECK(ft.log.size() == 1);  // only the pre-finetune metrics row
}

TEST_CASE("self-finetune does not degrade dev LAS materially") {
  Corpus train = synth::make_corpus(30, 68);
  Corpus dev = synth::make_corpus(10, 69);
  ParserConfig cfg = small_config();
  cfg.max_epochs = 40;
  TrainResult base =
      scud::parser::train(train, dev, small_embeddings(), cfg, default_tagset());
  TrainResult ft = finetune(base.model, train, dev);
  CHECK(ft.best_dev_las >= base.best_dev_las - 0.5);
  CHECK(ft.log.front().dev_las == doctest::Approx(base.best_dev_las));
}

TEST_CASE("finetuning with an unknown label is an error") {
  Corpus train = synth::make_corpus(6, 70);
  Corpus dev(train.begin(), train.begin() + 2);
  ParserConfig cfg = small_config();
  cfg.max_epochs = 2;
  TrainResult base =
      scud::parser::train(train, dev, small_embeddings(), cfg, default_tagset());
  Corpus bad = train;
  bad[0].tokens[0].deprel = RelationTag{"alien", ""};
  CHECK_THROWS_WITH_AS(finetune(base.model, bad, dev),
                       doctest::Contains("alien"), std::runtime_error);
}

TEST_CASE("the training log is a well-formed TSV") {
  Corpus train = synth::make_corpus(6, 71);
  ParserConfig cfg = small_config();
  cfg.max_epochs = 3;
  TrainResult r = scud::parser::train(train, train, small_embeddings(), cfg,
                                      default_tagset());
  std::istringstream in(r.log_tsv());
  std::string line;
  std::getline(in, line);
  CHECK(line == "epoch\ttrain_loss\tdev_loss\tdev_uas\tdev_las");
  size_t rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == r.log.size());
}

TEST_CASE("parse output parses every token with exactly one root") {
  Corpus train = synth::make_corpus(16, 72);
  ParserConfig cfg = small_config();
  cfg.max_epochs = 8;
  TrainResult r = scud::parser::train(train, train, small_embeddings(), cfg,
                                      default_tagset());
  Corpus strip = synth::make_corpus(10, 73);
  for (auto& s : strip)
    for (auto& t : s.tokens) {
      t.head.reset();
      t.deprel.reset();
    }
  Corpus pred = r.model.parse(strip);
  ValidationReport report = validate_corpus(pred, default_tagset());
  CHECK(report.error_count() == 0);
  for (const auto& s : pred) {
    size_t roots = 0;
    for (const auto& t : s.tokens) {
      CHECK(t.attached());
      if (t.head == kRootId) {
        ++roots;
        CHECK(t.deprel->name == "root");
      }
    }
    CHECK(roots == 1);
  }
  // inference determinism
  CHECK(write_conllu(r.model.parse(strip)) == write_conllu(pred));
}
