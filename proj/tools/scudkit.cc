// scudkit: treebank toolkit for dependency parsing of spoken-dialog
// transcripts. Subcommands wrap the library modules; see --help per command.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"

#include "scud/agreement.h"
#include "scud/augment.h"
#include "scud/conllu.h"
#include "scud/eval.h"
#include "scud/parser/checkpoint.h"
#include "scud/parser/trainer.h"
#include "scud/render.h"
#include "scud/stats.h"
#include "scud/tagset.h"
#include "scud/validate.h"

namespace {

using namespace scud;

struct GlobalOpts {
  std::string tagset_path;
  std::string format = "text";
  unsigned jobs = 1;
};

Corpus read_corpus(const std::string& path) { return parse_conllu_file(path); }

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << text;
}

// Flat "key = value" parser hyperparameter file; CLI flags override it.
void apply_parser_config_file(parser::ParserConfig& cfg,
                              const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config " + path);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw std::runtime_error("config line " + std::to_string(line_no) +
                                 ": expected key = value");
      continue;
    }
    auto trim = [](std::string v) {
      size_t b = v.find_first_not_of(" \t\r");
      size_t e = v.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key == "embed_dim") cfg.embed_dim = std::stoi(value);
    else if (key == "pos_embed_dim") cfg.pos_embed_dim = std::stoi(value);
    else if (key == "hidden_size") cfg.hidden_size = std::stoi(value);
    else if (key == "layers") cfg.layers = std::stoi(value);
    else if (key == "arc_size") cfg.arc_size = std::stoi(value);
    else if (key == "label_size") cfg.label_size = std::stoi(value);
    else if (key == "dropout") cfg.dropout = std::stod(value);
    else if (key == "word_dropout") cfg.word_dropout = std::stod(value);
    else if (key == "learning_rate") cfg.learning_rate = std::stod(value);
    else if (key == "batch_size") cfg.batch_size = std::stoi(value);
    else if (key == "max_epochs") cfg.max_epochs = std::stoi(value);
    else if (key == "patience") cfg.patience = std::stoi(value);
    else if (key == "finetune_epsilon") cfg.finetune_epsilon = std::stod(value);
    else if (key == "seed") cfg.seed = std::stoull(value);
    else if (key == "use_gold_pos") cfg.use_gold_pos = value == "true" || value == "1";
    else if (key == "freeze_pretrained")
      cfg.freeze_pretrained = value == "true" || value == "1";
    else
      throw std::runtime_error("config line " + std::to_string(line_no) +
                               ": unknown key '" + key + "'");
  }
}

int run(int argc, char** argv) {
  CLI::App app{"scudkit: treebank toolkit for spoken-dialog dependency parsing"};
  app.require_subcommand(1);
  GlobalOpts g;

  // ---- validate ----
  auto* validate_cmd =
      app.add_subcommand("validate", "check corpora for annotation violations");
  std::vector<std::string> validate_files;
  bool strict = false;
  RuleConfig rules;
  bool no_r6 = false;
  validate_cmd->add_option("files", validate_files, "CoNLL-U files")->required();
  validate_cmd->add_flag("--strict", strict,
                         "exit 1 when error-severity violations are found");
  validate_cmd->add_option("--disable", rules.disabled,
                           "rule codes to skip (repeatable, e.g. R8)");
  validate_cmd->add_flag("--no-reparandum-order", no_r6,
                         "do not check that reparandum precedes its head (R6)");
  validate_cmd->add_option("--tagset", g.tagset_path, "tagset definition file");
  validate_cmd->add_option("--format", g.format, "text, tsv or json");
  validate_cmd->add_option("--jobs", g.jobs, "parallel sentence workers");

  // ---- stats ----
  auto* stats_cmd = app.add_subcommand("stats", "corpus statistics");
  std::vector<std::string> stats_files;
  bool stats_lengths = false, stats_coverage = false;
  stats_cmd->add_option("files", stats_files, "CoNLL-U files")->required();
  stats_cmd->add_flag("--lengths", stats_lengths,
                      "sentence length histogram instead of relation table");
  stats_cmd->add_flag("--coverage", stats_coverage,
                      "tagset coverage instead of relation table");
  stats_cmd->add_option("--tagset", g.tagset_path, "tagset definition file");
  stats_cmd->add_option("--format", g.format, "text or tsv");
  stats_cmd->add_option("--jobs", g.jobs, "parallel sentence workers");

  // ---- compare ----
  auto* compare_cmd =
      app.add_subcommand("compare", "side-by-side relation distributions");
  std::string cmp_a, cmp_b, cmp_name_a = "A", cmp_name_b = "B";
  size_t top_k = 10;
  compare_cmd->add_option("corpus_a", cmp_a, "first corpus")->required();
  compare_cmd->add_option("corpus_b", cmp_b, "second corpus")->required();
  compare_cmd->add_option("--top-k", top_k, "rows per corpus (default 10)");
  compare_cmd->add_option("--name-a", cmp_name_a, "column header for corpus A");
  compare_cmd->add_option("--name-b", cmp_name_b, "column header for corpus B");
  compare_cmd->add_option("--format", g.format, "text or tsv");

  // ---- agree ----
  auto* agree_cmd =
      app.add_subcommand("agree", "inter-annotator attachment agreement");
  std::string agree_a, agree_b;
  bool surface_only = false, per_sentence = false;
  agree_cmd->add_option("corpus_a", agree_a, "first annotation pass")->required();
  agree_cmd->add_option("corpus_b", agree_b, "second annotation pass")->required();
  agree_cmd->add_flag("--surface-only", surface_only, "exclude empty nodes");
  agree_cmd->add_flag("--per-sentence", per_sentence,
                      "also dump a per-sentence TSV breakdown");
  agree_cmd->add_option("--jobs", g.jobs, "parallel sentence workers");

  // ---- augment ----
  auto* augment_cmd =
      app.add_subcommand("augment", "inject speech noise into a clean treebank (precedence: CLI flag > --config file > built-in default)");
  std::string aug_in, aug_out, aug_config;
  std::optional<uint64_t> aug_seed;
  std::optional<double> r_split, r_drop, r_trunc, r_stutter, r_correct, r_filler;
  augment_cmd->add_option("input", aug_in, "clean CoNLL-U input")->required();
  augment_cmd->add_option("output", aug_out, "augmented CoNLL-U output")
      ->required();
  augment_cmd->add_option("--config", aug_config, "key = value rate file");
  augment_cmd->add_option("--seed", aug_seed, "random seed (default 42)");
  augment_cmd->add_option("--word-split", r_split, "goeswith split rate");
  augment_cmd->add_option("--word-drop", r_drop, "empty-node drop rate");
  augment_cmd->add_option("--preterm-truncate", r_trunc, "truncation rate");
  augment_cmd->add_option("--stutter", r_stutter, "flat stutter rate");
  augment_cmd->add_option("--self-correct", r_correct, "reparandum rate");
  augment_cmd->add_option("--filler", r_filler, "discourse filler rate");
  augment_cmd->add_option("--jobs", g.jobs, "parallel sentence workers");

  // ---- train ----
  auto* train_cmd = app.add_subcommand("train", "train a parser from scratch (precedence: CLI flag > --config file > built-in default)");
  std::string tr_train, tr_dev, tr_embed, tr_out, tr_config, tr_log;
  parser::ParserConfig pc;
  std::optional<uint64_t> tr_seed;
  std::optional<int> tr_epochs, tr_batch, tr_hidden, tr_layers, tr_dim;
  std::optional<double> tr_lr, tr_dropout;
  train_cmd->add_option("--train", tr_train, "training CoNLL-U")->required();
  train_cmd->add_option("--dev", tr_dev, "development CoNLL-U")->required();
  train_cmd->add_option("--embeddings", tr_embed, "pre-trained embedding file")
      ->required();
  train_cmd->add_option("--out", tr_out, "checkpoint output path")->required();
  train_cmd->add_option("--config", tr_config, "key = value hyperparameters");
  train_cmd->add_option("--log", tr_log, "training log TSV path");
  train_cmd->add_option("--tagset", g.tagset_path, "tagset definition file");
  train_cmd->add_option("--seed", tr_seed, "random seed (default 42)");
  train_cmd->add_option("--dim", tr_dim, "embedding dimension");
  train_cmd->add_option("--epochs", tr_epochs, "max training epochs");
  train_cmd->add_option("--batch", tr_batch, "sentences per batch");
  train_cmd->add_option("--hidden", tr_hidden, "encoder hidden size");
  train_cmd->add_option("--layers", tr_layers, "encoder layers");
  train_cmd->add_option("--lr", tr_lr, "learning rate");
  train_cmd->add_option("--dropout", tr_dropout, "dropout rate");

  // ---- finetune ----
  auto* ft_cmd = app.add_subcommand(
      "finetune", "resume training from a checkpoint on new data");
  std::string ft_model, ft_train, ft_dev, ft_out, ft_log;
  std::optional<double> ft_epsilon;
  ft_cmd->add_option("--model", ft_model, "checkpoint to start from")->required();
  ft_cmd->add_option("--train", ft_train, "fine-tuning CoNLL-U")->required();
  ft_cmd->add_option("--dev", ft_dev, "development CoNLL-U")->required();
  ft_cmd->add_option("--out", ft_out, "checkpoint output path")->required();
  ft_cmd->add_option("--log", ft_log, "training log TSV path");
  ft_cmd->add_option("--epsilon", ft_epsilon,
                     "dev-loss stabilization threshold (default 0.001)");

  // ---- parse ----
  auto* parse_cmd = app.add_subcommand("parse", "parse sentences with a model");
  std::string p_model, p_in, p_out;
  parse_cmd->add_option("--model", p_model, "checkpoint")->required();
  parse_cmd->add_option("input", p_in, "CoNLL-U input (annotations ignored)")
      ->required();
  parse_cmd->add_option("output", p_out, "CoNLL-U output")->required();
  parse_cmd->add_option("--jobs", g.jobs, "parallel sentence workers");

  // ---- eval ----
  auto* eval_cmd = app.add_subcommand("eval", "attachment-score evaluation");
  std::string e_gold, e_pred;
  bool e_nopunct = false, e_empty = false, e_rel = false, e_conf = false;
  eval_cmd->add_option("gold", e_gold, "gold CoNLL-U")->required();
  eval_cmd->add_option("pred", e_pred, "predicted CoNLL-U")->required();
  eval_cmd->add_flag("--exclude-punct", e_nopunct,
                     "drop gold-punct tokens from scoring");
  eval_cmd->add_flag("--include-empty", e_empty, "also score empty nodes");
  eval_cmd->add_flag("--relations", e_rel, "per-relation precision/recall/F1");
  eval_cmd->add_flag("--confusion", e_conf, "relation confusion counts");
  eval_cmd->add_option("--jobs", g.jobs, "parallel sentence workers");

  // ---- render ----
  auto* render_cmd =
      app.add_subcommand("render", "draw one sentence as a tree diagram");
  std::string rd_in, rd_out, rd_sent_id;
  size_t rd_index = 1;
  bool rd_svg = false;
  render_cmd->add_option("input", rd_in, "CoNLL-U input")->required();
  render_cmd->add_option("--sent-id", rd_sent_id, "select sentence by id");
  render_cmd->add_option("--index", rd_index,
                         "select sentence by 1-based position (default 1)");
  render_cmd->add_flag("--svg", rd_svg, "emit SVG instead of text");
  render_cmd->add_option("-o,--out", rd_out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);  // prints help or the usage error
    return code == 0 ? 0 : 2;
  }

  if (*validate_cmd) {
    Tagset tagset = resolve_tagset(g.tagset_path);
    rules.check_reparandum_direction = !no_r6;
    Corpus corpus;
    for (const auto& f : validate_files) {
      Corpus part = read_corpus(f);
      corpus.insert(corpus.end(), part.begin(), part.end());
    }
    ValidationReport report = validate_corpus(corpus, tagset, rules, g.jobs);
    if (g.format == "json")
      std::cout << report.to_json();
    else if (g.format == "tsv")
      std::cout << report.to_tsv();
    else
      std::cout << report.to_text();
    return (strict && report.error_count() > 0) ? 1 : 0;
  }

  if (*stats_cmd) {
    Corpus corpus;
    for (const auto& f : stats_files) {
      Corpus part = read_corpus(f);
      corpus.insert(corpus.end(), part.begin(), part.end());
    }
    bool tsv = g.format == "tsv";
    if (stats_lengths)
      std::cout << render_lengths(length_histogram(corpus), tsv);
    else if (stats_coverage)
      std::cout << render_coverage(
          tagset_coverage(corpus, resolve_tagset(g.tagset_path)), tsv);
    else
      std::cout << render_frequencies(relation_frequencies(corpus, g.jobs), tsv);
    return 0;
  }

  if (*compare_cmd) {
    std::cout << compare_distributions(read_corpus(cmp_a), read_corpus(cmp_b),
                                       top_k, cmp_name_a, cmp_name_b,
                                       g.format == "tsv");
    return 0;
  }

  if (*agree_cmd) {
    AgreementOptions opts;
    opts.surface_only = surface_only;
    AgreementResult r =
        attachment_agreement(read_corpus(agree_a), read_corpus(agree_b), opts,
                             g.jobs);
    std::printf("unlabeled\t%.1f\nlabeled\t%.1f\ntokens\t%zu\n", r.unlabeled_pct,
                r.labeled_pct, r.token_count);
    if (per_sentence) std::cout << r.per_sentence_tsv();
    return 0;
  }

  if (*augment_cmd) {
    AugmentConfig cfg = aug_config.empty() ? AugmentConfig::defaults()
                                           : AugmentConfig::from_file(aug_config);
    if (aug_seed) cfg.seed = *aug_seed;
    if (r_split) cfg.word_split = *r_split;
    if (r_drop) cfg.word_drop = *r_drop;
    if (r_trunc) cfg.preterm_truncate = *r_trunc;
    if (r_stutter) cfg.stutter = *r_stutter;
    if (r_correct) cfg.self_correct = *r_correct;
    if (r_filler) cfg.filler = *r_filler;
    cfg.check();
    Corpus out = augment_corpus(read_corpus(aug_in), cfg, g.jobs);
    write_conllu_file(aug_out, out);
    return 0;
  }

  if (*train_cmd) {
    if (!tr_config.empty()) apply_parser_config_file(pc, tr_config);
    if (tr_seed) pc.seed = *tr_seed;
    if (tr_dim) pc.embed_dim = *tr_dim;
    if (tr_epochs) pc.max_epochs = *tr_epochs;
    if (tr_batch) pc.batch_size = *tr_batch;
    if (tr_hidden) pc.hidden_size = *tr_hidden;
    if (tr_layers) pc.layers = *tr_layers;
    if (tr_lr) pc.learning_rate = *tr_lr;
    if (tr_dropout) pc.dropout = *tr_dropout;
    Tagset tagset = resolve_tagset(g.tagset_path);
    auto embeddings = parser::load_embeddings(tr_embed, pc.embed_dim);
    auto result = parser::train(read_corpus(tr_train), read_corpus(tr_dev),
                                embeddings, pc, tagset);
    parser::save_checkpoint(result.model, tr_out);
    if (!tr_log.empty()) write_text(tr_log, result.log_tsv());
    std::printf("best_epoch\t%d\nbest_dev_las\t%.2f\n", result.best_epoch,
                result.best_dev_las);
    return 0;
  }

  if (*ft_cmd) {
    parser::ParserModel base = parser::load_checkpoint(ft_model);
    if (ft_epsilon) {
      // Identical hyperparameters apart from the explicit stop threshold.
      parser::ParserConfig cfg = base.config();
      cfg.finetune_epsilon = *ft_epsilon;
      parser::ParserModel adjusted(cfg, base.vocab_words(), base.label_names());
      adjusted.net().params() = base.net().params();
      base = std::move(adjusted);
    }
    auto result =
        parser::finetune(base, read_corpus(ft_train), read_corpus(ft_dev));
    parser::save_checkpoint(result.model, ft_out);
    if (!ft_log.empty()) write_text(ft_log, result.log_tsv());
    const auto& pre = result.log.front();
    const auto& post = result.log[result.best_epoch];
    std::printf("pre_dev_uas\t%.2f\npre_dev_las\t%.2f\n", pre.dev_uas,
                pre.dev_las);
    std::printf("post_dev_uas\t%.2f\npost_dev_las\t%.2f\n", post.dev_uas,
                post.dev_las);
    return 0;
  }

  if (*parse_cmd) {
    parser::ParserModel model = parser::load_checkpoint(p_model);
    write_conllu_file(p_out, model.parse(read_corpus(p_in), g.jobs));
    return 0;
  }

  if (*eval_cmd) {
    EvalOptions opts;
    opts.exclude_punct = e_nopunct;
    opts.include_empty = e_empty;
    EvalResult r = uas_las(read_corpus(e_gold), read_corpus(e_pred), opts,
                           g.jobs);
    std::cout << r.summary();
    if (e_rel) std::cout << r.relation_table_tsv();
    if (e_conf) std::cout << r.confusion_tsv();
    return 0;
  }

  if (*render_cmd) {
    Corpus corpus = read_corpus(rd_in);
    const AnnotatedSentence* chosen = nullptr;
    if (!rd_sent_id.empty()) {
      for (const auto& s : corpus)
        if (s.sent_id() == rd_sent_id) chosen = &s;
      if (!chosen)
        throw std::runtime_error("no sentence with sent_id '" + rd_sent_id + "'");
    } else {
      if (rd_index < 1 || rd_index > corpus.size())
        throw std::runtime_error("sentence index out of range");
      chosen = &corpus[rd_index - 1];
    }
    write_text(rd_out, rd_svg ? render_svg(*chosen) : render_text_tree(*chosen));
    return 0;
  }

  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const std::exception& e) {
    std::cerr << "scudkit: " << e.what() << "\n";
    return 2;
  }
}
