#include "scud/eval.h"

#include <algorithm>
#include <cstdio>
#include <mutex>
#include <set>
#include <stdexcept>

#include "scud/parallel.h"

namespace scud {

namespace {

struct Tally {
  size_t tokens = 0;
  size_t head_ok = 0;
  size_t labeled_ok = 0;
  std::map<std::string, size_t> gold_counts;
  std::map<std::string, size_t> pred_counts;
  std::map<std::string, size_t> correct_counts;
  std::map<std::pair<std::string, std::string>, size_t> confusion;
};

void merge(Tally& into, const Tally& from) {
  into.tokens += from.tokens;
  into.head_ok += from.head_ok;
  into.labeled_ok += from.labeled_ok;
  for (const auto& [k, v] : from.gold_counts) into.gold_counts[k] += v;
  for (const auto& [k, v] : from.pred_counts) into.pred_counts[k] += v;
  for (const auto& [k, v] : from.correct_counts) into.correct_counts[k] += v;
  for (const auto& [k, v] : from.confusion) into.confusion[k] += v;
}

}  // namespace

EvalResult uas_las(const Corpus& gold, const Corpus& pred,
                   const EvalOptions& opts, unsigned jobs) {
  if (gold.size() != pred.size())
    throw std::runtime_error("sentence counts differ: " +
                             std::to_string(gold.size()) + " vs " +
                             std::to_string(pred.size()));
  std::vector<Tally> parts(gold.size());
  parallel_for(gold.size(), jobs, [&](size_t i) {
    const AnnotatedSentence& g = gold[i];
    const AnnotatedSentence& p = pred[i];
    auto where = [&](const std::string& detail) {
      std::string id =
          g.sent_id().empty() ? "#" + std::to_string(i + 1) : g.sent_id();
      return "sentence " + id + ": " + detail;
    };
    if (g.tokens.size() != p.tokens.size())
      throw std::runtime_error(where("token counts differ"));
    Tally t;
    for (size_t k = 0; k < g.tokens.size(); ++k) {
      const DepToken& tg = g.tokens[k];
      const DepToken& tp = p.tokens[k];
      if (tg.id != tp.id || tg.form != tp.form)
        throw std::runtime_error(where("tokenization diverges at " +
                                       tg.id.str()));
      if (tg.id.is_empty_node() && !opts.include_empty) continue;
      if (!tg.attached() || !tp.attached())
        throw std::runtime_error(where("token " + tg.id.str() +
                                       " is unattached"));
      if (opts.exclude_punct && tg.deprel->name == "punct") continue;
      ++t.tokens;
      const std::string& gl = tg.deprel->name;
      const std::string& pl = tp.deprel->name;
      ++t.gold_counts[gl];
      ++t.pred_counts[pl];
      if (*tg.head == *tp.head) {
        ++t.head_ok;
        ++t.confusion[{gl, pl}];
        if (gl == pl) {
          ++t.labeled_ok;
          ++t.correct_counts[gl];
        }
      }
    }
    parts[i] = std::move(t);
  });

  Tally total;
  for (const auto& p : parts) merge(total, p);

  EvalResult result;
  result.token_count = total.tokens;
  if (total.tokens > 0) {
    result.uas = 100.0 * static_cast<double>(total.head_ok) / total.tokens;
    result.las = 100.0 * static_cast<double>(total.labeled_ok) / total.tokens;
  }
  std::set<std::string> tags;
  for (const auto& [k, v] : total.gold_counts) tags.insert(k);
  for (const auto& [k, v] : total.pred_counts) tags.insert(k);
  for (const auto& tag : tags) {
    RelationScore rs;
    rs.tag = tag;
    rs.gold_count = total.gold_counts.count(tag) ? total.gold_counts[tag] : 0;
    rs.pred_count = total.pred_counts.count(tag) ? total.pred_counts[tag] : 0;
    rs.correct = total.correct_counts.count(tag) ? total.correct_counts[tag] : 0;
    if (rs.pred_count)
      rs.precision = static_cast<double>(rs.correct) / rs.pred_count;
    if (rs.gold_count)
      rs.recall = static_cast<double>(rs.correct) / rs.gold_count;
    if (rs.precision + rs.recall > 0)
      rs.f1 = 2 * rs.precision * rs.recall / (rs.precision + rs.recall);
    result.relations.push_back(rs);
  }
  result.confusion = std::move(total.confusion);
  return result;
}

std::string EvalResult::summary() const {
  char buf[128];
  std::snprintf(buf, sizeof(buf), "UAS\t%.2f\nLAS\t%.2f\ntokens\t%zu\n", uas,
                las, token_count);
  return buf;
}

std::string EvalResult::relation_table_tsv() const {
  std::string out = "tag\tgold\tpred\tcorrect\tprecision\trecall\tf1\n";
  char buf[64];
  for (const auto& r : relations) {
    out += r.tag + "\t" + std::to_string(r.gold_count) + "\t" +
           std::to_string(r.pred_count) + "\t" + std::to_string(r.correct);
    std::snprintf(buf, sizeof(buf), "\t%.4f\t%.4f\t%.4f\n", r.precision,
                  r.recall, r.f1);
    out += buf;
  }
  return out;
}

std::string EvalResult::confusion_tsv() const {
  std::string out = "gold\tpred\tcount\n";
  for (const auto& [pair, n] : confusion)
    out += pair.first + "\t" + pair.second + "\t" + std::to_string(n) + "\n";
  return out;
}

}  // namespace scud
