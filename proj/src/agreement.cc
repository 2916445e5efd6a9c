#include "scud/agreement.h"

#include <stdexcept>

#include "scud/parallel.h"

namespace scud {

namespace {

void check_aligned(const AnnotatedSentence& a, const AnnotatedSentence& b,
                   size_t index) {
  auto where = [&](const std::string& detail) {
    std::string id = a.sent_id().empty() ? "#" + std::to_string(index + 1)
                                         : a.sent_id();
    return "sentence " + id + ": " + detail;
  };
  if (a.tokens.size() != b.tokens.size())
    throw std::runtime_error(where("token counts differ (" +
                                   std::to_string(a.tokens.size()) + " vs " +
                                   std::to_string(b.tokens.size()) + ")"));
  for (size_t i = 0; i < a.tokens.size(); ++i) {
    const DepToken& ta = a.tokens[i];
    const DepToken& tb = b.tokens[i];
    if (ta.id != tb.id)
      throw std::runtime_error(where("node ids diverge at " + ta.id.str() +
                                     " vs " + tb.id.str()));
    if (ta.form != tb.form)
      throw std::runtime_error(where("token " + ta.id.str() +
                                     " forms differ ('" + ta.form + "' vs '" +
                                     tb.form + "')"));
  }
}

}  // namespace

AgreementResult attachment_agreement(const Corpus& a, const Corpus& b,
                                     const AgreementOptions& opts,
                                     unsigned jobs) {
  if (a.size() != b.size())
    throw std::runtime_error("sentence counts differ: " +
                             std::to_string(a.size()) + " vs " +
                             std::to_string(b.size()));
  AgreementResult result;
  result.per_sentence.resize(a.size());
  parallel_for(a.size(), jobs, [&](size_t i) {
    check_aligned(a[i], b[i], i);
    SentenceAgreement sa;
    sa.sent_id = a[i].sent_id();
    for (size_t k = 0; k < a[i].tokens.size(); ++k) {
      const DepToken& ta = a[i].tokens[k];
      const DepToken& tb = b[i].tokens[k];
      if (opts.surface_only && ta.id.is_empty_node()) continue;
      if (!ta.attached() && !tb.attached()) continue;
      ++sa.tokens;
      if (ta.attached() && tb.attached() && *ta.head == *tb.head) {
        ++sa.head_match;
        if (ta.deprel->name == tb.deprel->name) ++sa.labeled_match;
      }
    }
    result.per_sentence[i] = sa;
  });
  size_t heads = 0, labeled = 0;
  for (const auto& sa : result.per_sentence) {
    result.token_count += sa.tokens;
    heads += sa.head_match;
    labeled += sa.labeled_match;
  }
  if (result.token_count > 0) {
    result.unlabeled_pct = 100.0 * static_cast<double>(heads) / result.token_count;
    result.labeled_pct = 100.0 * static_cast<double>(labeled) / result.token_count;
  }
  return result;
}

std::string AgreementResult::per_sentence_tsv() const {
  std::string out = "sent_id\ttokens\thead_match\tlabeled_match\n";
  for (const auto& sa : per_sentence)
    out += sa.sent_id + "\t" + std::to_string(sa.tokens) + "\t" +
           std::to_string(sa.head_match) + "\t" +
           std::to_string(sa.labeled_match) + "\n";
  return out;
}

}  // namespace scud
