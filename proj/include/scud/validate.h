// Structural and SCUD-specific annotation checks over sentences and corpora.
//
// Rules:
//   R1 (error)   exactly one ROOT-headed token, labeled root
//   R2 (error)   the basic tree is total, acyclic and connected
//   R3 (error)   every deprel name is in the active tagset
//   R4 (error)   flat/goeswith dependents follow their head
//   R5 (warning) goeswith parts form a contiguous surface span
//   R6 (warning) reparandum dependent precedes its head
//   R7 (warning) preterm material is confined to the utterance-final span
//   R8 (warning) punct-labeled tokens present (transcripts carry none)
#pragma once

#include <optional>
#include <string>
#include <vector>

#include "scud/conllu.h"
#include "scud/tagset.h"

namespace scud {

enum class Severity { kError, kWarning };

struct Violation {
  std::string sent_id;
  std::optional<NodeId> node;  // nullopt = sentence-level
  std::string rule;            // "R1".."R8"
  Severity severity = Severity::kError;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  size_t error_count() const;
  size_t warning_count() const;
  bool passed() const { return violations.empty(); }
  std::vector<std::pair<std::string, size_t>> counts_by_rule() const;

  // Line-oriented text: sent_id<TAB>node<TAB>rule<TAB>severity<TAB>message,
  // followed by a summary block. Deterministic.
  std::string to_text() const;
  std::string to_tsv() const;
  std::string to_json() const;
};

struct RuleConfig {
  bool check_reparandum_direction = true;  // R6, configurable off
  std::vector<std::string> disabled;       // rule codes to skip entirely
  bool enabled(const std::string& rule) const;
};

ValidationReport validate_sentence(const AnnotatedSentence& s,
                                   const Tagset& tagset,
                                   const RuleConfig& rules = {});

// Union of per-sentence reports, ordered by (sent_id, rule, node).
ValidationReport validate_corpus(const Corpus& corpus, const Tagset& tagset,
                                 const RuleConfig& rules = {},
                                 unsigned jobs = 1);

}  // namespace scud
