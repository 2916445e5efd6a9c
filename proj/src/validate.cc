#include "scud/validate.h"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

#include "scud/parallel.h"
#include "json.hpp"

namespace scud {

namespace {

const char* severity_name(Severity s) {
  return s == Severity::kError ? "error" : "warning";
}

struct Checker {
  const AnnotatedSentence& s;
  const Tagset& tagset;
  const RuleConfig& rules;
  ValidationReport& report;
  std::string sent_id;

  void add(const std::string& rule, Severity sev, std::optional<NodeId> node,
           std::string message) {
    if (!rules.enabled(rule)) return;
    report.violations.push_back({sent_id, node, rule, sev, std::move(message)});
  }

  void r1_single_root() {
    std::vector<const DepToken*> roots;
    for (const auto& t : s.tokens)
      if (t.head == kRootId) roots.push_back(&t);
    if (roots.size() != 1) {
      add("R1", Severity::kError, std::nullopt,
          "expected exactly one ROOT-headed token, found " +
              std::to_string(roots.size()));
    } else if (roots[0]->deprel->name != "root") {
      add("R1", Severity::kError, roots[0]->id,
          "ROOT-headed token labeled '" + roots[0]->deprel->str() +
              "', expected 'root'");
    }
  }

  void r2_tree() {
    bool partial = s.comment_field("partial") == "yes";
    std::set<NodeId> ids;
    for (const auto& t : s.tokens) ids.insert(t.id);

    bool structural_ok = true;
    for (const auto& t : s.tokens) {
      if (!t.attached()) {
        if (!partial) {
          add("R2", Severity::kError, t.id, "unattached token");
          structural_ok = false;
        }
        continue;
      }
      if (*t.head != kRootId && !ids.count(*t.head)) {
        add("R2", Severity::kError, t.id,
            "head " + t.head->str() + " does not exist");
        structural_ok = false;
      }
    }
    if (!structural_ok) return;

    // Cycle detection over the head chains. 0 = unvisited, 1 = on the current
    // chain, 2 = known to reach ROOT (or an unattached/partial token).
    std::map<NodeId, int> state;
    for (const auto& start : s.tokens) {
      std::vector<NodeId> chain;
      NodeId cur = start.id;
      while (true) {
        if (cur == kRootId) break;
        auto& st = state[cur];
        if (st == 2) break;
        if (st == 1) {
          add("R2", Severity::kError, cur, "cycle in the dependency tree");
          break;
        }
        st = 1;
        chain.push_back(cur);
        const DepToken* tok = s.find(cur);
        if (!tok->attached()) break;  // partial; chain dead-ends harmlessly
        cur = *tok->head;
      }
      for (const auto& id : chain) state[id] = 2;
    }
  }

  void r3_tagset() {
    for (const auto& t : s.tokens)
      if (t.deprel && !tagset.count(t.deprel->name))
        add("R3", Severity::kError, t.id,
            "relation '" + t.deprel->name + "' not in tagset");
  }

  void r4_direction() {
    for (const auto& t : s.tokens) {
      if (!t.deprel) continue;
      const std::string& name = t.deprel->name;
      if (name != "flat" && name != "goeswith") continue;
      if (*t.head == kRootId) continue;  // caught by R1/R2 style checks
      if (!(*t.head < t.id))
        add("R4", Severity::kError, t.id,
            name + " dependent precedes its head " + t.head->str());
    }
  }

  void r5_goeswith_adjacent() {
    // All parts of one split word attach to the first part; the group of
    // surface positions must be contiguous.
    std::map<NodeId, std::vector<int>> groups;
    for (const auto& t : s.tokens)
      if (t.deprel && t.deprel->name == "goeswith" && *t.head != kRootId &&
          !t.id.is_empty_node())
        groups[*t.head].push_back(t.id.major);
    for (auto& [head, majors] : groups) {
      if (head.is_empty_node()) continue;
      majors.push_back(head.major);
      auto [lo, hi] = std::minmax_element(majors.begin(), majors.end());
      if (*hi - *lo + 1 != static_cast<int>(majors.size()))
        add("R5", Severity::kWarning, head,
            "goeswith parts are not adjacent surface tokens");
    }
  }

  void r6_reparandum_precedes() {
    if (!rules.check_reparandum_direction) return;
    for (const auto& t : s.tokens) {
      if (!t.deprel || t.deprel->name != "reparandum") continue;
      if (*t.head == kRootId) continue;
      if (!(t.id < *t.head))
        add("R6", Severity::kWarning, t.id,
            "reparandum dependent does not precede its head " + t.head->str());
    }
  }

  void r7_preterm_final() {
    std::vector<NodeId> preterm;
    for (const auto& t : s.tokens)
      if (t.deprel && t.deprel->name == "preterm") preterm.push_back(t.id);
    if (preterm.empty()) return;
    // Closure: preterm tokens plus their transitive dependents.
    std::set<NodeId> span(preterm.begin(), preterm.end());
    bool grew = true;
    while (grew) {
      grew = false;
      for (const auto& t : s.tokens)
        if (t.head && span.count(*t.head) && !span.count(t.id)) {
          span.insert(t.id);
          grew = true;
        }
    }
    for (const auto& p : preterm) {
      bool final_span = true;
      for (const auto& t : s.tokens)
        if (p < t.id && !span.count(t.id)) final_span = false;
      if (!final_span)
        add("R7", Severity::kWarning, p,
            "preterm outside the utterance-final token span");
    }
  }

  void r8_no_punct() {
    for (const auto& t : s.tokens)
      if (t.deprel && t.deprel->name == "punct")
        add("R8", Severity::kWarning, t.id,
            "punct relation present in a transcript corpus");
  }

  void run() {
    sent_id = s.sent_id();
    r1_single_root();
    r2_tree();
    r3_tagset();
    r4_direction();
    r5_goeswith_adjacent();
    r6_reparandum_precedes();
    r7_preterm_final();
    r8_no_punct();
  }
};

}  // namespace

bool RuleConfig::enabled(const std::string& rule) const {
  return std::find(disabled.begin(), disabled.end(), rule) == disabled.end();
}

size_t ValidationReport::error_count() const {
  size_t n = 0;
  for (const auto& v : violations)
    if (v.severity == Severity::kError) ++n;
  return n;
}

size_t ValidationReport::warning_count() const {
  return violations.size() - error_count();
}

std::vector<std::pair<std::string, size_t>> ValidationReport::counts_by_rule()
    const {
  std::map<std::string, size_t> counts;
  for (const auto& v : violations) ++counts[v.rule];
  return {counts.begin(), counts.end()};
}

ValidationReport validate_sentence(const AnnotatedSentence& s,
                                   const Tagset& tagset,
                                   const RuleConfig& rules) {
  ValidationReport report;
  Checker{s, tagset, rules, report}.run();
  return report;
}

ValidationReport validate_corpus(const Corpus& corpus, const Tagset& tagset,
                                 const RuleConfig& rules, unsigned jobs) {
  std::vector<ValidationReport> parts(corpus.size());
  parallel_for(corpus.size(), jobs, [&](size_t i) {
    parts[i] = validate_sentence(corpus[i], tagset, rules);
  });
  ValidationReport merged;
  for (auto& p : parts)
    merged.violations.insert(merged.violations.end(), p.violations.begin(),
                             p.violations.end());
  std::stable_sort(merged.violations.begin(), merged.violations.end(),
                   [](const Violation& a, const Violation& b) {
                     if (a.sent_id != b.sent_id) return a.sent_id < b.sent_id;
                     if (a.rule != b.rule) return a.rule < b.rule;
                     NodeId an = a.node.value_or(NodeId{-1, -1});
                     NodeId bn = b.node.value_or(NodeId{-1, -1});
                     if (an != bn) return an < bn;
                     return a.message < b.message;
                   });
  return merged;
}

std::string ValidationReport::to_tsv() const {
  std::string out;
  for (const auto& v : violations) {
    out += v.sent_id + "\t" + (v.node ? v.node->str() : "-") + "\t" + v.rule +
           "\t" + severity_name(v.severity) + "\t" + v.message + "\n";
  }
  return out;
}

std::string ValidationReport::to_text() const {
  std::string out = to_tsv();
  out += "# summary\n";
  out += "# errors\t" + std::to_string(error_count()) + "\n";
  out += "# warnings\t" + std::to_string(warning_count()) + "\n";
  for (const auto& [rule, count] : counts_by_rule())
    out += "# " + rule + "\t" + std::to_string(count) + "\n";
  return out;
}

std::string ValidationReport::to_json() const {
  nlohmann::json j;
  j["violations"] = nlohmann::json::array();
  for (const auto& v : violations) {
    nlohmann::json item;
    item["sent_id"] = v.sent_id;
    if (v.node) item["node"] = v.node->str();
    item["rule"] = v.rule;
    item["severity"] = severity_name(v.severity);
    item["message"] = v.message;
    j["violations"].push_back(item);
  }
  j["errors"] = error_count();
  j["warnings"] = warning_count();
  nlohmann::json counts = nlohmann::json::object();
  for (const auto& [rule, count] : counts_by_rule()) counts[rule] = count;
  j["counts"] = counts;
  return j.dump(2) + "\n";
}

}  // namespace scud
