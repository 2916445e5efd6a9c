#include <set>

#include "doctest.h"
#include "scud/conllu.h"
#include "scud/tagset.h"
#include "scud/validate.h"
#include "support/synth.h"

using namespace scud;

namespace {

const char* kDataDir = SCUDKIT_DATA_DIR;

Corpus sample() {
  return parse_conllu_file(std::string(kDataDir) + "/sample/sample.conllu");
}

AnnotatedSentence from_text(const char* text) {
  Corpus c = parse_conllu(text);
  REQUIRE(c.size() == 1);
  return c[0];
}

std::set<std::string> error_rules(const ValidationReport& r) {
  std::set<std::string> out;
  for (const auto& v : r.violations)
    if (v.severity == Severity::kError) out.insert(v.rule);
  return out;
}

std::set<std::string> all_rules(const ValidationReport& r) {
  std::set<std::string> out;
  for (const auto& v : r.violations) out.insert(v.rule);
  return out;
}

// Exactly the target rule fires; no other error-severity code does.
void check_single_fault(const AnnotatedSentence& s, const std::string& rule,
                        bool is_error) {
  ValidationReport r = validate_sentence(s, default_tagset());
  CHECK(all_rules(r).count(rule) == 1);
  if (is_error)
    CHECK(error_rules(r) == std::set<std::string>{rule});
  else
    CHECK(error_rules(r).empty());
}

}  // namespace

TEST_CASE("the bundled sample corpus is violation-free") {
  ValidationReport r = validate_corpus(sample(), default_tagset());
  for (const auto& v : r.violations)
    MESSAGE(v.sent_id, " ", v.rule, " ", v.message);
  CHECK(r.passed());
}

TEST_CASE("a single root token passes") {
  auto s = from_text("1\thi\t_\tINTJ\t_\t_\t0\troot\t_\t_\n");
  CHECK(validate_sentence(s, default_tagset()).passed());
}

TEST_CASE("R1: multiple ROOT-headed tokens") {
  check_single_fault(from_text("1\thi\t_\tINTJ\t_\t_\t0\troot\t_\t_\n"
                               "2\tthere\t_\tADV\t_\t_\t0\troot\t_\t_\n"),
                     "R1", true);
}

TEST_CASE("R1: ROOT-headed token not labeled root") {
  check_single_fault(from_text("1\thi\t_\tINTJ\t_\t_\t0\tdep\t_\t_\n"), "R1",
                     true);
}

TEST_CASE("R2: cycle") {
  check_single_fault(from_text("1\tok\t_\tVERB\t_\t_\t0\troot\t_\t_\n"
                               "2\ta\t_\tNOUN\t_\t_\t3\tdep\t_\t_\n"
                               "3\tb\t_\tNOUN\t_\t_\t2\tdep\t_\t_\n"),
                     "R2", true);
}

TEST_CASE("R2: unattached token, and the partial-sentence escape hatch") {
  const char* text =
      "1\tok\t_\tVERB\t_\t_\t0\troot\t_\t_\n"
      "2\tloose\t_\tNOUN\t_\t_\t_\t_\t_\t_\n";
  check_single_fault(from_text(text), "R2", true);

  std::string partial = std::string("# partial = yes\n") + text;
  CHECK(validate_sentence(from_text(partial.c_str()), default_tagset()).passed());
}

TEST_CASE("R3: relation outside the tagset") {
  check_single_fault(from_text("1\tok\t_\tVERB\t_\t_\t0\troot\t_\t_\n"
                               "2\tword\t_\tNOUN\t_\t_\t1\tfoo\t_\t_\n"),
                     "R3", true);
}

TEST_CASE("R3: subtypes are checked on the primary name") {
  auto ok = from_text("1\tok\t_\tVERB\t_\t_\t0\troot\t_\t_\n"
                      "2\tword\t_\tNOUN\t_\t_\t1\tnmod:poss\t_\t_\n");
  CHECK(validate_sentence(ok, default_tagset()).passed());
}

TEST_CASE("R4: flat dependent precedes its head") {
  check_single_fault(from_text("1\tthe\t_\tDET\t_\t_\t2\tflat\t_\t_\n"
                               "2\tthe\t_\tDET\t_\t_\t3\tdet\t_\t_\n"
                               "3\tdog\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"),
                     "R4", true);
}

TEST_CASE("R4: goeswith dependent precedes its head") {
  check_single_fault(from_text("1\ts\t_\tX\t_\t_\t2\tgoeswith\t_\t_\n"
                               "2\tdog\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"),
                     "R4", true);
}

TEST_CASE("R5: goeswith parts must be adjacent") {
  check_single_fault(from_text("1\tdog\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"
                               "2\tnow\t_\tADV\t_\t_\t1\tadvmod\t_\t_\n"
                               "3\ts\t_\tX\t_\t_\t1\tgoeswith\t_\t_\n"),
                     "R5", false);
}

TEST_CASE("R6: reparandum dependent must precede its head") {
  check_single_fault(from_text("1\tname\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"
                               "2\tyou\t_\tPRON\t_\t_\t1\treparandum\t_\t_\n"),
                     "R6", false);
  // configurable off
  RuleConfig rules;
  rules.check_reparandum_direction = false;
  auto s = from_text("1\tname\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"
                     "2\tyou\t_\tPRON\t_\t_\t1\treparandum\t_\t_\n");
  CHECK(validate_sentence(s, default_tagset(), rules).passed());
}

TEST_CASE("R7: preterm confined to the utterance-final span") {
  check_single_fault(from_text("1\tuh\t_\tINTJ\t_\t_\t3\tpreterm\t_\t_\n"
                               "2\tmy\t_\tPRON\t_\t_\t3\tnmod\t_\t_\n"
                               "3\tname\t_\tNOUN\t_\t_\t0\troot\t_\t_\n"),
                     "R7", false);
  // trailing preterm span passes
  auto ok = from_text("1\ti\t_\tPRON\t_\t_\t2\tnsubj\t_\t_\n"
                      "2\tthink\t_\tVERB\t_\t_\t0\troot\t_\t_\n"
                      "3\tthat\t_\tSCONJ\t_\t_\t2\tpreterm\t_\t_\n"
                      "4\twe\t_\tPRON\t_\t_\t2\tpreterm\t_\t_\n");
  CHECK(validate_sentence(ok, default_tagset()).passed());
}

TEST_CASE("R8: punct flagged in transcript corpora") {
  check_single_fault(from_text("1\tok\t_\tVERB\t_\t_\t0\troot\t_\t_\n"
                               "2\t.\t_\tPUNCT\t_\t_\t1\tpunct\t_\t_\n"),
                     "R8", false);
}

TEST_CASE("rules can be disabled selectively") {
  RuleConfig rules;
  rules.disabled = {"R8"};
  auto s = from_text("1\tok\t_\tVERB\t_\t_\t0\troot\t_\t_\n"
                     "2\t.\t_\tPUNCT\t_\t_\t1\tpunct\t_\t_\n");
  CHECK(validate_sentence(s, default_tagset(), rules).passed());
}

TEST_CASE("empty corpus yields an empty report") {
  CHECK(validate_corpus({}, default_tagset()).passed());
}

TEST_CASE("corpus with k seeded faults reports exactly k errors") {
  Corpus corpus = synth::make_corpus(30, 11);
  size_t k = 0;
  for (size_t i = 0; i < corpus.size(); i += 7) {
    // never the root token: relabeling it would trip R1 as well
    REQUIRE(corpus[i].tokens.front().deprel->name != "root");
    corpus[i].tokens.front().deprel = RelationTag{"nonsense", ""};
    ++k;
  }
  ValidationReport r = validate_corpus(corpus, default_tagset());
  CHECK(r.error_count() == k);
}

TEST_CASE("error set of R1-R4 is stable under materialization") {
  const char* texts[] = {
      // valid with an empty node
      "0.1\tE1.1\t_\tPRON\t_\t_\t1\tnsubj\t_\t_\n"
      "1\tgot\t_\tVERB\t_\t_\t0\troot\t_\t_\n"
      "2\tdogs\t_\tNOUN\t_\t_\t1\tobj\t_\t_\n",
      // cycle plus empty node
      "0.1\tE1.1\t_\tPRON\t_\t_\t1\tnsubj\t_\t_\n"
      "1\tgot\t_\tVERB\t_\t_\t0\troot\t_\t_\n"
      "2\ta\t_\tNOUN\t_\t_\t3\tdep\t_\t_\n"
      "3\tb\t_\tNOUN\t_\t_\t2\tdep\t_\t_\n",
      // bad label on the empty node itself
      "0.1\tE1.1\t_\tPRON\t_\t_\t1\tzzz\t_\t_\n"
      "1\tgot\t_\tVERB\t_\t_\t0\troot\t_\t_\n",
  };
  for (const char* text : texts) {
    auto s = from_text(text);
    auto before = error_rules(validate_sentence(s, default_tagset()));
    auto after =
        error_rules(validate_sentence(materialize_empty_nodes(s), default_tagset()));
    CHECK(before == after);
  }
}

TEST_CASE("reports are deterministic and ordered") {
  Corpus corpus = sample();
  corpus[2].tokens[0].deprel = RelationTag{"zzz", ""};
  corpus[5].tokens[0].deprel = RelationTag{"yyy", ""};
  ValidationReport a = validate_corpus(corpus, default_tagset(), {}, 1);
  ValidationReport b = validate_corpus(corpus, default_tagset(), {}, 4);
  CHECK(a.to_text() == b.to_text());
  CHECK(a.to_json() == b.to_json());
  REQUIRE(a.violations.size() == 2);
  CHECK(a.violations[0].sent_id < a.violations[1].sent_id);
}

TEST_CASE("tagset file loading") {
  Tagset t = load_tagset(std::string(kDataDir) + "/scud_tagset.txt");
  CHECK(t.size() == 38);
  CHECK(t.count("preterm") == 1);
  CHECK(t.count("root") == 1);
  CHECK(t == default_tagset());
}
