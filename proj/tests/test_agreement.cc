#include "doctest.h"
#include "scud/agreement.h"
#include "scud/rng.h"
#include "scud/conllu.h"
#include "support/synth.h"

using namespace scud;

TEST_CASE("a corpus agrees with itself at 100/100") {
  Corpus c = synth::make_corpus(25, 21);
  AgreementResult r = attachment_agreement(c, c);
  CHECK(r.unlabeled_pct == doctest::Approx(100.0));
  CHECK(r.labeled_pct == doctest::Approx(100.0));
  CHECK(r.token_count > 0);
}

TEST_CASE("hand-counted fixture: 10 tokens, 2 head edits, 1 label edit") {
  // Two 5-token sentences = 10 attached tokens.
  Corpus a = parse_conllu(
      "1\ti\t_\tPRON\t_\t_\t2\tnsubj\t_\t_\n"
      "2\tlike\t_\tVERB\t_\t_\t0\troot\t_\t_\n"
      "3\tthe\t_\tDET\t_\t_\t5\tdet\t_\t_\n"
      "4\tbig\t_\tADJ\t_\t_\t5\tamod\t_\t_\n"
      "5\tdog\t_\tNOUN\t_\t_\t2\tobj\t_\t_\n\n"
      "1\twe\t_\tPRON\t_\t_\t2\tnsubj\t_\t_\n"
      "2\twent\t_\tVERB\t_\t_\t0\troot\t_\t_\n"
      "3\tto\t_\tADP\t_\t_\t5\tcase\t_\t_\n"
      "4\tthe\t_\tDET\t_\t_\t5\tdet\t_\t_\n"
      "5\tstore\t_\tNOUN\t_\t_\t2\tobl\t_\t_\n");
  Corpus b = a;
  // two head edits
  b[0].tokens[2].head = NodeId{2, 0};   // the -> like
  b[1].tokens[2].head = NodeId{2, 0};   // to -> went
  // one additional label-only edit
  b[0].tokens[4].deprel = RelationTag{"obl", ""};

  AgreementResult r = attachment_agreement(a, b);
  CHECK(r.token_count == 10);
  CHECK(r.unlabeled_pct == doctest::Approx(80.0));
  CHECK(r.labeled_pct == doctest::Approx(70.0));
}

TEST_CASE("agreement is symmetric") {
  Corpus a = synth::make_corpus(20, 22);
  Corpus b = a;
  CounterRng rng(7, 0);
  for (auto& s : b)
    for (auto& t : s.tokens)
      if (rng.next_unit() < 0.3 && t.head && *t.head != kRootId)
        t.deprel = RelationTag{"dep", ""};
  AgreementResult ab = attachment_agreement(a, b);
  AgreementResult ba = attachment_agreement(b, a);
  CHECK(ab.unlabeled_pct == ba.unlabeled_pct);
  CHECK(ab.labeled_pct == ba.labeled_pct);
  CHECK(ab.token_count == ba.token_count);
}

TEST_CASE("perturbation exactness: k of N head changes") {
  Corpus a = synth::make_corpus(30, 23);
  size_t total = 0;
  for (const auto& s : a) total += s.tokens.size();

  Corpus b = a;
  // Redirect the head of the first token of every third sentence to another
  // token (never its own, never its current head).
  size_t k = 0;
  for (size_t i = 0; i < b.size(); i += 3) {
    auto& tok = b[i].tokens[0];
    int n = static_cast<int>(b[i].tokens.size());
    for (int cand = 0; cand <= n; ++cand) {
      NodeId id{cand, 0};
      if (id == tok.id || tok.head == id) continue;
      tok.head = id;
      if (*tok.deprel == RelationTag{"root", ""})
        tok.deprel = RelationTag{"dep", ""};
      ++k;
      break;
    }
  }
  REQUIRE(k > 0);
  AgreementResult r = attachment_agreement(a, b);
  CHECK(r.token_count == total);
  CHECK(r.unlabeled_pct ==
        doctest::Approx(100.0 * static_cast<double>(total - k) / total));
}

TEST_CASE("label-only changes never reduce unlabeled agreement") {
  Corpus a = synth::make_corpus(15, 24);
  Corpus b = a;
  for (auto& s : b)
    for (auto& t : s.tokens)
      if (t.deprel && t.deprel->name == "det") t.deprel = RelationTag{"dep", ""};
  AgreementResult r = attachment_agreement(a, b);
  CHECK(r.unlabeled_pct == doctest::Approx(100.0));
  CHECK(r.labeled_pct < 100.0);
}

TEST_CASE("subtypes are ignored in the labeled match") {
  Corpus a = parse_conllu(
      "1\ttop\t_\tPROPN\t_\t_\t0\troot\t_\t_\n"
      "2\tgun\t_\tPROPN\t_\t_\t1\tflat\t_\t_\n");
  Corpus b = a;
  b[0].tokens[1].deprel = RelationTag{"flat", "foreign"};
  AgreementResult r = attachment_agreement(a, b);
  CHECK(r.labeled_pct == doctest::Approx(100.0));
}

TEST_CASE("misalignment errors identify the first divergence") {
  Corpus a = parse_conllu("1\thi\t_\tINTJ\t_\t_\t0\troot\t_\t_\n");
  Corpus b = parse_conllu("1\tbye\t_\tINTJ\t_\t_\t0\troot\t_\t_\n");
  CHECK_THROWS_WITH_AS(attachment_agreement(a, b),
                       doctest::Contains("forms differ"), std::runtime_error);
  Corpus c;
  CHECK_THROWS_WITH_AS(attachment_agreement(a, c),
                       doctest::Contains("sentence counts differ"),
                       std::runtime_error);
}

TEST_CASE("surface-only mode excludes empty nodes") {
  Corpus a = parse_conllu(
      "0.1\tE1.1\t_\tPRON\t_\t_\t1\tnsubj\t_\t_\n"
      "1\tgot\t_\tVERB\t_\t_\t0\troot\t_\t_\n"
      "2\tdogs\t_\tNOUN\t_\t_\t1\tobj\t_\t_\n");
  Corpus b = a;
  b[0].tokens[0].head = NodeId{2, 0};  // move the empty node's head
  AgreementOptions surface;
  surface.surface_only = true;
  CHECK(attachment_agreement(a, b).unlabeled_pct < 100.0);
  CHECK(attachment_agreement(a, b, surface).unlabeled_pct ==
        doctest::Approx(100.0));
  CHECK(attachment_agreement(a, b, surface).token_count == 2);
}
