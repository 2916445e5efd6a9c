#include "doctest.h"
#include "scud/conllu.h"
#include "scud/render.h"

using namespace scud;

namespace {

AnnotatedSentence dogs() {
  Corpus c = parse_conllu(
      "1\ti\t_\tPRON\t_\t_\t2\tnsubj\t_\t_\n"
      "2\tgot\t_\tVERB\t_\t_\t0\troot\t_\t_\n"
      "3\ttwo\t_\tNUM\t_\t_\t4\tnummod\t_\t_\n"
      "4\tdogs\t_\tNOUN\t_\t_\t2\tobj\t_\t_\n");
  return c[0];
}

}  // namespace

TEST_CASE("text tree shows the hierarchy with labels") {
  std::string tree = render_text_tree(dogs());
  CHECK(tree.find("got  [root]") != std::string::npos);
  CHECK(tree.find("  i  [nsubj]") != std::string::npos);
  CHECK(tree.find("  dogs  [obj]") != std::string::npos);
  CHECK(tree.find("    two  [nummod]") != std::string::npos);
}

TEST_CASE("svg output contains every token and arc label") {
  std::string svg = render_svg(dogs());
  CHECK(svg.rfind("<svg", 0) == 0);
  CHECK(svg.find("</svg>") != std::string::npos);
  for (const char* needle : {">i<", ">got<", ">two<", ">dogs<", ">nsubj<",
                             ">root<", ">nummod<", ">obj<"})
    CHECK_MESSAGE(svg.find(needle) != std::string::npos, needle);
  // deterministic
  CHECK(render_svg(dogs()) == svg);
}

TEST_CASE("rendering is robust to empty nodes and unattached tokens") {
  Corpus c = parse_conllu(
      "0.1\tE1.1\t_\tPRON\t_\t_\t1\tnsubj\t_\t_\n"
      "1\tgot\t_\tVERB\t_\t_\t0\troot\t_\t_\n"
      "2\tloose\t_\tNOUN\t_\t_\t_\t_\t_\t_\n");
  std::string tree = render_text_tree(c[0]);
  CHECK(tree.find("E1.1") != std::string::npos);
  CHECK(tree.find("(empty)") != std::string::npos);
  CHECK(tree.find("[unattached]") != std::string::npos);
  std::string svg = render_svg(c[0]);
  CHECK(svg.find(">E1.1<") != std::string::npos);
}
