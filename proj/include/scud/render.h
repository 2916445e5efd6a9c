// Static visualizations of one dependency-annotated sentence.
#pragma once

#include <string>

#include "scud/conllu.h"

namespace scud {

// Indented tree, one node per line: "form  [deprel]".
std::string render_text_tree(const AnnotatedSentence& s);

// Arc diagram: tokens on a baseline, labeled arcs from head to dependent.
std::string render_svg(const AnnotatedSentence& s);

}  // namespace scud
