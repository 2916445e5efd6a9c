#include "scud/render.h"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <map>
#include <vector>

namespace scud {

std::string render_text_tree(const AnnotatedSentence& s) {
  std::map<NodeId, std::vector<NodeId>> children;
  std::vector<NodeId> roots, loose;
  for (const auto& t : s.tokens) {
    if (!t.head)
      loose.push_back(t.id);
    else if (*t.head == kRootId)
      roots.push_back(t.id);
    else
      children[*t.head].push_back(t.id);
  }
  std::string out;
  std::function<void(NodeId, int)> walk = [&](NodeId id, int depth) {
    const DepToken* t = s.find(id);
    if (!t) return;
    out.append(static_cast<size_t>(depth) * 2, ' ');
    out += t->form;
    out += "  [";
    out += t->deprel ? t->deprel->str() : "-";
    out += "]";
    if (t->id.is_empty_node()) out += "  (empty)";
    out += '\n';
    for (const auto& c : children[id]) walk(c, depth + 1);
  };
  for (const auto& r : roots) walk(r, 0);
  for (const auto& l : loose) {
    out += s.find(l)->form;
    out += "  [unattached]\n";
  }
  return out;
}

std::string render_svg(const AnnotatedSentence& s) {
  const int step = 90;
  const int margin = 40;
  const int baseline = 240;
  std::vector<const DepToken*> nodes;
  for (const auto& t : s.tokens) nodes.push_back(&t);
  std::map<NodeId, int> slot;
  for (size_t i = 0; i < nodes.size(); ++i) slot[nodes[i]->id] = static_cast<int>(i);

  int width = margin * 2 + step * std::max<int>(1, static_cast<int>(nodes.size()));
  char buf[512];
  std::string out;
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%d\" "
                "height=\"%d\" font-family=\"monospace\" font-size=\"13\">\n",
                width, baseline + 60);
  out += buf;

  auto x_of = [&](NodeId id) { return margin + slot[id] * step + step / 2; };

  for (const auto* t : nodes) {
    int x = x_of(t->id);
    std::snprintf(buf, sizeof(buf),
                  "  <text x=\"%d\" y=\"%d\" text-anchor=\"middle\"%s>%s</text>\n",
                  x, baseline,
                  t->id.is_empty_node() ? " fill=\"gray\"" : "",
                  t->form.c_str());
    out += buf;
    std::snprintf(buf, sizeof(buf),
                  "  <text x=\"%d\" y=\"%d\" text-anchor=\"middle\" "
                  "fill=\"#666\" font-size=\"10\">%s</text>\n",
                  x, baseline + 16, t->upos.c_str());
    out += buf;
  }

  for (const auto* t : nodes) {
    if (!t->head) continue;
    int xd = x_of(t->id);
    const char* label = t->deprel ? t->deprel->name.c_str() : "";
    if (*t->head == kRootId) {
      std::snprintf(buf, sizeof(buf),
                    "  <line x1=\"%d\" y1=\"30\" x2=\"%d\" y2=\"%d\" "
                    "stroke=\"black\"/>\n"
                    "  <text x=\"%d\" y=\"24\" text-anchor=\"middle\" "
                    "fill=\"#940\">%s</text>\n",
                    xd, xd, baseline - 18, xd, label);
      out += buf;
      continue;
    }
    int xh = x_of(*t->head);
    int span = std::abs(slot[*t->head] - slot[t->id]);
    int height = std::min(170, 26 + span * 26);
    int mid = (xh + xd) / 2;
    std::snprintf(buf, sizeof(buf),
                  "  <path d=\"M %d %d Q %d %d %d %d\" fill=\"none\" "
                  "stroke=\"black\"/>\n"
                  "  <polygon points=\"%d,%d %d,%d %d,%d\" fill=\"black\"/>\n"
                  "  <text x=\"%d\" y=\"%d\" text-anchor=\"middle\" "
                  "fill=\"#940\">%s</text>\n",
                  xh, baseline - 18, mid, baseline - 18 - height, xd,
                  baseline - 22, xd - 3, baseline - 28, xd + 3, baseline - 28,
                  xd, baseline - 20, mid, baseline - 24 - height / 2, label);
    out += buf;
  }
  out += "</svg>\n";
  return out;
}

}  // namespace scud
