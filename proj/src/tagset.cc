#include "scud/tagset.h"

#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace scud {

Tagset parse_tagset(const std::string& text) {
  Tagset tags;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos)
      line.erase(hash);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' ||
                             line.back() == '\r'))
      line.pop_back();
    size_t start = line.find_first_not_of(" \t");
    if (start == std::string::npos) continue;
    tags.insert(line.substr(start));
  }
  if (tags.empty()) throw std::runtime_error("tagset file defines no relations");
  return tags;
}

Tagset load_tagset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open tagset file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_tagset(ss.str());
}

const std::vector<std::string>& default_tagset_names() {
  // UD v2 universal relations plus the SCUD extension `preterm`.
  static const std::vector<std::string> kNames = {
      "acl",      "advcl",      "advmod",  "amod",   "appos",
      "aux",      "case",       "cc",      "ccomp",  "clf",
      "compound", "conj",       "cop",     "csubj",  "dep",
      "det",      "discourse",  "dislocated", "expl", "fixed",
      "flat",     "goeswith",   "iobj",    "list",   "mark",
      "nmod",     "nsubj",      "nummod",  "obj",    "obl",
      "orphan",   "parataxis",  "punct",   "preterm", "reparandum",
      "root",     "vocative",   "xcomp"};
  return kNames;
}

const Tagset& default_tagset() {
  static const Tagset kTags(default_tagset_names().begin(),
                            default_tagset_names().end());
  return kTags;
}

Tagset resolve_tagset(const std::string& explicit_path) {
  if (!explicit_path.empty()) return load_tagset(explicit_path);
  if (const char* env = std::getenv("SCUDKIT_TAGSET"); env && *env)
    return load_tagset(env);
  return default_tagset();
}

}  // namespace scud
