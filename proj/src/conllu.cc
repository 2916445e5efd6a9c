#include "scud/conllu.h"

#include <algorithm>
#include <array>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace scud {

namespace {

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  size_t start = 0;
  while (true) {
    size_t pos = s.find(sep, start);
    if (pos == std::string_view::npos) {
      out.push_back(s.substr(start));
      break;
    }
    out.push_back(s.substr(start, pos - start));
    start = pos + 1;
  }
  return out;
}

bool parse_int(std::string_view s, int& out) {
  if (s.empty()) return false;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

// Value of a "# key = value" comment, or nullopt.
std::optional<std::string> comment_value(const std::string& comment,
                                         std::string_view key) {
  std::string_view s = trim(comment);
  if (s.empty() || s.front() != '#') return std::nullopt;
  s.remove_prefix(1);
  s = trim(s);
  if (s.substr(0, key.size()) != key) return std::nullopt;
  s.remove_prefix(key.size());
  s = trim(s);
  if (s.empty() || s.front() != '=') return std::nullopt;
  s.remove_prefix(1);
  return std::string(trim(s));
}

}  // namespace

RelationTag RelationTag::parse(std::string_view text) {
  RelationTag tag;
  size_t colon = text.find(':');
  if (colon == std::string_view::npos) {
    tag.name = std::string(text);
  } else {
    tag.name = std::string(text.substr(0, colon));
    tag.subtype = std::string(text.substr(colon + 1));
  }
  return tag;
}

bool is_ud_upos(std::string_view tag) {
  static const std::array<std::string_view, 17> kUpos = {
      "ADJ", "ADP", "ADV", "AUX", "CCONJ", "DET",  "INTJ", "NOUN", "NUM",
      "PART", "PRON", "PROPN", "PUNCT", "SCONJ", "SYM", "VERB", "X"};
  return std::find(kUpos.begin(), kUpos.end(), tag) != kUpos.end();
}

std::string AnnotatedSentence::sent_id() const { return comment_field("sent_id"); }

std::string AnnotatedSentence::raw_text() const { return comment_field("text"); }

std::string AnnotatedSentence::comment_field(std::string_view key) const {
  for (const auto& c : comments)
    if (auto v = comment_value(c, key)) return *v;
  return "";
}

size_t AnnotatedSentence::surface_count() const {
  size_t n = 0;
  for (const auto& t : tokens)
    if (!t.id.is_empty_node()) ++n;
  return n;
}

const DepToken* AnnotatedSentence::find(NodeId id) const {
  for (const auto& t : tokens)
    if (t.id == id) return &t;
  return nullptr;
}

DepToken* AnnotatedSentence::find(NodeId id) {
  for (auto& t : tokens)
    if (t.id == id) return &t;
  return nullptr;
}

void AnnotatedSentence::insert_surface_token(int major, DepToken tok) {
  auto shift = [major](NodeId id) -> NodeId {
    if (id == kRootId) return id;
    if (id.major >= major) return {id.major + 1, id.minor};
    return id;
  };
  for (auto& t : tokens) {
    t.id = shift(t.id);
    if (t.head) t.head = shift(*t.head);
  }
  for (auto& r : passthrough_ranges)
    if (r.before_major >= major) ++r.before_major;
  tok.id = {major, 0};
  auto pos = std::lower_bound(
      tokens.begin(), tokens.end(), tok.id,
      [](const DepToken& t, NodeId id) { return t.id < id; });
  tokens.insert(pos, std::move(tok));
}

void AnnotatedSentence::remove_surface_token(int major) {
  NodeId target{major, 0};
  if (!find(target)) throw std::runtime_error("no surface token " + target.str());
  for (const auto& t : tokens)
    if (t.head == target)
      throw std::runtime_error("token " + target.str() + " has dependents");

  // Empty nodes anchored at the removed token re-anchor to the previous
  // surface position, continuing its minor sequence.
  std::map<NodeId, NodeId> remap;
  int prev_max_minor = 0;
  for (const auto& t : tokens)
    if (t.id.major == major - 1 && t.id.minor > prev_max_minor)
      prev_max_minor = t.id.minor;
  int next_minor = prev_max_minor;
  for (const auto& t : tokens) {
    if (t.id == target) continue;
    if (t.id.major == major && t.id.minor > 0)
      remap[t.id] = {major - 1, ++next_minor};
    else if (t.id.major > major)
      remap[t.id] = {t.id.major - 1, t.id.minor};
  }
  std::erase_if(tokens, [&](const DepToken& t) { return t.id == target; });
  for (auto& t : tokens) {
    if (auto it = remap.find(t.id); it != remap.end()) t.id = it->second;
    if (t.head) {
      if (auto it = remap.find(*t.head); it != remap.end()) t.head = it->second;
    }
  }
  for (auto& r : passthrough_ranges)
    if (r.before_major > major) --r.before_major;
  std::sort(tokens.begin(), tokens.end(),
            [](const DepToken& a, const DepToken& b) { return a.id < b.id; });
}

std::string check_sentence(const AnnotatedSentence& s) {
  std::set<NodeId> ids;
  int max_major = 0;
  size_t surface = 0;
  for (const auto& t : s.tokens) {
    if (t.form.empty()) return "token " + t.id.str() + ": empty form";
    if (t.form.find('\t') != std::string::npos ||
        t.form.find('\n') != std::string::npos)
      return "token " + t.id.str() + ": form contains tab or newline";
    if (!ids.insert(t.id).second) return "duplicate node id " + t.id.str();
    if (t.head && *t.head == t.id) return "token " + t.id.str() + ": head is self";
    if (t.head.has_value() != t.deprel.has_value())
      return "token " + t.id.str() + ": head/deprel set inconsistently";
    if (!t.id.is_empty_node()) {
      ++surface;
      max_major = std::max(max_major, t.id.major);
    }
  }
  if (surface != static_cast<size_t>(max_major))
    return "surface token ids are not contiguous 1..n";
  for (const auto& t : s.tokens) {
    if (!t.head || *t.head == kRootId) continue;
    if (!ids.count(*t.head))
      return "token " + t.id.str() + ": head " + t.head->str() + " does not exist";
  }
  // Acyclicity is required only when every surface token is attached.
  bool all_attached = true;
  for (const auto& t : s.tokens)
    if (!t.id.is_empty_node() && !t.attached()) all_attached = false;
  if (all_attached && surface > 0) {
    for (const auto& start : s.tokens) {
      if (start.id.is_empty_node()) continue;
      NodeId cur = start.id;
      size_t steps = 0;
      while (cur != kRootId) {
        const DepToken* tok = s.find(cur);
        if (!tok || !tok->head) break;
        cur = *tok->head;
        if (++steps > s.tokens.size() + 1)
          return "cycle involving token " + start.id.str();
      }
    }
  }
  return "";
}

namespace {

// Parses one 10-column token line into `sent`. Returns false for range lines
// (stored as passthrough).
void parse_token_line(std::string_view line, size_t line_no,
                      AnnotatedSentence& sent) {
  auto cols = split(line, '\t');
  if (cols.size() != 10)
    throw parse_error(line_no, "expected 10 tab-separated columns, got " +
                                   std::to_string(cols.size()));
  std::string_view id_col = cols[0];
  if (id_col.find('-') != std::string_view::npos) {
    int lo = 0;
    auto dash = id_col.find('-');
    if (!parse_int(id_col.substr(0, dash), lo))
      throw parse_error(line_no, "bad multiword range id '" + std::string(id_col) + "'");
    sent.passthrough_ranges.push_back({lo, std::string(line)});
    return;
  }

  DepToken tok;
  if (auto dot = id_col.find('.'); dot != std::string_view::npos) {
    int minor = 0;
    if (!parse_int(id_col.substr(0, dot), tok.id.major) ||
        !parse_int(id_col.substr(dot + 1), minor) || minor < 1 || tok.id.major < 0)
      throw parse_error(line_no, "bad empty-node id '" + std::string(id_col) + "'");
    tok.id.minor = minor;
  } else {
    if (!parse_int(id_col, tok.id.major) || tok.id.major < 1)
      throw parse_error(line_no, "non-numeric or non-positive id '" +
                                     std::string(id_col) + "'");
  }

  tok.form = std::string(cols[1]);
  if (tok.form.empty()) throw parse_error(line_no, "empty FORM");
  tok.lemma = std::string(cols[2]);
  tok.upos = std::string(cols[3]);
  if (tok.upos != "_" && !is_ud_upos(tok.upos))
    throw parse_error(line_no, "unknown UPOS '" + tok.upos + "'");
  tok.xpos = std::string(cols[4]);
  tok.feats = std::string(cols[5]);

  std::string_view head_col = cols[6];
  std::string_view rel_col = cols[7];
  if (head_col == "_" && rel_col == "_") {
    // unattached
  } else if (head_col == "_" || rel_col == "_") {
    throw parse_error(line_no, "HEAD and DEPREL must be set together");
  } else {
    int head = 0;
    if (!parse_int(head_col, head) || head < 0)
      throw parse_error(line_no, "non-numeric HEAD '" + std::string(head_col) + "'");
    tok.head = NodeId{head, 0};
    tok.deprel = RelationTag::parse(rel_col);
    if (tok.deprel->name.empty()) throw parse_error(line_no, "empty DEPREL");
  }
  tok.deps = std::string(cols[8]);
  tok.misc = std::string(cols[9]);

  if (sent.find(tok.id))
    throw parse_error(line_no, "duplicate node id " + tok.id.str());
  sent.tokens.push_back(std::move(tok));
}

void finish_sentence(AnnotatedSentence& sent, size_t first_line) {
  int max_major = 0;
  size_t surface = 0;
  for (const auto& t : sent.tokens) {
    if (!t.id.is_empty_node()) {
      ++surface;
      max_major = std::max(max_major, t.id.major);
    }
  }
  if (surface != static_cast<size_t>(max_major))
    throw parse_error(first_line, "surface token ids are not contiguous 1..n");
  for (const auto& t : sent.tokens) {
    if (t.id.is_empty_node() && t.id.major > max_major)
      throw parse_error(first_line,
                        "empty node " + t.id.str() + " anchored past last token");
    if (t.head && *t.head != kRootId && t.head->major > max_major)
      throw parse_error(first_line, "token " + t.id.str() + ": head " +
                                        t.head->str() + " out of range");
  }
  std::sort(sent.tokens.begin(), sent.tokens.end(),
            [](const DepToken& a, const DepToken& b) { return a.id < b.id; });
}

}  // namespace

Corpus parse_conllu(std::string_view text) {
  Corpus corpus;
  AnnotatedSentence cur;
  bool in_block = false;
  size_t block_start = 1;
  size_t line_no = 0;
  size_t start = 0;
  while (start <= text.size()) {
    size_t end = text.find('\n', start);
    std::string_view line = (end == std::string_view::npos)
                                ? text.substr(start)
                                : text.substr(start, end - start);
    bool last = (end == std::string_view::npos);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (line.empty()) {
      if (in_block) {
        finish_sentence(cur, block_start);
        corpus.push_back(std::move(cur));
        cur = AnnotatedSentence{};
        in_block = false;
      }
    } else if (line.front() == '#') {
      if (!in_block) block_start = line_no;
      in_block = true;
      cur.comments.emplace_back(line);
    } else {
      if (!in_block) block_start = line_no;
      in_block = true;
      parse_token_line(line, line_no, cur);
    }
    if (last) break;
    start = end + 1;
  }
  if (in_block) {
    finish_sentence(cur, block_start);
    corpus.push_back(std::move(cur));
  }
  return corpus;
}

Corpus parse_conllu_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_conllu(ss.str());
}

std::string write_conllu(const AnnotatedSentence& s) {
  if (auto err = check_sentence(s); !err.empty())
    throw std::runtime_error("invalid sentence" +
                             (s.sent_id().empty() ? "" : " " + s.sent_id()) +
                             ": " + err);
  std::string out;
  for (const auto& c : s.comments) {
    out += c;
    out += '\n';
  }
  int max_major = 0;
  for (const auto& t : s.tokens)
    if (!t.id.is_empty_node()) max_major = std::max(max_major, t.id.major);

  auto emit = [&out](const DepToken& t) {
    out += t.id.str();
    out += '\t';
    out += t.form;
    out += '\t';
    out += t.lemma;
    out += '\t';
    out += t.upos;
    out += '\t';
    out += t.xpos;
    out += '\t';
    out += t.feats;
    out += '\t';
    out += t.head ? std::to_string(t.head->major) : "_";
    out += '\t';
    out += t.deprel ? t.deprel->str() : "_";
    out += '\t';
    out += t.deps;
    out += '\t';
    out += t.misc;
    out += '\n';
  };

  // Tokens are emitted in NodeId order; range lines precede their first token.
  for (const auto& t : s.tokens)
    if (t.id.major == 0) emit(t);  // empty nodes anchored before token 1
  for (int m = 1; m <= max_major; ++m) {
    for (const auto& r : s.passthrough_ranges)
      if (r.before_major == m) {
        out += r.line;
        out += '\n';
      }
    for (const auto& t : s.tokens)
      if (t.id.major == m) emit(t);
  }
  out += '\n';
  return out;
}

std::string write_conllu(const Corpus& corpus) {
  std::string out;
  for (const auto& s : corpus) out += write_conllu(s);
  return out;
}

void write_conllu_file(const std::string& path, const Corpus& corpus) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  out << write_conllu(corpus);
  if (!out) throw std::runtime_error("write failed: " + path);
}

AnnotatedSentence materialize_empty_nodes(const AnnotatedSentence& s) {
  AnnotatedSentence out;
  out.comments = s.comments;
  out.tokens = s.tokens;
  std::sort(out.tokens.begin(), out.tokens.end(),
            [](const DepToken& a, const DepToken& b) { return a.id < b.id; });
  std::map<NodeId, NodeId> remap;
  int next = 1;
  for (const auto& t : out.tokens) remap[t.id] = NodeId{next++, 0};
  for (auto& t : out.tokens) {
    t.id = remap.at(t.id);
    if (t.head && *t.head != kRootId) t.head = remap.at(*t.head);
  }
  for (const auto& r : s.passthrough_ranges) {
    NodeId old{r.before_major, 0};
    auto it = remap.find(old);
    out.passthrough_ranges.push_back(
        {it == remap.end() ? r.before_major : it->second.major, r.line});
  }
  return out;
}

}  // namespace scud
