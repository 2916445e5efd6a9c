#include "scud/augment.h"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "scud/parallel.h"
#include "scud/rng.h"

namespace scud {

namespace {

DepToken& surface_at(AnnotatedSentence& s, int idx) {
  DepToken* t = s.find({idx, 0});
  if (!t) throw std::runtime_error("no surface token at position " +
                                   std::to_string(idx));
  return *t;
}

const DepToken& surface_at(const AnnotatedSentence& s, int idx) {
  const DepToken* t = s.find({idx, 0});
  if (!t) throw std::runtime_error("no surface token at position " +
                                   std::to_string(idx));
  return *t;
}

bool has_dependents(const AnnotatedSentence& s, NodeId id) {
  for (const auto& t : s.tokens)
    if (t.head == id) return true;
  return false;
}

const DepToken* root_token(const AnnotatedSentence& s) {
  for (const auto& t : s.tokens)
    if (t.head == kRootId) return &t;
  return nullptr;
}

bool utf8_boundary(const std::string& form, int offset) {
  return (static_cast<unsigned char>(form[offset]) & 0xC0) != 0x80;
}

}  // namespace

AugmentConfig AugmentConfig::defaults() {
  AugmentConfig c;
  c.word_split = 0.05;
  c.word_drop = 0.05;
  c.preterm_truncate = 0.05;
  c.stutter = 0.10;
  c.self_correct = 0.05;
  c.filler = 0.10;
  return c;
}

void AugmentConfig::check() const {
  for (double rate : {word_split, word_drop, preterm_truncate, stutter,
                      self_correct, filler})
    if (rate < 0.0 || rate > 1.0)
      throw std::runtime_error("augment rate out of [0,1]");
  if (filler > 0.0 && filler_lexicon.empty())
    throw std::runtime_error("filler rate > 0 requires a non-empty lexicon");
  if (max_stutter_repeats < 1)
    throw std::runtime_error("max_stutter_repeats must be >= 1");
}

AugmentConfig AugmentConfig::from_text(const std::string& text) {
  AugmentConfig c = defaults();
  std::istringstream in(text);
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    auto eq = line.find('=');
    if (eq == std::string::npos) {
      if (line.find_first_not_of(" \t\r") != std::string::npos)
        throw std::runtime_error("augment config line " +
                                 std::to_string(line_no) + ": expected key = value");
      continue;
    }
    auto trim = [](std::string v) {
      size_t b = v.find_first_not_of(" \t\r");
      size_t e = v.find_last_not_of(" \t\r");
      return b == std::string::npos ? std::string() : v.substr(b, e - b + 1);
    };
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "seed") c.seed = std::stoull(value);
      else if (key == "word_split") c.word_split = std::stod(value);
      else if (key == "word_drop") c.word_drop = std::stod(value);
      else if (key == "preterm_truncate") c.preterm_truncate = std::stod(value);
      else if (key == "stutter") c.stutter = std::stod(value);
      else if (key == "self_correct") c.self_correct = std::stod(value);
      else if (key == "filler") c.filler = std::stod(value);
      else if (key == "max_stutter_repeats") c.max_stutter_repeats = std::stoi(value);
      else if (key == "filler_lexicon") {
        c.filler_lexicon.clear();
        std::istringstream words(value);
        std::string w;
        while (std::getline(words, w, ',')) {
          w = trim(w);
          if (!w.empty()) c.filler_lexicon.push_back(w);
        }
      } else {
        throw std::runtime_error("unknown key '" + key + "'");
      }
    } catch (const std::invalid_argument&) {
      throw std::runtime_error("augment config line " + std::to_string(line_no) +
                               ": bad value for " + key);
    }
  }
  c.check();
  return c;
}

AugmentConfig AugmentConfig::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open augment config " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return from_text(ss.str());
}

AnnotatedSentence split_word(const AnnotatedSentence& s, int idx,
                             int split_point) {
  AnnotatedSentence out = s;
  DepToken& tok = surface_at(out, idx);
  int len = static_cast<int>(tok.form.size());
  if (len < 2) throw std::runtime_error("form too short to split");
  if (split_point < 1 || split_point >= len)
    throw std::runtime_error("split point out of range");
  if (!utf8_boundary(tok.form, split_point))
    throw std::runtime_error("split point inside a multi-byte character");

  DepToken second;
  second.form = tok.form.substr(split_point);
  second.upos = "X";
  tok.form.erase(split_point);
  second.head = NodeId{idx, 0};
  second.deprel = RelationTag{"goeswith", ""};
  out.insert_surface_token(idx + 1, std::move(second));
  return out;
}

AnnotatedSentence merge_split(const AnnotatedSentence& s, int idx) {
  AnnotatedSentence out = s;
  const DepToken& second = surface_at(out, idx + 1);
  if (!second.deprel || second.deprel->name != "goeswith" ||
      second.head != NodeId{idx, 0})
    throw std::runtime_error("token " + std::to_string(idx + 1) +
                             " is not a goeswith continuation of " +
                             std::to_string(idx));
  std::string tail = second.form;
  out.remove_surface_token(idx + 1);
  surface_at(out, idx).form += tail;
  return out;
}

bool droppable(const AnnotatedSentence& s, int idx) {
  const DepToken* t = s.find({idx, 0});
  if (!t || !t->deprel) return false;
  static const char* kDroppable[] = {"nsubj", "obj", "aux", "cop", "case", "det"};
  bool role = false;
  for (const char* d : kDroppable)
    if (t->deprel->name == d) role = true;
  return role && !has_dependents(s, t->id);
}

AnnotatedSentence drop_token_insert_empty(const AnnotatedSentence& s, int idx) {
  const DepToken& victim = surface_at(s, idx);
  if (!victim.deprel) throw std::runtime_error("token is unattached");
  if (!droppable(s, idx))
    throw std::runtime_error(has_dependents(s, victim.id)
                                 ? "token has dependents"
                                 : "relation '" + victim.deprel->name +
                                       "' is not droppable");

  AnnotatedSentence out = s;
  int anchor = idx - 1;
  int minor = 1;
  for (const auto& t : out.tokens)
    if (t.id.major == anchor && t.id.minor >= minor) minor = t.id.minor + 1;

  NodeId new_id{anchor, minor};
  // Placeholder form names the node by its materialized (linear) position.
  int position = 0;
  for (const auto& t : out.tokens)
    if (t.id < NodeId{idx, 0}) ++position;
  ++position;
  std::string form =
      "E" + std::to_string(position) + "." + std::to_string(minor);

  std::map<NodeId, NodeId> remap;
  remap[{idx, 0}] = new_id;
  int shift_minor = minor;
  for (const auto& t : out.tokens) {
    if (t.id.major == idx && t.id.minor > 0)
      remap[t.id] = {anchor, ++shift_minor};
    else if (t.id.major > idx)
      remap[t.id] = {t.id.major - 1, t.id.minor};
  }
  for (auto& t : out.tokens) {
    if (auto it = remap.find(t.id); it != remap.end()) t.id = it->second;
    if (t.head)
      if (auto it = remap.find(*t.head); it != remap.end()) t.head = it->second;
  }
  DepToken& node = *out.find(new_id);
  node.form = std::move(form);
  node.lemma = "_";
  node.xpos = "_";
  node.feats = "_";
  node.misc = "_";
  for (auto& r : out.passthrough_ranges)
    if (r.before_major > idx) --r.before_major;
  std::sort(out.tokens.begin(), out.tokens.end(),
            [](const DepToken& a, const DepToken& b) { return a.id < b.id; });
  return out;
}

AnnotatedSentence truncate_preterm(const AnnotatedSentence& s, int cut) {
  int n = static_cast<int>(s.surface_count());
  if (cut < 1 || cut >= n) throw std::runtime_error("cut out of range");

  AnnotatedSentence out = s;
  std::erase_if(out.tokens,
                [cut](const DepToken& t) { return t.id.major > cut; });
  std::erase_if(out.passthrough_ranges, [cut](const PassthroughRange& r) {
    return r.before_major > cut;
  });

  auto removed = [cut](NodeId id) { return id != kRootId && id.major > cut; };
  std::vector<DepToken*> orphans;
  for (auto& t : out.tokens)
    if (t.head && removed(*t.head)) orphans.push_back(&t);

  const DepToken* root = root_token(out);
  NodeId attach_to;
  if (root) {
    attach_to = root->id;
  } else {
    // The root was cut off; promote the leftmost surviving surface orphan.
    DepToken* promoted = nullptr;
    for (auto* t : orphans)
      if (!t->id.is_empty_node() && !promoted) promoted = t;
    if (!promoted)
      throw std::runtime_error("truncation left no surface orphan to promote");
    promoted->head = kRootId;
    promoted->deprel = RelationTag{"root", ""};
    attach_to = promoted->id;
    std::erase(orphans, promoted);
  }
  for (auto* t : orphans) {
    t->head = attach_to;
    t->deprel = RelationTag{"preterm", ""};
  }
  return out;
}

AnnotatedSentence add_stutter(const AnnotatedSentence& s, int idx, int repeats) {
  if (repeats < 1) throw std::runtime_error("repeats must be >= 1");
  AnnotatedSentence out = s;
  const DepToken base = surface_at(out, idx);
  for (int k = 1; k <= repeats; ++k) {
    DepToken copy;
    copy.form = base.form;
    copy.upos = base.upos;
    copy.head = NodeId{idx, 0};
    copy.deprel = RelationTag{"flat", ""};
    out.insert_surface_token(idx + k, std::move(copy));
  }
  return out;
}

AnnotatedSentence remove_stutter(const AnnotatedSentence& s, int idx,
                                 int repeats) {
  AnnotatedSentence out = s;
  const DepToken& base = surface_at(out, idx);
  std::string form = base.form;
  for (int k = repeats; k >= 1; --k) {
    const DepToken& copy = surface_at(out, idx + k);
    if (!copy.deprel || copy.deprel->name != "flat" ||
        copy.head != NodeId{idx, 0} || copy.form != form)
      throw std::runtime_error("token " + std::to_string(idx + k) +
                               " is not a stutter copy of " + std::to_string(idx));
    out.remove_surface_token(idx + k);
  }
  return out;
}

AnnotatedSentence add_self_correction(
    const AnnotatedSentence& s, int idx,
    const std::vector<std::pair<std::string, std::string>>& span) {
  if (span.empty()) throw std::runtime_error("empty disfluent span");
  surface_at(s, idx);  // range check
  AnnotatedSentence out = s;
  int width = static_cast<int>(span.size());
  for (int k = 0; k < width; ++k) {
    DepToken tok;
    tok.form = span[k].first;
    tok.upos = span[k].second;
    if (k == 0) {
      // The repair sits at idx+1 right after this insertion; later span
      // insertions shift the reference along with it.
      tok.head = NodeId{idx + 1, 0};
      tok.deprel = RelationTag{"reparandum", ""};
    } else {
      tok.head = NodeId{idx, 0};  // first token of the disfluent span
      tok.deprel = RelationTag{"flat", ""};
    }
    out.insert_surface_token(idx + k, std::move(tok));
  }
  return out;
}

AnnotatedSentence remove_self_correction(const AnnotatedSentence& s, int idx,
                                         size_t span_len) {
  if (span_len == 0) throw std::runtime_error("empty disfluent span");
  AnnotatedSentence out = s;
  const DepToken& first = surface_at(out, idx);
  if (!first.deprel || first.deprel->name != "reparandum")
    throw std::runtime_error("token " + std::to_string(idx) +
                             " is not a reparandum");
  for (int k = static_cast<int>(span_len) - 1; k >= 0; --k)
    out.remove_surface_token(idx + k);
  return out;
}

AnnotatedSentence add_filler(const AnnotatedSentence& s, int pos,
                             const std::string& word) {
  int n = static_cast<int>(s.surface_count());
  if (pos < 1 || pos > n + 1) throw std::runtime_error("position out of range");
  const DepToken* root = root_token(s);
  if (!root) throw std::runtime_error("sentence has no root to attach to");
  NodeId root_id = root->id;

  std::vector<std::string> parts;
  std::istringstream ss(word);
  std::string part;
  while (ss >> part) parts.push_back(part);
  if (parts.empty()) throw std::runtime_error("empty filler word");

  AnnotatedSentence out = s;
  for (int k = 0; k < static_cast<int>(parts.size()); ++k) {
    DepToken tok;
    tok.form = parts[k];
    if (k == 0) {
      tok.upos = (parts[k] == "like") ? "ADV" : "INTJ";
      NodeId head = root_id;
      if (head.major >= pos) head.major += 1;  // root shifts past this insert
      tok.head = head;
      tok.deprel = RelationTag{"discourse", ""};
    } else {
      tok.upos = "INTJ";
      tok.head = NodeId{pos, 0};
      tok.deprel = RelationTag{"fixed", ""};
    }
    out.insert_surface_token(pos + k, std::move(tok));
  }
  return out;
}

AnnotatedSentence remove_filler(const AnnotatedSentence& s, int pos,
                                const std::string& word) {
  std::vector<std::string> parts;
  std::istringstream ss(word);
  std::string part;
  while (ss >> part) parts.push_back(part);
  if (parts.empty()) throw std::runtime_error("empty filler word");
  AnnotatedSentence out = s;
  const DepToken& first = surface_at(out, pos);
  if (!first.deprel || first.deprel->name != "discourse" ||
      first.form != parts[0])
    throw std::runtime_error("token " + std::to_string(pos) +
                             " is not the filler '" + word + "'");
  for (int k = static_cast<int>(parts.size()) - 1; k >= 0; --k)
    out.remove_surface_token(pos + k);
  return out;
}

namespace {

// One transformation pass over one sentence, driven by its own stream.
AnnotatedSentence augment_sentence(const AnnotatedSentence& input,
                                   const AugmentConfig& cfg, CounterRng& rng) {
  AnnotatedSentence s = input;

  auto surface_n = [&s] { return static_cast<int>(s.surface_count()); };

  if (cfg.filler > 0 && rng.next_unit() < cfg.filler && surface_n() >= 1) {
    const std::string& word =
        cfg.filler_lexicon[rng.next_int(0, cfg.filler_lexicon.size() - 1)];
    int pos = static_cast<int>(rng.next_int(1, surface_n() + 1));
    if (root_token(s)) s = add_filler(s, pos, word);
  }

  if (cfg.stutter > 0 && rng.next_unit() < cfg.stutter && surface_n() >= 1) {
    int idx = static_cast<int>(rng.next_int(1, surface_n()));
    int repeats = static_cast<int>(rng.next_int(1, cfg.max_stutter_repeats));
    s = add_stutter(s, idx, repeats);
  }

  if (cfg.self_correct > 0 && rng.next_unit() < cfg.self_correct) {
    static const char* kContent[] = {"NOUN", "VERB", "ADJ",  "ADV",
                                     "PROPN", "PRON", "NUM"};
    std::vector<int> sites;
    for (const auto& t : s.tokens) {
      if (t.id.is_empty_node()) continue;
      for (const char* c : kContent)
        if (t.upos == c) sites.push_back(t.id.major);
    }
    if (!sites.empty()) {
      int idx = sites[rng.next_int(0, sites.size() - 1)];
      const DepToken& target = *s.find({idx, 0});
      s = add_self_correction(s, idx, {{target.form, target.upos}});
    }
  }

  if (cfg.word_split > 0 && rng.next_unit() < cfg.word_split) {
    std::vector<int> sites;
    for (const auto& t : s.tokens) {
      if (t.id.is_empty_node() || t.form.size() < 2) continue;
      bool ascii_alpha = true;
      for (char ch : t.form)
        if (!std::isalpha(static_cast<unsigned char>(ch))) ascii_alpha = false;
      if (ascii_alpha) sites.push_back(t.id.major);
    }
    if (!sites.empty()) {
      int idx = sites[rng.next_int(0, sites.size() - 1)];
      int len = static_cast<int>(s.find({idx, 0})->form.size());
      int point = static_cast<int>(rng.next_int(1, len - 1));
      s = split_word(s, idx, point);
    }
  }

  if (cfg.word_drop > 0 && rng.next_unit() < cfg.word_drop) {
    std::vector<int> sites;
    for (int i = 1; i <= surface_n(); ++i)
      if (droppable(s, i)) sites.push_back(i);
    if (!sites.empty())
      s = drop_token_insert_empty(s, sites[rng.next_int(0, sites.size() - 1)]);
  }

  if (cfg.preterm_truncate > 0 && rng.next_unit() < cfg.preterm_truncate &&
      surface_n() >= 2) {
    int cut = static_cast<int>(rng.next_int(1, surface_n() - 1));
    s = truncate_preterm(s, cut);
  }

  return s;
}

}  // namespace

Corpus augment_corpus(const Corpus& corpus, const AugmentConfig& config,
                      unsigned jobs) {
  config.check();
  Corpus out(corpus.size());
  parallel_for(corpus.size(), jobs, [&](size_t i) {
    CounterRng rng(config.seed, i);
    out[i] = augment_sentence(corpus[i], config, rng);
  });
  return out;
}

}  // namespace scud
