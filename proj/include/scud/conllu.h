// In-memory model for SCUD-annotated sentences and CoNLL-U reading/writing,
// including empty nodes inserted for ASR-omitted words.
#pragma once

#include <compare>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace scud {

// Raised for malformed input files; carries the 1-based line number.
class parse_error : public std::runtime_error {
 public:
  parse_error(size_t line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what),
        line_(line) {}
  size_t line() const { return line_; }

 private:
  size_t line_;
};

// Node position. Surface tokens are (major, 0) with major >= 1; empty nodes
// are (major, minor>=1) and sort after surface token `major`. (0, 0) is the
// virtual ROOT when used as a head.
struct NodeId {
  int major = 0;
  int minor = 0;

  bool is_empty_node() const { return minor > 0; }
  auto operator<=>(const NodeId&) const = default;

  std::string str() const {
    if (minor == 0) return std::to_string(major);
    return std::to_string(major) + "." + std::to_string(minor);
  }
};

inline constexpr NodeId kRootId{0, 0};

// Dependency relation label: primary name plus optional subtype after ':'.
struct RelationTag {
  std::string name;
  std::string subtype;  // empty when absent

  static RelationTag parse(std::string_view text);
  std::string str() const {
    return subtype.empty() ? name : name + ":" + subtype;
  }
  bool operator==(const RelationTag&) const = default;
};

// One surface or empty node. head/deprel are either both set or both
// unattached; a head of kRootId means the token attaches to the virtual ROOT.
struct DepToken {
  NodeId id;
  std::string form;
  std::string lemma = "_";  // preserved verbatim, not modeled
  std::string upos = "_";
  std::string xpos = "_";   // preserved verbatim
  std::string feats = "_";  // preserved verbatim
  std::optional<NodeId> head;           // nullopt = unattached
  std::optional<RelationTag> deprel;    // nullopt = unattached
  std::string deps = "_";   // preserved verbatim
  std::string misc = "_";

  bool attached() const { return head.has_value(); }
  bool operator==(const DepToken&) const = default;
};

// A multiword-token range line ("i-j"), kept verbatim and re-emitted before
// the surface token `before_major`.
struct PassthroughRange {
  int before_major = 0;
  std::string line;
  bool operator==(const PassthroughRange&) const = default;
};

// Ordered tokens (surface + empty) forming one dependency graph for one
// utterance. Comments are verbatim lines starting with '#'.
struct AnnotatedSentence {
  std::vector<DepToken> tokens;  // sorted by NodeId
  std::vector<std::string> comments;
  std::vector<PassthroughRange> passthrough_ranges;

  // Derived from "# sent_id = ..." / "# text = ..." comments.
  std::string sent_id() const;
  std::string raw_text() const;
  // Value of the first "# <key> = <value>" comment, or "".
  std::string comment_field(std::string_view key) const;

  size_t surface_count() const;
  const DepToken* find(NodeId id) const;
  DepToken* find(NodeId id);

  // Inserts a surface token so that it becomes position `major`; existing
  // surface majors >= major (and empty-node anchors >= major) shift by one,
  // and all head references are remapped.
  void insert_surface_token(int major, DepToken tok);
  // Removes the surface token at `major`. Throws if any token depends on it.
  void remove_surface_token(int major);

  bool operator==(const AnnotatedSentence&) const = default;
};

using Corpus = std::vector<AnnotatedSentence>;

// The 17 UD part-of-speech categories.
bool is_ud_upos(std::string_view tag);

// Parses a CoNLL-U document: blank-line separated sentence blocks of
// 10-column token lines. Empty-node lines ("i.j") become empty-node tokens;
// multiword ranges ("i-j") are preserved verbatim. Throws parse_error.
Corpus parse_conllu(std::string_view text);
Corpus parse_conllu_file(const std::string& path);

// Canonical serialization; inverse of parse_conllu. Throws std::runtime_error
// if a sentence violates the documented invariants.
std::string write_conllu(const Corpus& corpus);
std::string write_conllu(const AnnotatedSentence& sentence);
void write_conllu_file(const std::string& path, const Corpus& corpus);

// Checks the AnnotatedSentence invariants (contiguous majors, resolvable
// heads, head != self, head/deprel consistency). Returns an error message or
// empty string.
std::string check_sentence(const AnnotatedSentence& s);

// Re-indexes empty nodes into the surface sequence at their order position
// (an empty node 0.1 becomes surface index 1 and subsequent tokens shift).
// Head references are remapped; the result has no empty nodes.
AnnotatedSentence materialize_empty_nodes(const AnnotatedSentence& s);

}  // namespace scud
