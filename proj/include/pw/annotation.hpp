#ifndef PW_ANNOTATION_HPP_
#define PW_ANNOTATION_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "pw/errors.hpp"

namespace pw {

inline constexpr uint32_t kDefaultMaxLen = 50;

// The seven phrase classes. Enumeration order doubles as the canonical
// tag order (ming, dong, shu, jie, lian, yu, cong).
enum class PhraseType : uint8_t {
  Noun,         // ( )  ming
  Verb,         // [ ]  dong
  Quantity,     // { }  shu
  Preposition,  // < >  jie
  Conjunction,  // # #  lian
  Modal,        // @ @  yu
  Clause,       // / \  cong
};

inline constexpr int kNumPhraseTypes = 7;

const char* phrase_stem(PhraseType t);       // "ming", "dong", ...
char32_t open_bracket(PhraseType t);
char32_t close_bracket(PhraseType t);

// Nesting priority for spans of identical extent: Clause is outermost,
// then Preposition, Noun, Verb, Quantity, Conjunction, Modal.
int containment_rank(PhraseType t);

bool is_bracket_char(char32_t c);

struct PhraseSpan {
  uint32_t start = 0;
  uint32_t len = 0;
  PhraseType type = PhraseType::Noun;

  uint32_t end() const { return start + len; }
  friend bool operator==(const PhraseSpan&, const PhraseSpan&) = default;
};

// a strictly contains b, where equal extents nest by containment rank.
bool span_contains(const PhraseSpan& a, const PhraseSpan& b);
// a and b overlap without either containing the other.
bool spans_cross(const PhraseSpan& a, const PhraseSpan& b);

struct PhraseNode {
  PhraseSpan span;
  std::vector<PhraseNode> children;

  friend bool operator==(const PhraseNode&, const PhraseNode&) = default;
};

struct PhraseTree {
  std::vector<PhraseNode> roots;

  bool empty() const { return roots.empty(); }
  std::size_t span_count() const;
  // Preorder spans sorted by (start asc, end desc, containment rank asc).
  std::vector<PhraseSpan> spans() const;
  // Max node depth with roots at depth 1; 0 for an empty tree.
  uint32_t depth() const;

  friend bool operator==(const PhraseTree&, const PhraseTree&) = default;
};

struct AnnotatedSentence {
  std::u32string sentence;
  PhraseTree tree;

  friend bool operator==(const AnnotatedSentence&,
                         const AnnotatedSentence&) = default;
};

class CrossingError : public Error {
 public:
  CrossingError(std::vector<std::pair<PhraseSpan, PhraseSpan>> pairs,
                const std::string& message)
      : Error(Errc::CrossingSpans, message), pairs_(std::move(pairs)) {}

  const std::vector<std::pair<PhraseSpan, PhraseSpan>>& pairs() const {
    return pairs_;
  }

 private:
  std::vector<std::pair<PhraseSpan, PhraseSpan>> pairs_;
};

// Builds the unique containment forest over a set of spans.
// Order-insensitive: any permutation of the same spans yields the same
// forest. Throws CrossingError listing every overlap-without-containment
// pair, or Error{DuplicateSpan} on identical (start,len,type) triples.
PhraseTree validate_tree(std::vector<PhraseSpan> spans);

// Parses the bracketed annotation; offsets refer to the stripped sentence.
// Accepts "^...^" for clauses in addition to the canonical "/...\".
// Throws Error{UnbalancedBracket|EmptyPhrase|OverlongSentence|DuplicateSpan}.
AnnotatedSentence parse_annotation(std::u32string_view text,
                                   uint32_t max_len = kDefaultMaxLen);
AnnotatedSentence parse_annotation_utf8(std::string_view text,
                                        uint32_t max_len = kDefaultMaxLen);

// Emits the bracketed form; parse_annotation(result) reproduces the input.
// Throws Error{InvalidTree} when the tree invariants do not hold.
std::u32string serialize_annotation(const AnnotatedSentence& a);
std::string serialize_annotation_utf8(const AnnotatedSentence& a);

}  // namespace pw

#endif  // PW_ANNOTATION_HPP_
