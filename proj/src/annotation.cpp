#include "pw/annotation.hpp"

#include <algorithm>
#include <set>
#include <tuple>

#include "pw/utf8.hpp"

namespace pw {

namespace {

struct BracketInfo {
  char32_t open;
  char32_t close;
};

// Indexed by PhraseType. Clause uses '/'...'\'; '^' is handled separately
// as a parse-only alias.
constexpr BracketInfo kBrackets[kNumPhraseTypes] = {
    {U'(', U')'}, {U'[', U']'}, {U'{', U'}'}, {U'<', U'>'},
    {U'#', U'#'}, {U'@', U'@'}, {U'/', U'\\'},
};

constexpr const char* kStems[kNumPhraseTypes] = {
    "ming", "dong", "shu", "jie", "lian", "yu", "cong",
};

// Clause, Preposition, Noun, Verb, Quantity, Conjunction, Modal.
constexpr int kRank[kNumPhraseTypes] = {2, 3, 4, 1, 5, 6, 0};

bool open_type_for(char32_t c, PhraseType* t) {
  switch (c) {
    case U'(': *t = PhraseType::Noun; return true;
    case U'[': *t = PhraseType::Verb; return true;
    case U'{': *t = PhraseType::Quantity; return true;
    case U'<': *t = PhraseType::Preposition; return true;
    case U'/': *t = PhraseType::Clause; return true;
    default: return false;
  }
}

bool close_type_for(char32_t c, PhraseType* t) {
  switch (c) {
    case U')': *t = PhraseType::Noun; return true;
    case U']': *t = PhraseType::Verb; return true;
    case U'}': *t = PhraseType::Quantity; return true;
    case U'>': *t = PhraseType::Preposition; return true;
    case U'\\': *t = PhraseType::Clause; return true;
    default: return false;
  }
}

// '#', '@' and the clause alias '^' open and close with the same character.
bool symmetric_type_for(char32_t c, PhraseType* t) {
  switch (c) {
    case U'#': *t = PhraseType::Conjunction; return true;
    case U'@': *t = PhraseType::Modal; return true;
    case U'^': *t = PhraseType::Clause; return true;
    default: return false;
  }
}

void collect_spans(const PhraseNode& node, std::vector<PhraseSpan>* out) {
  out->push_back(node.span);
  for (const auto& c : node.children) collect_spans(c, out);
}

uint32_t node_depth(const PhraseNode& node) {
  uint32_t best = 0;
  for (const auto& c : node.children) best = std::max(best, node_depth(c));
  return best + 1;
}

std::string span_text(const PhraseSpan& s) {
  return "(" + std::to_string(s.start) + "," + std::to_string(s.len) + "," +
         kStems[static_cast<int>(s.type)] + ")";
}

struct SpanOrder {
  bool operator()(const PhraseSpan& a, const PhraseSpan& b) const {
    if (a.start != b.start) return a.start < b.start;
    if (a.end() != b.end()) return a.end() > b.end();
    return containment_rank(a.type) < containment_rank(b.type);
  }
};

void check_node(const PhraseNode& node, uint32_t sentence_len,
                std::set<std::tuple<uint32_t, uint32_t, int>>* seen) {
  const PhraseSpan& s = node.span;
  if (s.len == 0) throw Error(Errc::InvalidTree, "zero-length span");
  if (s.end() > sentence_len) {
    throw Error(Errc::InvalidTree,
                "span " + span_text(s) + " exceeds sentence length");
  }
  auto key = std::make_tuple(s.start, s.len, static_cast<int>(s.type));
  if (!seen->insert(key).second) {
    throw Error(Errc::InvalidTree, "duplicate span " + span_text(s));
  }
  uint32_t prev_end = s.start;
  bool first = true;
  for (const auto& child : node.children) {
    if (!span_contains(s, child.span)) {
      throw Error(Errc::InvalidTree, "child " + span_text(child.span) +
                                         " not contained in " + span_text(s));
    }
    if (!first && child.span.start < prev_end) {
      throw Error(Errc::InvalidTree,
                  "children overlap or are out of order at " +
                      span_text(child.span));
    }
    prev_end = child.span.end();
    first = false;
    check_node(child, sentence_len, seen);
  }
}

void emit_node(const PhraseNode& node, const std::u32string& sentence,
               std::u32string* out);

void emit_range(uint32_t lo, uint32_t hi,
                const std::vector<PhraseNode>& nodes,
                const std::u32string& sentence, std::u32string* out) {
  uint32_t pos = lo;
  for (const auto& node : nodes) {
    out->append(sentence, pos, node.span.start - pos);
    emit_node(node, sentence, out);
    pos = node.span.end();
  }
  out->append(sentence, pos, hi - pos);
}

void emit_node(const PhraseNode& node, const std::u32string& sentence,
               std::u32string* out) {
  out->push_back(open_bracket(node.span.type));
  emit_range(node.span.start, node.span.end(), node.children, sentence, out);
  out->push_back(close_bracket(node.span.type));
}

}  // namespace

const char* phrase_stem(PhraseType t) { return kStems[static_cast<int>(t)]; }

char32_t open_bracket(PhraseType t) {
  return kBrackets[static_cast<int>(t)].open;
}

char32_t close_bracket(PhraseType t) {
  return kBrackets[static_cast<int>(t)].close;
}

int containment_rank(PhraseType t) { return kRank[static_cast<int>(t)]; }

bool is_bracket_char(char32_t c) {
  switch (c) {
    case U'(': case U')': case U'[': case U']': case U'{': case U'}':
    case U'<': case U'>': case U'#': case U'@': case U'/': case U'\\':
    case U'^':
      return true;
    default:
      return false;
  }
}

bool span_contains(const PhraseSpan& a, const PhraseSpan& b) {
  if (a.start > b.start || b.end() > a.end()) return false;
  if (a.start == b.start && a.end() == b.end()) {
    return containment_rank(a.type) < containment_rank(b.type);
  }
  return true;
}

bool spans_cross(const PhraseSpan& a, const PhraseSpan& b) {
  if (a.end() <= b.start || b.end() <= a.start) return false;  // disjoint
  return !span_contains(a, b) && !span_contains(b, a);
}

std::size_t PhraseTree::span_count() const {
  std::vector<PhraseSpan> all;
  for (const auto& r : roots) collect_spans(r, &all);
  return all.size();
}

std::vector<PhraseSpan> PhraseTree::spans() const {
  std::vector<PhraseSpan> all;
  for (const auto& r : roots) collect_spans(r, &all);
  std::sort(all.begin(), all.end(), SpanOrder{});
  return all;
}

uint32_t PhraseTree::depth() const {
  uint32_t best = 0;
  for (const auto& r : roots) best = std::max(best, node_depth(r));
  return best;
}

PhraseTree validate_tree(std::vector<PhraseSpan> spans) {
  std::sort(spans.begin(), spans.end(), SpanOrder{});
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (spans[i] == spans[i - 1]) {
      throw Error(Errc::DuplicateSpan,
                  "identical span " + span_text(spans[i]));
    }
  }

  auto fail_crossing = [&spans]() {
    std::vector<std::pair<PhraseSpan, PhraseSpan>> pairs;
    for (std::size_t i = 0; i < spans.size(); ++i) {
      for (std::size_t j = i + 1; j < spans.size(); ++j) {
        if (spans_cross(spans[i], spans[j])) {
          pairs.emplace_back(spans[i], spans[j]);
        }
      }
    }
    std::string msg;
    for (const auto& [a, b] : pairs) {
      if (!msg.empty()) msg += ", ";
      msg += span_text(a) + "x" + span_text(b);
    }
    throw CrossingError(std::move(pairs), msg);
  };

  // Sorted order puts every container before its contents, so a stack of
  // open ancestors assigns each span its parent.
  std::vector<int> parent(spans.size(), -1);
  std::vector<std::size_t> stack;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    while (!stack.empty() && !span_contains(spans[stack.back()], spans[i])) {
      if (spans_cross(spans[stack.back()], spans[i])) fail_crossing();
      stack.pop_back();
    }
    parent[i] = stack.empty() ? -1 : static_cast<int>(stack.back());
    stack.push_back(i);
  }

  std::vector<std::vector<std::size_t>> kids(spans.size());
  std::vector<std::size_t> root_ids;
  for (std::size_t i = 0; i < spans.size(); ++i) {
    if (parent[i] < 0) {
      root_ids.push_back(i);
    } else {
      kids[static_cast<std::size_t>(parent[i])].push_back(i);
    }
  }

  auto build = [&](auto&& self, std::size_t id) -> PhraseNode {
    PhraseNode node;
    node.span = spans[id];
    node.children.reserve(kids[id].size());
    for (std::size_t c : kids[id]) node.children.push_back(self(self, c));
    return node;
  };

  PhraseTree tree;
  tree.roots.reserve(root_ids.size());
  for (std::size_t r : root_ids) tree.roots.push_back(build(build, r));
  return tree;
}

AnnotatedSentence parse_annotation(std::u32string_view text,
                                   uint32_t max_len) {
  struct Open {
    PhraseType type;
    char32_t open_char;
    uint32_t start;
  };

  std::u32string sentence;
  std::vector<PhraseSpan> spans;
  std::vector<Open> stack;

  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    char32_t c = text[pos];
    PhraseType t;
    if (symmetric_type_for(c, &t)) {
      if (!stack.empty() && stack.back().open_char == c) {
        uint32_t len = static_cast<uint32_t>(sentence.size()) -
                       stack.back().start;
        if (len == 0) throw Error(Errc::EmptyPhrase, "empty phrase", pos);
        spans.push_back({stack.back().start, len, stack.back().type});
        stack.pop_back();
      } else {
        stack.push_back({t, c, static_cast<uint32_t>(sentence.size())});
      }
    } else if (open_type_for(c, &t)) {
      stack.push_back({t, c, static_cast<uint32_t>(sentence.size())});
    } else if (close_type_for(c, &t)) {
      PhraseType dummy;
      bool matches = !stack.empty() && stack.back().type == t &&
                     !symmetric_type_for(stack.back().open_char, &dummy);
      if (!matches) {
        throw Error(Errc::UnbalancedBracket, "unmatched closing bracket",
                    pos);
      }
      uint32_t len =
          static_cast<uint32_t>(sentence.size()) - stack.back().start;
      if (len == 0) throw Error(Errc::EmptyPhrase, "empty phrase", pos);
      spans.push_back({stack.back().start, len, stack.back().type});
      stack.pop_back();
    } else {
      sentence.push_back(c);
    }
  }
  if (!stack.empty()) {
    throw Error(Errc::UnbalancedBracket, "unclosed bracket at end of input",
                text.size());
  }
  if (sentence.size() > max_len) {
    throw Error(Errc::OverlongSentence,
                "sentence has " + std::to_string(sentence.size()) +
                    " characters, limit " + std::to_string(max_len));
  }

  // Bracket pairing yields nested-or-disjoint spans, so the only failure
  // validate_tree can report here is a duplicate triple like "((x))".
  AnnotatedSentence a;
  a.tree = validate_tree(std::move(spans));
  a.sentence = std::move(sentence);
  return a;
}

AnnotatedSentence parse_annotation_utf8(std::string_view text,
                                        uint32_t max_len) {
  return parse_annotation(decode_utf8(text), max_len);
}

std::u32string serialize_annotation(const AnnotatedSentence& a) {
  std::set<std::tuple<uint32_t, uint32_t, int>> seen;
  uint32_t prev_end = 0;
  bool first = true;
  for (const auto& root : a.tree.roots) {
    if (!first && root.span.start < prev_end) {
      throw Error(Errc::InvalidTree, "roots overlap or are out of order at " +
                                         span_text(root.span));
    }
    prev_end = root.span.end();
    first = false;
    check_node(root, static_cast<uint32_t>(a.sentence.size()), &seen);
  }
  for (char32_t c : a.sentence) {
    if (is_bracket_char(c)) {
      throw Error(Errc::InvalidTree, "sentence contains a bracket character");
    }
  }

  std::u32string out;
  out.reserve(a.sentence.size() + 2 * a.tree.span_count());
  emit_range(0, static_cast<uint32_t>(a.sentence.size()), a.tree.roots,
             a.sentence, &out);
  return out;
}

std::string serialize_annotation_utf8(const AnnotatedSentence& a) {
  return encode_utf8(serialize_annotation(a));
}

}  // namespace pw
