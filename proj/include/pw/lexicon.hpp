#ifndef PW_LEXICON_HPP_
#define PW_LEXICON_HPP_

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pw/annotation.hpp"

namespace pw {

// Input tag inventory, in word-class table order.
enum class PosTag : uint8_t {
  Ming,   // noun
  Dong,   // verb
  Xing,   // adjective
  Shu,    // numeral
  Liang,  // classifier
  Jie,    // preposition
  Lian,   // conjunction
  Yu,     // modal
  Ni,     // onomatopoeia
  Zhu,    // auxiliary
};

inline constexpr int kNumPosTags = 10;

const char* pos_stem(PosTag t);
std::optional<PosTag> parse_pos_stem(std::string_view stem);

// Bit i set <=> PosTag(i) present.
using TagMask = uint16_t;

inline TagMask tag_bit(PosTag t) {
  return static_cast<TagMask>(1u << static_cast<int>(t));
}

// Comma-joined stems in enumeration order, e.g. "ming,jie".
std::string tag_mask_names(TagMask mask);

struct Lexicon {
  // Ordered map keeps construction and serialization deterministic.
  std::map<std::u32string, TagMask> entries;

  bool empty() const { return entries.empty(); }
  std::size_t size() const { return entries.size(); }
  void add(const std::u32string& surface, PosTag tag) {
    entries[surface] = static_cast<TagMask>(entries[surface] | tag_bit(tag));
  }
};

struct LexiconStats {
  uint64_t lines = 0;     // data lines consumed
  uint64_t comments = 0;  // skipped blank/comment lines
};

// Lines are "surface<TAB>stem"; blank lines and lines starting "# " are
// skipped. Repeated surfaces union their tags. Throws Error{BadLine|BadTag|
// OverlongSurface} with the 1-based line number.
Lexicon load_lexicon(std::istream& in, uint32_t max_surface_len,
                     LexiconStats* stats = nullptr);
Lexicon load_lexicon_file(const std::string& path, uint32_t max_surface_len,
                          LexiconStats* stats = nullptr);

struct Match {
  uint32_t start = 0;
  uint32_t len = 0;
  TagMask tags = 0;

  friend bool operator==(const Match&, const Match&) = default;
};

struct MatchSet {
  // Sorted by (start, len); each (start, len) appears at most once.
  std::vector<Match> matches;
};

// Aho-Corasick automaton over Unicode scalars. Immutable after
// construction; concurrent find() calls share it safely.
class Matcher {
 public:
  // Throws Error{EmptyLexicon}.
  explicit Matcher(const Lexicon& lex);

  // Reports every occurrence of every entry, including overlaps.
  MatchSet find(std::u32string_view text) const;

  std::size_t node_count() const { return nodes_.size(); }
  std::size_t pattern_count() const { return patterns_.size(); }

 private:
  struct Node {
    std::map<char32_t, uint32_t> next;
    uint32_t fail = 0;
    int32_t pattern = -1;      // index into patterns_, -1 if none
    uint32_t output_link = 0;  // nearest pattern node on the fail chain
  };

  struct Pattern {
    uint32_t len;
    TagMask tags;
  };

  std::vector<Node> nodes_;
  std::vector<Pattern> patterns_;
};

// L x L input channel: row n holds the begin positions of length-n lexicon
// hits. Stored per column for cheap window queries.
struct KnowledgeGrid {
  uint32_t L = 0;
  uint32_t sentence_len = 0;
  // by_col[col] = (row, tags) pairs sorted by row.
  std::vector<std::vector<std::pair<uint32_t, TagMask>>> by_col;
  uint64_t dropped_over_dmax = 0;

  TagMask at(uint32_t row, uint32_t col) const;

  struct Record {
    uint32_t row;
    uint32_t col;
    TagMask tags;
  };
  // Non-empty cells sorted by (row, col).
  std::vector<Record> records() const;
};

KnowledgeGrid make_empty_grid(uint32_t L, uint32_t sentence_len);

// Places each match's tags at its begin position in row `len`; matches
// longer than d_max are dropped and counted.
KnowledgeGrid encode_knowledge(const MatchSet& ms, uint32_t sentence_len,
                               uint32_t L, uint32_t d_max);

}  // namespace pw

#endif  // PW_LEXICON_HPP_
