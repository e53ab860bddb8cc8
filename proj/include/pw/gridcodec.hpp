#ifndef PW_GRIDCODEC_HPP_
#define PW_GRIDCODEC_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pw/annotation.hpp"

namespace pw {

// O plus B/I per phrase type, 15 values. Enumeration order is the canonical
// tie-break order everywhere (argmax, sorting).
enum class OutputTag : uint8_t {
  O,
  BNoun, INoun,
  BVerb, IVerb,
  BQuantity, IQuantity,
  BPreposition, IPreposition,
  BConjunction, IConjunction,
  BModal, IModal,
  BClause, IClause,
};

inline constexpr int kNumOutputTags = 15;

inline OutputTag begin_tag(PhraseType t) {
  return static_cast<OutputTag>(1 + 2 * static_cast<int>(t));
}
inline OutputTag inside_tag(PhraseType t) {
  return static_cast<OutputTag>(2 + 2 * static_cast<int>(t));
}
inline bool is_begin(OutputTag t) {
  return t != OutputTag::O && (static_cast<int>(t) % 2 == 1);
}
inline bool is_inside(OutputTag t) {
  return t != OutputTag::O && (static_cast<int>(t) % 2 == 0);
}
inline PhraseType tag_type(OutputTag t) {
  return static_cast<PhraseType>((static_cast<int>(t) - 1) / 2);
}

const char* output_tag_name(OutputTag t);  // "O", "B-ming", "I-ming", ...
std::optional<OutputTag> parse_output_tag(std::string_view name);

// L x L output channel: row n (1-based) holds B/I runs of exactly n cells.
struct LabelGrid {
  uint32_t L = 0;
  uint32_t sentence_len = 0;
  std::vector<OutputTag> cells;  // row-major, (row-1)*L + col

  LabelGrid() = default;
  LabelGrid(uint32_t capacity, uint32_t len)
      : L(capacity), sentence_len(len),
        cells(static_cast<std::size_t>(capacity) * capacity, OutputTag::O) {}

  OutputTag at(uint32_t row, uint32_t col) const {
    return cells[static_cast<std::size_t>(row - 1) * L + col];
  }
  void set(uint32_t row, uint32_t col, OutputTag t) {
    cells[static_cast<std::size_t>(row - 1) * L + col] = t;
  }

  friend bool operator==(const LabelGrid&, const LabelGrid&) = default;
};

enum class RejectReason : uint8_t { WrongLength, IStart, TypeSwitch, Crossing };

inline constexpr int kNumRejectReasons = 4;

const char* reject_reason_name(RejectReason r);

struct Rejection {
  uint32_t row = 0;
  uint32_t col_start = 0;
  uint32_t col_end = 0;  // exclusive
  RejectReason reason = RejectReason::WrongLength;

  friend bool operator==(const Rejection&, const Rejection&) = default;
};

struct DecodeReport {
  // Accepted spans, nested-or-disjoint, sorted by
  // (start asc, len desc, containment rank asc).
  std::vector<PhraseSpan> spans;
  std::vector<Rejection> rejected;
};

// Throws Error{SpanTooLong} if a span is longer than L,
// Error{OverlongSentence} if the sentence exceeds L, and
// Error{GridConflict} when two spans of equal length collide in a row
// (possible only for same-extent spans of different types).
LabelGrid encode_labels(const AnnotatedSentence& a, uint32_t L);

// Optional ordering hook for score-driven conflict resolution; higher
// scores are accepted first. Without it, longer-first applies.
using SpanScorer = std::function<double(const PhraseSpan&)>;

// Per row, extracts maximal B/I runs and rejects WrongLength, IStart and
// TypeSwitch runs; across rows, greedily accepts the survivors and rejects
// Crossing spans. Never fails.
DecodeReport decode_labels(const LabelGrid& g,
                           const SpanScorer* scorer = nullptr);

enum class FlatPolicy : uint8_t { Outermost, Innermost };

// Collapses a nested-or-disjoint span set to one BIO layer of length
// sentence_len. Outermost keeps forest roots, Innermost keeps leaves.
std::vector<OutputTag> project_flat(const std::vector<PhraseSpan>& spans,
                                    uint32_t sentence_len, FlatPolicy policy);

// Spans of one flat BIO layer (for scoring flat projections).
std::vector<PhraseSpan> flat_spans(const std::vector<OutputTag>& tags);

struct CellDiff {
  uint32_t row;
  uint32_t col;
  OutputTag a;
  OutputTag b;

  friend bool operator==(const CellDiff&, const CellDiff&) = default;
};

// Throws Error{ShapeMismatch} when L or sentence_len differ.
std::vector<CellDiff> grid_diff(const LabelGrid& a, const LabelGrid& b);

}  // namespace pw

#endif  // PW_GRIDCODEC_HPP_
