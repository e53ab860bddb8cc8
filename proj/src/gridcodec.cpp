#include "pw/gridcodec.hpp"

#include <algorithm>

#include "pw/errors.hpp"

namespace pw {

namespace {

constexpr const char* kTagNames[kNumOutputTags] = {
    "O",
    "B-ming", "I-ming",
    "B-dong", "I-dong",
    "B-shu",  "I-shu",
    "B-jie",  "I-jie",
    "B-lian", "I-lian",
    "B-yu",   "I-yu",
    "B-cong", "I-cong",
};

constexpr const char* kReasonNames[kNumRejectReasons] = {
    "WrongLength", "IStart", "TypeSwitch", "Crossing",
};

}  // namespace

const char* output_tag_name(OutputTag t) {
  return kTagNames[static_cast<int>(t)];
}

std::optional<OutputTag> parse_output_tag(std::string_view name) {
  for (int i = 0; i < kNumOutputTags; ++i) {
    if (name == kTagNames[i]) return static_cast<OutputTag>(i);
  }
  return std::nullopt;
}

const char* reject_reason_name(RejectReason r) {
  return kReasonNames[static_cast<int>(r)];
}

LabelGrid encode_labels(const AnnotatedSentence& a, uint32_t L) {
  uint32_t len = static_cast<uint32_t>(a.sentence.size());
  if (len > L) {
    throw Error(Errc::OverlongSentence,
                "sentence has " + std::to_string(len) + " characters, grid "
                "capacity " + std::to_string(L));
  }
  LabelGrid g(L, len);
  for (const PhraseSpan& s : a.tree.spans()) {
    if (s.len > L) {
      throw Error(Errc::SpanTooLong,
                  "span length " + std::to_string(s.len) + " exceeds " +
                      std::to_string(L));
    }
    for (uint32_t k = 0; k < s.len; ++k) {
      if (g.at(s.len, s.start + k) != OutputTag::O) {
        throw Error(Errc::GridConflict,
                    "row " + std::to_string(s.len) +
                        " already holds a span at column " +
                        std::to_string(s.start + k));
      }
      g.set(s.len, s.start + k,
            k == 0 ? begin_tag(s.type) : inside_tag(s.type));
    }
  }
  return g;
}

DecodeReport decode_labels(const LabelGrid& g, const SpanScorer* scorer) {
  DecodeReport report;
  std::vector<PhraseSpan> candidates;

  uint32_t limit = std::min(g.sentence_len, g.L);
  for (uint32_t n = 1; n <= g.L; ++n) {
    uint32_t col = 0;
    while (col < limit) {
      if (g.at(n, col) == OutputTag::O) {
        ++col;
        continue;
      }
      uint32_t start = col;
      OutputTag first = g.at(n, col);
      ++col;
      while (col < limit && is_inside(g.at(n, col))) ++col;
      uint32_t run_len = col - start;

      if (run_len != n) {
        report.rejected.push_back(
            {n, start, start + run_len, RejectReason::WrongLength});
      } else if (is_inside(first)) {
        // Row 1 holds single-B runs only; a lone I there counts as a
        // wrong-length run rather than an I-start.
        report.rejected.push_back({n, start, start + run_len,
                                   n == 1 ? RejectReason::WrongLength
                                          : RejectReason::IStart});
      } else {
        PhraseType t = tag_type(first);
        bool switched = false;
        for (uint32_t k = start + 1; k < start + run_len; ++k) {
          if (tag_type(g.at(n, k)) != t) {
            switched = true;
            break;
          }
        }
        if (switched) {
          report.rejected.push_back(
              {n, start, start + run_len, RejectReason::TypeSwitch});
        } else {
          candidates.push_back({start, n, t});
        }
      }
    }
  }

  // Longest first (or score-descending when a scorer is supplied), then
  // leftmost, then the annotation module's type order.
  std::stable_sort(
      candidates.begin(), candidates.end(),
      [scorer](const PhraseSpan& a, const PhraseSpan& b) {
        if (scorer) {
          double sa = (*scorer)(a), sb = (*scorer)(b);
          if (sa != sb) return sa > sb;
        }
        if (a.len != b.len) return a.len > b.len;
        if (a.start != b.start) return a.start < b.start;
        return containment_rank(a.type) < containment_rank(b.type);
      });

  for (const PhraseSpan& s : candidates) {
    bool crossing = false;
    for (const PhraseSpan& acc : report.spans) {
      if (spans_cross(acc, s)) {
        crossing = true;
        break;
      }
    }
    if (crossing) {
      report.rejected.push_back(
          {s.len, s.start, s.start + s.len, RejectReason::Crossing});
    } else {
      report.spans.push_back(s);
    }
  }

  std::sort(report.spans.begin(), report.spans.end(),
            [](const PhraseSpan& a, const PhraseSpan& b) {
              if (a.start != b.start) return a.start < b.start;
              if (a.end() != b.end()) return a.end() > b.end();
              return containment_rank(a.type) < containment_rank(b.type);
            });
  return report;
}

std::vector<OutputTag> project_flat(const std::vector<PhraseSpan>& spans,
                                    uint32_t sentence_len,
                                    FlatPolicy policy) {
  PhraseTree forest = validate_tree(spans);
  std::vector<PhraseSpan> selected;
  if (policy == FlatPolicy::Outermost) {
    for (const auto& r : forest.roots) selected.push_back(r.span);
  } else {
    auto walk = [&](auto&& self, const PhraseNode& n) -> void {
      if (n.children.empty()) {
        selected.push_back(n.span);
        return;
      }
      for (const auto& c : n.children) self(self, c);
    };
    for (const auto& r : forest.roots) walk(walk, r);
  }

  std::vector<OutputTag> tags(sentence_len, OutputTag::O);
  for (const PhraseSpan& s : selected) {
    for (uint32_t k = 0; k < s.len; ++k) {
      tags[s.start + k] = k == 0 ? begin_tag(s.type) : inside_tag(s.type);
    }
  }
  return tags;
}

std::vector<PhraseSpan> flat_spans(const std::vector<OutputTag>& tags) {
  std::vector<PhraseSpan> spans;
  uint32_t i = 0;
  uint32_t n = static_cast<uint32_t>(tags.size());
  while (i < n) {
    if (!is_begin(tags[i])) {
      ++i;
      continue;
    }
    PhraseType t = tag_type(tags[i]);
    uint32_t start = i;
    ++i;
    while (i < n && tags[i] == inside_tag(t)) ++i;
    spans.push_back({start, i - start, t});
  }
  return spans;
}

std::vector<CellDiff> grid_diff(const LabelGrid& a, const LabelGrid& b) {
  if (a.L != b.L || a.sentence_len != b.sentence_len) {
    throw Error(Errc::ShapeMismatch, "grids have different shapes");
  }
  std::vector<CellDiff> diffs;
  for (uint32_t row = 1; row <= a.L; ++row) {
    for (uint32_t col = 0; col < a.L; ++col) {
      if (a.at(row, col) != b.at(row, col)) {
        diffs.push_back({row, col, a.at(row, col), b.at(row, col)});
      }
    }
  }
  return diffs;
}

}  // namespace pw
