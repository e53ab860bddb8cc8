// Test-side oracles and generators, independent of the library's
// implementation paths.

#ifndef PW_TESTS_HELPERS_HPP_
#define PW_TESTS_HELPERS_HPP_

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "pw/annotation.hpp"
#include "pw/lexicon.hpp"

namespace pwtest {

inline uint64_t bounded(std::mt19937_64& rng, uint64_t m) {
  uint64_t lim = std::numeric_limits<uint64_t>::max() -
                 std::numeric_limits<uint64_t>::max() % m;
  uint64_t v;
  do {
    v = rng();
  } while (v >= lim);
  return v % m;
}

// Quadratic all-substring scan: the independent oracle for the matcher.
inline pw::MatchSet brute_force_matches(const pw::Lexicon& lex,
                                        const std::u32string& text) {
  pw::MatchSet out;
  for (uint32_t start = 0; start < text.size(); ++start) {
    for (uint32_t len = 1; start + len <= text.size(); ++len) {
      auto it = lex.entries.find(text.substr(start, len));
      if (it != lex.entries.end()) {
        out.matches.push_back({start, len, it->second});
      }
    }
  }
  std::sort(out.matches.begin(), out.matches.end(),
            [](const pw::Match& a, const pw::Match& b) {
              return a.start != b.start ? a.start < b.start : a.len < b.len;
            });
  return out;
}

// Random sentence characters: ASCII letters mixed with CJK so UTF-8 paths
// stay exercised. Never emits bracket characters.
inline char32_t random_plain_char(std::mt19937_64& rng) {
  if (bounded(rng, 4) == 0) {
    return static_cast<char32_t>(0x4E00 + bounded(rng, 512));
  }
  return static_cast<char32_t>(U'a' + bounded(rng, 26));
}

inline std::u32string random_sentence(std::mt19937_64& rng, uint32_t len) {
  std::u32string s;
  s.reserve(len);
  for (uint32_t i = 0; i < len; ++i) s.push_back(random_plain_char(rng));
  return s;
}

// Random valid span forests. Children never share their parent's exact
// extent, so the forests are representable in the per-length label grid.
inline void random_forest(std::mt19937_64& rng, uint32_t lo, uint32_t hi,
                          uint32_t depth, bool forbid_full_extent,
                          std::vector<pw::PhraseSpan>* out) {
  if (depth == 0 || lo >= hi) return;
  uint32_t pos = lo;
  while (pos < hi) {
    if (bounded(rng, 3) == 0) {  // leave a gap
      pos += 1 + static_cast<uint32_t>(bounded(rng, 2));
      continue;
    }
    uint32_t max_len = hi - pos;
    uint32_t len = 1 + static_cast<uint32_t>(bounded(rng, max_len));
    if (forbid_full_extent && pos == lo && len == hi - lo) {
      if (hi - lo == 1) {
        pos += 1;
        continue;
      }
      len -= 1;
    }
    auto type = static_cast<pw::PhraseType>(bounded(rng, 7));
    out->push_back({pos, len, type});
    if (len >= 2 && depth > 1 && bounded(rng, 2) == 0) {
      random_forest(rng, pos, pos + len, depth - 1, true, out);
    }
    pos += len;
    if (bounded(rng, 2) == 0) pos += static_cast<uint32_t>(bounded(rng, 3));
  }
}

inline pw::AnnotatedSentence random_annotated(std::mt19937_64& rng,
                                              uint32_t max_len,
                                              uint32_t max_depth) {
  uint32_t len = static_cast<uint32_t>(bounded(rng, max_len + 1));
  pw::AnnotatedSentence a;
  a.sentence = random_sentence(rng, len);
  std::vector<pw::PhraseSpan> spans;
  random_forest(rng, 0, len, max_depth, false, &spans);
  a.tree = pw::validate_tree(std::move(spans));
  return a;
}

// Small random lexicon over a tiny alphabet, dense in overlaps.
inline pw::Lexicon random_lexicon(std::mt19937_64& rng, uint32_t max_entries) {
  pw::Lexicon lex;
  uint32_t n = 1 + static_cast<uint32_t>(bounded(rng, max_entries));
  for (uint32_t i = 0; i < n; ++i) {
    uint32_t len = 1 + static_cast<uint32_t>(bounded(rng, 6));
    std::u32string surface;
    for (uint32_t k = 0; k < len; ++k) {
      surface.push_back(static_cast<char32_t>(U'a' + bounded(rng, 3)));
    }
    lex.add(surface, static_cast<pw::PosTag>(bounded(rng, pw::kNumPosTags)));
  }
  return lex;
}

inline std::u32string random_small_alphabet_text(std::mt19937_64& rng,
                                                 uint32_t max_len) {
  uint32_t len = static_cast<uint32_t>(bounded(rng, max_len + 1));
  std::u32string s;
  for (uint32_t i = 0; i < len; ++i) {
    s.push_back(static_cast<char32_t>(U'a' + bounded(rng, 3)));
  }
  return s;
}

}  // namespace pwtest

#endif  // PW_TESTS_HELPERS_HPP_
