#include "pw/lexicon.hpp"

#include <algorithm>
#include <deque>
#include <fstream>

#include "pw/errors.hpp"
#include "pw/utf8.hpp"

namespace pw {

namespace {

constexpr const char* kPosStems[kNumPosTags] = {
    "ming", "dong", "xing", "shu", "liang",
    "jie",  "lian", "yu",   "ni",  "zhu",
};

}  // namespace

const char* pos_stem(PosTag t) { return kPosStems[static_cast<int>(t)]; }

std::optional<PosTag> parse_pos_stem(std::string_view stem) {
  for (int i = 0; i < kNumPosTags; ++i) {
    if (stem == kPosStems[i]) return static_cast<PosTag>(i);
  }
  return std::nullopt;
}

std::string tag_mask_names(TagMask mask) {
  std::string out;
  for (int i = 0; i < kNumPosTags; ++i) {
    if (mask & (1u << i)) {
      if (!out.empty()) out += ',';
      out += kPosStems[i];
    }
  }
  return out;
}

Lexicon load_lexicon(std::istream& in, uint32_t max_surface_len,
                     LexiconStats* stats) {
  Lexicon lex;
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.rfind("# ", 0) == 0) {
      if (stats) ++stats->comments;
      continue;
    }
    auto tab = line.find('\t');
    if (tab == std::string::npos) {
      throw Error(Errc::BadLine, "missing tab separator", line_no);
    }
    std::string surface_bytes = line.substr(0, tab);
    std::string stem = line.substr(tab + 1);
    std::u32string surface = decode_utf8(surface_bytes);
    if (surface.empty()) {
      throw Error(Errc::BadLine, "empty surface", line_no);
    }
    for (char32_t c : surface) {
      if (is_bracket_char(c)) {
        throw Error(Errc::BadLine, "surface contains a bracket character",
                    line_no);
      }
    }
    if (surface.size() > max_surface_len) {
      throw Error(Errc::OverlongSurface,
                  "surface has " + std::to_string(surface.size()) +
                      " characters, limit " + std::to_string(max_surface_len),
                  line_no);
    }
    auto tag = parse_pos_stem(stem);
    if (!tag) {
      throw Error(Errc::BadTag, "unknown tag stem \"" + stem + "\"", line_no);
    }
    lex.add(surface, *tag);
    if (stats) ++stats->lines;
  }
  return lex;
}

Lexicon load_lexicon_file(const std::string& path, uint32_t max_surface_len,
                          LexiconStats* stats) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path);
  return load_lexicon(in, max_surface_len, stats);
}

Matcher::Matcher(const Lexicon& lex) {
  if (lex.empty()) throw Error(Errc::EmptyLexicon, "lexicon has no entries");

  nodes_.emplace_back();  // root
  // std::map iteration makes the trie layout deterministic.
  for (const auto& [surface, tags] : lex.entries) {
    uint32_t state = 0;
    for (char32_t c : surface) {
      auto it = nodes_[state].next.find(c);
      if (it == nodes_[state].next.end()) {
        uint32_t id = static_cast<uint32_t>(nodes_.size());
        nodes_[state].next.emplace(c, id);
        nodes_.emplace_back();
        state = id;
      } else {
        state = it->second;
      }
    }
    nodes_[state].pattern = static_cast<int32_t>(patterns_.size());
    patterns_.push_back({static_cast<uint32_t>(surface.size()), tags});
  }

  // Breadth-first failure links; output links collapse the fail chain to
  // its nearest pattern node.
  std::deque<uint32_t> queue;
  for (const auto& [c, child] : nodes_[0].next) {
    (void)c;
    nodes_[child].fail = 0;
    queue.push_back(child);
  }
  while (!queue.empty()) {
    uint32_t u = queue.front();
    queue.pop_front();
    const Node& nu = nodes_[u];
    nodes_[u].output_link =
        nodes_[nu.fail].pattern >= 0 ? nu.fail : nodes_[nu.fail].output_link;
    for (const auto& [c, v] : nodes_[u].next) {
      uint32_t f = nodes_[u].fail;
      while (f != 0 && nodes_[f].next.find(c) == nodes_[f].next.end()) {
        f = nodes_[f].fail;
      }
      auto it = nodes_[f].next.find(c);
      nodes_[v].fail = (it != nodes_[f].next.end() && it->second != v)
                           ? it->second
                           : 0;
      queue.push_back(v);
    }
  }
}

MatchSet Matcher::find(std::u32string_view text) const {
  MatchSet out;
  uint32_t state = 0;
  for (std::size_t pos = 0; pos < text.size(); ++pos) {
    char32_t c = text[pos];
    while (true) {
      auto it = nodes_[state].next.find(c);
      if (it != nodes_[state].next.end()) {
        state = it->second;
        break;
      }
      if (state == 0) break;
      state = nodes_[state].fail;
    }
    for (uint32_t s = state; s != 0;) {
      if (nodes_[s].pattern >= 0) {
        const Pattern& p = patterns_[static_cast<std::size_t>(
            nodes_[s].pattern)];
        out.matches.push_back(
            {static_cast<uint32_t>(pos + 1 - p.len), p.len, p.tags});
      }
      s = nodes_[s].output_link;
    }
  }
  std::sort(out.matches.begin(), out.matches.end(),
            [](const Match& a, const Match& b) {
              return a.start != b.start ? a.start < b.start : a.len < b.len;
            });
  return out;
}

TagMask KnowledgeGrid::at(uint32_t row, uint32_t col) const {
  if (col >= by_col.size()) return 0;
  for (const auto& [r, tags] : by_col[col]) {
    if (r == row) return tags;
    if (r > row) break;
  }
  return 0;
}

std::vector<KnowledgeGrid::Record> KnowledgeGrid::records() const {
  std::vector<Record> recs;
  for (uint32_t col = 0; col < by_col.size(); ++col) {
    for (const auto& [row, tags] : by_col[col]) {
      recs.push_back({row, col, tags});
    }
  }
  std::sort(recs.begin(), recs.end(), [](const Record& a, const Record& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  return recs;
}

KnowledgeGrid make_empty_grid(uint32_t L, uint32_t sentence_len) {
  KnowledgeGrid g;
  g.L = L;
  g.sentence_len = sentence_len;
  g.by_col.resize(sentence_len);
  return g;
}

KnowledgeGrid encode_knowledge(const MatchSet& ms, uint32_t sentence_len,
                               uint32_t L, uint32_t d_max) {
  if (d_max > L) throw Error(Errc::BadConfig, "d_max exceeds capacity L");
  KnowledgeGrid g = make_empty_grid(L, sentence_len);
  for (const Match& m : ms.matches) {
    if (m.len > d_max) {
      ++g.dropped_over_dmax;
      continue;
    }
    g.by_col[m.start].emplace_back(m.len, m.tags);
  }
  for (auto& col : g.by_col) {
    std::sort(col.begin(), col.end());
  }
  return g;
}

}  // namespace pw
