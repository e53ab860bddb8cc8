#include "pw/corpus.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <set>

#include "pw/errors.hpp"
#include "pw/utf8.hpp"

namespace pw {

LoadResult load_corpus(std::istream& in, uint32_t max_len) {
  LoadResult result;
  std::string line;
  uint64_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.rfind("# ", 0) == 0) continue;
    try {
      result.sentences.push_back(parse_annotation_utf8(line, max_len));
    } catch (const Error& e) {
      result.errors.push_back({line_no, e.what()});
    }
  }
  return result;
}

LoadResult load_corpus_file(const std::string& path, uint32_t max_len) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoFailure, "cannot open " + path);
  return load_corpus(in, max_len);
}

namespace {

// Abstract syllabary: one scalar per syllable, drawn from the Yi block so
// every character is multi-byte in UTF-8 and visibly not a bracket.
constexpr char32_t kSyllableBase = 0xA000;
constexpr uint32_t kSyllablePool = 600;

uint64_t bounded(std::mt19937_64& rng, uint64_t m) {
  uint64_t lim = std::numeric_limits<uint64_t>::max() -
                 std::numeric_limits<uint64_t>::max() % m;
  uint64_t v;
  do {
    v = rng();
  } while (v >= lim);
  return v % m;
}

double unit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct LenDist {
  // (length, weight) pairs.
  std::vector<std::pair<uint32_t, double>> items;

  uint32_t sample(std::mt19937_64& rng) const {
    double total = 0.0;
    for (const auto& [len, w] : items) total += w;
    double x = unit(rng) * total;
    for (const auto& [len, w] : items) {
      if (x < w) return len;
      x -= w;
    }
    return items.back().first;
  }
  uint32_t shortest() const {
    uint32_t best = items.front().first;
    for (const auto& [len, w] : items) best = std::min(best, len);
    return best;
  }
};

struct ClassSpec {
  uint32_t count;
  LenDist lengths;
};

// Content classes are open (large, so test sentences hold words unseen in
// any training slice); function classes are small and closed.
const ClassSpec& class_spec(PosTag t) {
  static const std::array<ClassSpec, kNumPosTags> specs = {{
      /* ming  */ {6000, {{{1, 0.04}, {2, 0.46}, {3, 0.22}, {4, 0.12},
                           {5, 0.06}, {6, 0.05}, {7, 0.03}, {8, 0.02}}}},
      /* dong  */ {3000, {{{1, 0.05}, {2, 0.70}, {3, 0.20}, {4, 0.05}}}},
      /* xing  */ {600, {{{1, 0.10}, {2, 0.70}, {3, 0.20}}}},
      /* shu   */ {40, {{{1, 0.50}, {2, 0.50}}}},
      /* liang */ {25, {{{1, 0.90}, {2, 0.10}}}},
      /* jie   */ {20, {{{1, 0.80}, {2, 0.20}}}},
      /* lian  */ {15, {{{2, 0.80}, {3, 0.20}}}},
      /* yu    */ {12, {{{1, 0.80}, {2, 0.20}}}},
      /* ni    */ {10, {{{2, 0.60}, {4, 0.40}}}},
      /* zhu   */ {10, {{{1, 1.00}}}},
  }};
  return specs[static_cast<std::size_t>(t)];
}

std::u32string random_word(std::mt19937_64& rng, uint32_t len) {
  std::u32string w;
  w.reserve(len);
  for (uint32_t i = 0; i < len; ++i) {
    w.push_back(kSyllableBase +
                static_cast<char32_t>(bounded(rng, kSyllablePool)));
  }
  return w;
}

using Vocab = std::array<std::vector<std::u32string>, kNumPosTags>;

Vocab generate_vocabulary(std::mt19937_64& rng) {
  Vocab vocab;
  std::set<std::u32string> used;
  for (int t = 0; t < kNumPosTags; ++t) {
    const ClassSpec& spec = class_spec(static_cast<PosTag>(t));
    auto& words = vocab[static_cast<std::size_t>(t)];
    words.reserve(spec.count);
    while (words.size() < spec.count) {
      uint32_t len = spec.lengths.sample(rng);
      std::u32string w;
      for (int attempt = 0; attempt < 64; ++attempt) {
        w = random_word(rng, len);
        if (used.insert(w).second) break;
        w.clear();
        // Short-word space can fill up; grow the word instead of spinning.
        if (attempt == 31) ++len;
      }
      if (w.empty()) {
        w = random_word(rng, len + 2);
        used.insert(w);
      }
      words.push_back(w);
    }
  }
  return vocab;
}

// A generated fragment: bracketed annotation plus how it decomposes into
// plain words (for noise straddles).
struct Frag {
  std::u32string ann;
  std::u32string plain;
  std::vector<uint32_t> word_lens;

  void add_word(const std::u32string& w) {
    ann += w;
    plain += w;
    word_lens.push_back(static_cast<uint32_t>(w.size()));
  }
  void wrap(char32_t open, char32_t close) {
    ann.insert(ann.begin(), open);
    ann.push_back(close);
  }
  void append(Frag&& other) {
    ann += other.ann;
    plain += other.plain;
    word_lens.insert(word_lens.end(), other.word_lens.begin(),
                     other.word_lens.end());
  }
};

class Generator {
 public:
  Generator(const SynthConfig& cfg, const Vocab& vocab, std::mt19937_64& rng,
            SynthResult* out)
      : cfg_(cfg), w_(cfg.weights), vocab_(vocab), rng_(rng), out_(out) {
    // Node-depth budget; 0 behaves as a flat forest.
    depth_cap_ = cfg.max_depth == 0 ? 1 : cfg.max_depth;
  }

  Frag sentence() {
    Frag s;
    if (coin(w_.conj_lead)) s.append(conj_phrase());
    s.append(noun_phrase(1));
    if (depth_cap_ >= 2 && coin(w_.prep_before_verb)) {
      s.append(prep_phrase(1));
    }
    s.append(verb_phrase(1));
    if (depth_cap_ >= 2 && coin(w_.clause)) {
      s.append(clause(1));
    } else if (coin(w_.second_np)) {
      s.append(noun_phrase(1));
      if (coin(w_.quantity_in_vp)) s.append(quantity_phrase(1));
    }
    if (coin(w_.modal_tail)) s.append(modal_phrase());
    return s;
  }

  // Shortest possible sentence, for the length-cap fallback.
  Frag minimal_sentence() {
    Frag s;
    Frag np;
    np.add_word(shortest_word(PosTag::Ming));
    np.wrap(U'(', U')');
    Frag vp;
    vp.add_word(shortest_word(PosTag::Dong));
    vp.wrap(U'[', U']');
    s.append(std::move(np));
    s.append(std::move(vp));
    return s;
  }

 private:
  bool coin(double p) { return unit(rng_) < p; }

  const std::u32string& pick(PosTag t) {
    const auto& words = vocab_[static_cast<std::size_t>(t)];
    return words[bounded(rng_, words.size())];
  }

  std::u32string shortest_word(PosTag t) const {
    const auto& words = vocab_[static_cast<std::size_t>(t)];
    std::u32string best = words.front();
    for (const auto& w : words) {
      if (w.size() < best.size()) best = w;
    }
    return best;
  }

  Frag quantity_phrase(uint32_t depth) {
    (void)depth;
    Frag f;
    f.add_word(pick(PosTag::Shu));
    if (coin(0.8)) f.add_word(pick(PosTag::Liang));
    f.wrap(U'{', U'}');
    return f;
  }

  Frag noun_phrase(uint32_t depth) {
    Frag f;
    if (coin(w_.entity_np)) {
      f.add_word(pick(PosTag::Ming));
    } else {
      if (depth + 1 <= depth_cap_ && coin(w_.quantity_in_np)) {
        f.append(quantity_phrase(depth + 1));
      }
      if (coin(w_.adj_in_np)) f.add_word(pick(PosTag::Xing));
      f.add_word(pick(PosTag::Ming));
      if (coin(w_.double_noun)) f.add_word(pick(PosTag::Ming));
    }
    f.wrap(U'(', U')');
    if (f.plain.size() >= 2 && coin(w_.compound_entry)) {
      out_->lexicon.add(f.plain, PosTag::Ming);
      ++out_->compound_entries;
    }
    return f;
  }

  Frag verb_phrase(uint32_t depth) {
    Frag f;
    if (depth + 1 <= depth_cap_ && coin(w_.quantity_in_vp)) {
      f.append(quantity_phrase(depth + 1));
    }
    f.add_word(pick(PosTag::Dong));
    if (coin(w_.aux_in_vp)) f.add_word(pick(PosTag::Zhu));
    f.wrap(U'[', U']');
    return f;
  }

  Frag prep_phrase(uint32_t depth) {
    Frag f;
    f.add_word(pick(PosTag::Jie));
    f.append(noun_phrase(depth + 1));
    f.wrap(U'<', U'>');
    if (coin(w_.prep_compound)) {
      out_->lexicon.add(f.plain, PosTag::Jie);
      ++out_->compound_entries;
    }
    return f;
  }

  Frag conj_phrase() {
    Frag f;
    f.add_word(pick(PosTag::Lian));
    f.wrap(U'#', U'#');
    return f;
  }

  Frag modal_phrase() {
    Frag f;
    f.add_word(pick(PosTag::Yu));
    f.wrap(U'@', U'@');
    return f;
  }

  // Clause content always holds at least two phrases, so a clause can
  // never share its exact extent with a single child.
  Frag clause(uint32_t depth) {
    Frag f;
    int pattern = static_cast<int>(bounded(rng_, 3));
    switch (pattern) {
      case 0:  // serial verbs
        f.append(verb_phrase(depth + 1));
        f.append(noun_phrase(depth + 1));
        f.append(verb_phrase(depth + 1));
        f.append(noun_phrase(depth + 1));
        break;
      case 1:  // embedded statement
        f.append(noun_phrase(depth + 1));
        f.append(verb_phrase(depth + 1));
        f.append(noun_phrase(depth + 1));
        break;
      default:  // verb + object
        f.append(verb_phrase(depth + 1));
        f.append(noun_phrase(depth + 1));
        break;
    }
    if (depth + 2 <= depth_cap_ && coin(w_.clause_recursion)) {
      f.append(clause(depth + 1));
    }
    f.wrap(U'/', U'\\');
    return f;
  }

  const SynthConfig& cfg_;
  const GrammarWeights& w_;
  const Vocab& vocab_;
  std::mt19937_64& rng_;
  SynthResult* out_;
  uint32_t depth_cap_ = 1;
};

void check_weights(const GrammarWeights& w) {
  const double probs[] = {
      w.conj_lead,      w.modal_tail,     w.prep_before_verb,
      w.quantity_in_np, w.adj_in_np,      w.second_np,
      w.entity_np,      w.double_noun,    w.aux_in_vp,
      w.quantity_in_vp, w.clause,         w.clause_recursion,
      w.compound_entry, w.prep_compound,
  };
  for (double p : probs) {
    if (!(p >= 0.0 && p <= 1.0)) {
      throw Error(Errc::BadConfig, "grammar weight outside [0,1]");
    }
  }
}

}  // namespace

SynthResult synth_corpus(const SynthConfig& cfg) {
  check_weights(cfg.weights);
  if (!(cfg.noise_rate >= 0.0 && cfg.noise_rate <= 1.0)) {
    throw Error(Errc::BadConfig, "noise_rate outside [0,1]");
  }
  if (cfg.max_len < 4) {
    throw Error(Errc::BadConfig, "max_len too small to fit any sentence");
  }

  std::mt19937_64 rng(cfg.seed);

  bool have_custom = false;
  for (const auto& list : cfg.vocabulary) {
    if (!list.empty()) have_custom = true;
  }
  Vocab vocab;
  if (have_custom) {
    if (cfg.vocabulary[static_cast<int>(PosTag::Ming)].empty() ||
        cfg.vocabulary[static_cast<int>(PosTag::Dong)].empty()) {
      throw Error(Errc::BadConfig,
                  "custom vocabulary needs ming and dong words");
    }
    vocab = cfg.vocabulary;
    // Function-word classes fall back to generated words so the grammar
    // always has something to draw from.
    std::mt19937_64 fill_rng(cfg.seed ^ 0x9E3779B97F4A7C15ULL);
    for (int t = 0; t < kNumPosTags; ++t) {
      if (vocab[static_cast<std::size_t>(t)].empty()) {
        const ClassSpec& spec = class_spec(static_cast<PosTag>(t));
        std::set<std::u32string> used;
        while (vocab[static_cast<std::size_t>(t)].size() <
               std::min<uint32_t>(spec.count, 16)) {
          std::u32string w = random_word(fill_rng, spec.lengths.sample(fill_rng));
          if (used.insert(w).second) {
            vocab[static_cast<std::size_t>(t)].push_back(w);
          }
        }
      }
    }
  } else {
    vocab = generate_vocabulary(rng);
  }

  SynthResult out;
  out.vocabulary = vocab;
  for (int t = 0; t < kNumPosTags; ++t) {
    for (const auto& w : vocab[static_cast<std::size_t>(t)]) {
      out.lexicon.add(w, static_cast<PosTag>(t));
    }
  }

  Generator gen(cfg, vocab, rng, &out);
  out.corpus.reserve(cfg.count);
  for (uint32_t i = 0; i < cfg.count; ++i) {
    Frag frag;
    bool ok = false;
    for (int attempt = 0; attempt < 30 && !ok; ++attempt) {
      frag = gen.sentence();
      ok = frag.plain.size() <= cfg.max_len;
    }
    if (!ok) {
      frag = gen.minimal_sentence();
      if (frag.plain.size() > cfg.max_len) {
        throw Error(Errc::BadConfig,
                    "max_len cannot fit the shortest sentence pattern");
      }
    }

    if (cfg.noise_rate > 0.0 && unit(rng) < cfg.noise_rate &&
        frag.word_lens.size() >= 2) {
      std::size_t boundary =
          1 + bounded(rng, frag.word_lens.size() - 1);
      uint32_t pos = 0;
      for (std::size_t k = 0; k < boundary; ++k) pos += frag.word_lens[k];
      uint32_t left = frag.word_lens[boundary - 1];
      uint32_t right = frag.word_lens[boundary];
      uint32_t a = 1 + static_cast<uint32_t>(bounded(rng, std::min(2u, left)));
      uint32_t b = 1 + static_cast<uint32_t>(bounded(rng, std::min(2u, right)));
      std::u32string surface = frag.plain.substr(pos - a, a + b);
      double pick = unit(rng);
      PosTag tag = pick < 0.60   ? PosTag::Ming
                   : pick < 0.85 ? PosTag::Dong
                                 : PosTag::Xing;
      out.lexicon.add(surface, tag);
      ++out.noise_entries;
      out.noise_surfaces.push_back(surface);
    }

    out.corpus.push_back(parse_annotation(frag.ann, cfg.max_len));
  }
  return out;
}

CorpusStats corpus_stats(const std::vector<AnnotatedSentence>& corpus) {
  CorpusStats stats;
  stats.sentences = corpus.size();
  for (const auto& a : corpus) {
    uint32_t len = static_cast<uint32_t>(a.sentence.size());
    stats.max_len = std::max(stats.max_len, len);
    if (stats.length_hist.size() <= len) stats.length_hist.resize(len + 1);
    ++stats.length_hist[len];

    uint32_t depth = a.tree.depth();
    stats.max_depth = std::max(stats.max_depth, depth);
    if (stats.depth_hist.size() <= depth) stats.depth_hist.resize(depth + 1);
    ++stats.depth_hist[depth];

    for (const auto& s : a.tree.spans()) {
      ++stats.total_spans;
      ++stats.spans_per_type[static_cast<std::size_t>(s.type)];
    }
  }
  return stats;
}

std::string format_stats(const CorpusStats& s) {
  std::string out;
  char buf[128];
  std::snprintf(buf, sizeof(buf), "sentences\t%llu\n",
                static_cast<unsigned long long>(s.sentences));
  out += buf;
  std::snprintf(buf, sizeof(buf), "spans\t%llu\n",
                static_cast<unsigned long long>(s.total_spans));
  out += buf;
  for (int t = 0; t < kNumPhraseTypes; ++t) {
    std::snprintf(buf, sizeof(buf), "spans_%s\t%llu\n",
                  phrase_stem(static_cast<PhraseType>(t)),
                  static_cast<unsigned long long>(
                      s.spans_per_type[static_cast<std::size_t>(t)]));
    out += buf;
  }
  std::snprintf(buf, sizeof(buf), "max_len\t%u\nmax_depth\t%u\n", s.max_len,
                s.max_depth);
  out += buf;
  for (std::size_t len = 0; len < s.length_hist.size(); ++len) {
    if (s.length_hist[len] == 0) continue;
    std::snprintf(buf, sizeof(buf), "len_hist\t%zu\t%llu\n", len,
                  static_cast<unsigned long long>(s.length_hist[len]));
    out += buf;
  }
  for (std::size_t d = 0; d < s.depth_hist.size(); ++d) {
    if (s.depth_hist[d] == 0) continue;
    std::snprintf(buf, sizeof(buf), "depth_hist\t%zu\t%llu\n", d,
                  static_cast<unsigned long long>(s.depth_hist[d]));
    out += buf;
  }
  return out;
}

}  // namespace pw
