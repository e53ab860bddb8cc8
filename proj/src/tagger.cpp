#include "pw/tagger.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <random>
#include <sstream>

#include "pw/errors.hpp"

namespace pw {

namespace {

// Sentinels outside the Unicode range for positions before/after the text.
constexpr uint64_t kBosChar = 0x110000;
constexpr uint64_t kEosChar = 0x110001;

enum FeatKind : uint64_t {
  kUnigram = 1,
  kBigram = 2,
  kRowBucket = 3,
  kRowRaw = 4,
  kKnowCtx = 5,
  kExactHit = 6,
  kExactHitTag = 7,
  kExactHitBucket = 8,
};

inline uint64_t fnv_mix(uint64_t h, uint64_t v) {
  for (int k = 0; k < 8; ++k) {
    h ^= (v >> (k * 8)) & 0xFF;
    h *= 1099511628211ULL;
  }
  return h;
}

inline uint64_t feat_id(uint64_t kind, uint64_t a = 0, uint64_t b = 0,
                        uint64_t c = 0) {
  uint64_t h = 14695981039346656037ULL;
  h = fnv_mix(h, kind);
  h = fnv_mix(h, a);
  h = fnv_mix(h, b);
  h = fnv_mix(h, c);
  return h;
}

inline uint64_t char_at(const std::u32string& s, int64_t j) {
  if (j < 0) return kBosChar;
  if (j >= static_cast<int64_t>(s.size())) return kEosChar;
  return s[static_cast<std::size_t>(j)];
}

inline uint32_t row_bucket(uint32_t n) {
  if (n <= 5) return n;
  if (n <= 10) return 6;
  return 7;
}

uint64_t splitmix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

// Platform-independent bounded draw (std::uniform_int_distribution is
// implementation-defined).
uint64_t bounded(std::mt19937_64& rng, uint64_t m) {
  uint64_t lim = std::numeric_limits<uint64_t>::max() -
                 std::numeric_limits<uint64_t>::max() % m;
  uint64_t v;
  do {
    v = rng();
  } while (v >= lim);
  return v % m;
}

double logsumexp(const CellLogits& logits) {
  double mx = logits[0];
  for (double v : logits) mx = std::max(mx, v);
  double s = 0.0;
  for (double v : logits) s += std::exp(v - mx);
  return mx + std::log(s);
}

}  // namespace

uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b) {
  return splitmix64(seed ^ splitmix64(a ^ splitmix64(b)));
}

FeatureVec extract_features(const std::u32string& sentence,
                            const KnowledgeGrid& kg, uint32_t row,
                            uint32_t col, const FeatureConfig& cfg) {
  FeatureVec fv;
  fv.reserve(24);
  int64_t i = col;
  int64_t w = cfg.window;

  for (int64_t off = -w; off <= w; ++off) {
    fv.push_back(feat_id(kUnigram, static_cast<uint64_t>(off + w),
                         char_at(sentence, i + off)));
  }
  for (int64_t off = -w; off < w; ++off) {
    fv.push_back(feat_id(kBigram, static_cast<uint64_t>(off + w),
                         char_at(sentence, i + off),
                         char_at(sentence, i + off + 1)));
  }

  uint32_t bucket = row_bucket(row);
  fv.push_back(feat_id(kRowBucket, bucket));
  fv.push_back(feat_id(kRowRaw, row));

  if (cfg.d_max > 0) {
    for (int64_t off = -w; off <= w; ++off) {
      int64_t j = i + off;
      if (j < 0 || j >= static_cast<int64_t>(kg.by_col.size())) continue;
      for (const auto& [m, tags] : kg.by_col[static_cast<std::size_t>(j)]) {
        if (m > cfg.d_max) continue;
        for (int t = 0; t < kNumPosTags; ++t) {
          if (tags & (1u << t)) {
            fv.push_back(feat_id(kKnowCtx, static_cast<uint64_t>(off + w), m,
                                 static_cast<uint64_t>(t)));
          }
        }
      }
    }
    if (row <= cfg.d_max) {
      TagMask hit = kg.at(row, col);
      if (hit != 0) {
        fv.push_back(feat_id(kExactHit));
        for (int t = 0; t < kNumPosTags; ++t) {
          if (hit & (1u << t)) {
            fv.push_back(feat_id(kExactHitTag, static_cast<uint64_t>(t)));
          }
        }
        fv.push_back(feat_id(kExactHitBucket, bucket));
      }
    }
  }
  return fv;
}

CellLogits score_cell(const TaggerModel& m, const FeatureVec& f) {
  CellLogits logits{};
  for (uint64_t id : f) {
    auto it = m.weights.find(id);
    if (it == m.weights.end()) continue;
    for (int t = 0; t < kNumOutputTags; ++t) logits[t] += it->second[t];
  }
  return logits;
}

CellLogits softmax(const CellLogits& logits) {
  double lse = logsumexp(logits);
  CellLogits p{};
  for (int t = 0; t < kNumOutputTags; ++t) p[t] = std::exp(logits[t] - lse);
  return p;
}

double cell_nll(const CellLogits& logits, OutputTag gold) {
  return logsumexp(logits) - logits[static_cast<int>(gold)];
}

double loss(const std::vector<CellLogits>& logits,
            const std::vector<OutputTag>& gold) {
  double total = 0.0;
  for (std::size_t k = 0; k < logits.size(); ++k) {
    total += cell_nll(logits[k], gold[k]);
  }
  return total;
}

std::vector<Cell> sample_mask(const LabelGrid& gold, double negative_ratio,
                              uint64_t seed) {
  std::vector<Cell> positives;
  std::vector<Cell> pool;
  for (uint32_t n = 1; n <= gold.L; ++n) {
    if (n > gold.sentence_len) break;
    for (uint32_t i = 0; i + n <= gold.sentence_len; ++i) {
      if (gold.at(n, i) != OutputTag::O) {
        positives.push_back({n, i});
      } else {
        pool.push_back({n, i});
      }
    }
  }
  if (positives.empty()) return {};

  uint64_t want = static_cast<uint64_t>(
      std::llround(negative_ratio * static_cast<double>(positives.size())));
  uint64_t k = std::min<uint64_t>(want, pool.size());

  std::mt19937_64 rng(seed);
  for (uint64_t idx = 0; idx < k; ++idx) {
    uint64_t j = idx + bounded(rng, pool.size() - idx);
    std::swap(pool[idx], pool[j]);
  }

  std::vector<Cell> mask = std::move(positives);
  mask.insert(mask.end(), pool.begin(), pool.begin() + k);
  std::sort(mask.begin(), mask.end(), [](const Cell& a, const Cell& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  return mask;
}

TrainResult train(const std::vector<AnnotatedSentence>& corpus,
                  const Lexicon& lex, uint32_t L, const TrainConfig& cfg,
                  const EpochCallback& on_epoch) {
  if (corpus.empty()) throw Error(Errc::EmptyCorpus, "no training sentences");

  std::unique_ptr<Matcher> matcher;
  if (cfg.feat.d_max > 0 && !lex.empty()) {
    matcher = std::make_unique<Matcher>(lex);
  }

  std::vector<LabelGrid> gold;
  std::vector<KnowledgeGrid> know;
  gold.reserve(corpus.size());
  know.reserve(corpus.size());
  for (const auto& a : corpus) {
    gold.push_back(encode_labels(a, L));
    uint32_t len = static_cast<uint32_t>(a.sentence.size());
    if (matcher) {
      know.push_back(
          encode_knowledge(matcher->find(a.sentence), len, L, cfg.feat.d_max));
    } else {
      know.push_back(make_empty_grid(L, len));
    }
  }

  TrainResult result;
  result.model.cfg = cfg.feat;
  result.model.L = L;
  auto& weights = result.model.weights;

  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

  std::vector<std::array<double, kNumOutputTags>*> rows;
  for (uint32_t epoch = 0; epoch < cfg.epochs; ++epoch) {
    if (cfg.shuffle) {
      std::mt19937_64 rng(mix_seed(cfg.seed, 0x5A5A5A5AULL, epoch));
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        std::size_t j = i + bounded(rng, order.size() - i);
        std::swap(order[i], order[j]);
      }
    }
    double eta_epoch = cfg.lr_decay ? cfg.lr / (1.0 + epoch) : cfg.lr;
    double total_nll = 0.0;
    uint64_t cells = 0;

    for (std::size_t si : order) {
      const auto& sent = corpus[si].sentence;
      std::vector<Cell> mask =
          sample_mask(gold[si], cfg.negative_ratio,
                      mix_seed(cfg.seed, epoch + 1, si));
      for (const Cell& cell : mask) {
        FeatureVec fv =
            extract_features(sent, know[si], cell.row, cell.col, cfg.feat);
        // One map access per feature: pointers stay valid across the
        // rehash an insert may trigger.
        rows.clear();
        CellLogits logits{};
        for (uint64_t id : fv) {
          auto& wrow = weights[id];
          rows.push_back(&wrow);
          for (int t = 0; t < kNumOutputTags; ++t) logits[t] += wrow[t];
        }
        OutputTag gold_tag = gold[si].at(cell.row, cell.col);
        total_nll += cell_nll(logits, gold_tag);
        ++cells;

        CellLogits p = softmax(logits);
        double eta = eta_epoch / static_cast<double>(fv.size());
        for (int t = 0; t < kNumOutputTags; ++t) {
          double g = p[t] - (t == static_cast<int>(gold_tag) ? 1.0 : 0.0);
          if (g == 0.0) continue;
          double step = eta * g;
          for (auto* wrow : rows) (*wrow)[static_cast<std::size_t>(t)] -= step;
        }
      }
    }

    EpochLog entry{epoch + 1, cells > 0 ? total_nll / cells : 0.0, cells};
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }
  return result;
}

Prediction predict(const TaggerModel& m, const std::u32string& sentence,
                   const Matcher* matcher) {
  uint32_t len = static_cast<uint32_t>(sentence.size());
  if (len > m.L) {
    throw Error(Errc::OverlongSentence,
                "sentence has " + std::to_string(len) +
                    " characters, model capacity " + std::to_string(m.L));
  }

  KnowledgeGrid kg = (m.cfg.d_max > 0 && matcher)
                         ? encode_knowledge(matcher->find(sentence), len, m.L,
                                            m.cfg.d_max)
                         : make_empty_grid(m.L, len);

  Prediction out;
  out.grid = LabelGrid(m.L, len);
  for (uint32_t n = 1; n <= std::min(m.L, len); ++n) {
    for (uint32_t i = 0; i + n <= len; ++i) {
      FeatureVec fv = extract_features(sentence, kg, n, i, m.cfg);
      CellLogits logits = score_cell(m, fv);
      int best = 0;
      for (int t = 1; t < kNumOutputTags; ++t) {
        if (logits[t] > logits[best]) best = t;
      }
      out.grid.set(n, i, static_cast<OutputTag>(best));
    }
  }

  out.report = decode_labels(out.grid);
  out.annotated.sentence = sentence;
  out.annotated.tree = validate_tree(out.report.spans);
  return out;
}

void save_model(const TaggerModel& m, std::ostream& os) {
  std::vector<std::pair<uint64_t, const std::array<double, kNumOutputTags>*>>
      items;
  items.reserve(m.weights.size());
  for (const auto& [id, row] : m.weights) items.emplace_back(id, &row);
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  uint64_t triples = 0;
  for (const auto& [id, row] : items) {
    (void)id;
    for (int t = 0; t < kNumOutputTags; ++t) {
      if ((*row)[t] != 0.0) ++triples;
    }
  }

  os << "pwmodel\t1\n";
  os << "L\t" << m.L << "\n";
  os << "window\t" << m.cfg.window << "\n";
  os << "dmax\t" << m.cfg.d_max << "\n";
  os << "tags";
  for (int t = 0; t < kNumOutputTags; ++t) {
    os << (t == 0 ? '\t' : ',') << output_tag_name(static_cast<OutputTag>(t));
  }
  os << "\n";
  os << "weights\t" << triples << "\n";

  char buf[64];
  for (const auto& [id, row] : items) {
    for (int t = 0; t < kNumOutputTags; ++t) {
      double v = (*row)[t];
      if (v == 0.0) continue;
      // %a round-trips doubles exactly.
      std::snprintf(buf, sizeof(buf), "%016llx\t%s\t%a\n",
                    static_cast<unsigned long long>(id),
                    output_tag_name(static_cast<OutputTag>(t)), v);
      os << buf;
    }
  }
}

void save_model_file(const TaggerModel& m, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error(Errc::IoFailure, "cannot write " + path);
  save_model(m, os);
  os.flush();
  if (!os) throw Error(Errc::IoFailure, "write failed for " + path);
}

namespace {

std::pair<std::string, std::string> read_kv(std::istream& is,
                                            const char* expect_key) {
  std::string line;
  if (!std::getline(is, line)) {
    throw Error(Errc::IoFailure, "truncated model file");
  }
  auto tab = line.find('\t');
  if (tab == std::string::npos) {
    throw Error(Errc::IoFailure, "malformed model line: " + line);
  }
  std::string key = line.substr(0, tab);
  if (expect_key && key != expect_key) {
    throw Error(Errc::IoFailure,
                "expected \"" + std::string(expect_key) + "\", got \"" + key +
                    "\"");
  }
  return {key, line.substr(tab + 1)};
}

}  // namespace

TaggerModel load_model(std::istream& is) {
  TaggerModel m;
  auto [k0, version] = read_kv(is, "pwmodel");
  if (version != "1") {
    throw Error(Errc::IoFailure, "unsupported model version " + version);
  }
  m.L = static_cast<uint32_t>(std::stoul(read_kv(is, "L").second));
  m.cfg.window =
      static_cast<uint32_t>(std::stoul(read_kv(is, "window").second));
  m.cfg.d_max = static_cast<uint32_t>(std::stoul(read_kv(is, "dmax").second));
  auto tags = read_kv(is, "tags").second;
  std::string expect_tags;
  for (int t = 0; t < kNumOutputTags; ++t) {
    if (t) expect_tags += ',';
    expect_tags += output_tag_name(static_cast<OutputTag>(t));
  }
  if (tags != expect_tags) {
    throw Error(Errc::IoFailure, "model tag set mismatch");
  }
  uint64_t triples = std::stoull(read_kv(is, "weights").second);

  std::string line;
  for (uint64_t i = 0; i < triples; ++i) {
    if (!std::getline(is, line)) {
      throw Error(Errc::IoFailure, "truncated weight table");
    }
    auto t1 = line.find('\t');
    auto t2 = line.find('\t', t1 + 1);
    if (t1 == std::string::npos || t2 == std::string::npos) {
      throw Error(Errc::IoFailure, "malformed weight line: " + line);
    }
    uint64_t id = std::stoull(line.substr(0, t1), nullptr, 16);
    auto tag = parse_output_tag(line.substr(t1 + 1, t2 - t1 - 1));
    if (!tag) throw Error(Errc::IoFailure, "unknown tag in weight line");
    double v = std::strtod(line.c_str() + t2 + 1, nullptr);
    m.weights[id][static_cast<int>(*tag)] = v;
  }
  return m;
}

TaggerModel load_model_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error(Errc::IoFailure, "cannot open " + path);
  return load_model(is);
}

}  // namespace pw
