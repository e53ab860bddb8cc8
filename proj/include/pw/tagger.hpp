#ifndef PW_TAGGER_HPP_
#define PW_TAGGER_HPP_

#include <array>
#include <cstdint>
#include <functional>
#include <istream>
#include <ostream>
#include <string>
#include <unordered_map>
#include <vector>

#include "pw/annotation.hpp"
#include "pw/gridcodec.hpp"
#include "pw/lexicon.hpp"

namespace pw {

struct FeatureConfig {
  uint32_t window = 2;  // character context radius
  uint32_t d_max = 50;  // knowledge rows used; 0 disables knowledge features

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

// Hashed feature identifiers, each with implicit weight 1.
using FeatureVec = std::vector<uint64_t>;

// Deterministic for fixed (sentence, grid, row, col, config).
FeatureVec extract_features(const std::u32string& sentence,
                            const KnowledgeGrid& kg, uint32_t row,
                            uint32_t col, const FeatureConfig& cfg);

using CellLogits = std::array<double, kNumOutputTags>;

// Sparse multinomial logistic scorer over the 15 output tags.
struct TaggerModel {
  FeatureConfig cfg;
  uint32_t L = kDefaultMaxLen;
  std::unordered_map<uint64_t, std::array<double, kNumOutputTags>> weights;
};

// logit(t) = sum of weights(f, t) over features; missing weights read 0.
CellLogits score_cell(const TaggerModel& m, const FeatureVec& f);

CellLogits softmax(const CellLogits& logits);

// -log p(gold) for one cell, computed stably from raw logits.
double cell_nll(const CellLogits& logits, OutputTag gold);

// Summed cross-entropy over masked cells: logits[k] scores the cell whose
// gold tag is gold[k].
double loss(const std::vector<CellLogits>& logits,
            const std::vector<OutputTag>& gold);

struct Cell {
  uint32_t row = 0;
  uint32_t col = 0;

  friend bool operator==(const Cell&, const Cell&) = default;
};

// All in-range non-O cells plus min(round(r * #non-O), #in-range O) O-cells
// drawn uniformly without replacement. Deterministic for a fixed seed;
// returned row-major. Empty when the grid has no non-O cell.
std::vector<Cell> sample_mask(const LabelGrid& gold, double negative_ratio,
                              uint64_t seed);

struct TrainConfig {
  uint32_t epochs = 15;
  double lr = 0.1;
  bool lr_decay = false;  // lr / (1 + epoch) when set
  double negative_ratio = 2.0;
  uint64_t seed = 1;
  bool shuffle = true;
  FeatureConfig feat;
};

struct EpochLog {
  uint32_t epoch = 0;  // 1-based
  double avg_loss = 0.0;
  uint64_t masked_cells = 0;
};

struct TrainResult {
  TaggerModel model;
  std::vector<EpochLog> log;
};

using EpochCallback = std::function<void(const EpochLog&)>;

// Sequential SGD on the summed cross-entropy over sampled masks.
// Fixed (corpus, lexicon, config, seed) reproduces the model bit for bit.
// Throws Error{EmptyCorpus}.
TrainResult train(const std::vector<AnnotatedSentence>& corpus,
                  const Lexicon& lex, uint32_t L, const TrainConfig& cfg,
                  const EpochCallback& on_epoch = nullptr);

struct Prediction {
  LabelGrid grid;
  DecodeReport report;
  AnnotatedSentence annotated;
};

// Per-cell argmax (ties to the lowest tag index), invalid region forced O,
// then conflict-resolved by decode_labels. `matcher` may be null when the
// model was trained without knowledge features.
Prediction predict(const TaggerModel& m, const std::u32string& sentence,
                   const Matcher* matcher);

// Versioned text container; a save/load/save cycle is byte-identical.
void save_model(const TaggerModel& m, std::ostream& os);
void save_model_file(const TaggerModel& m, const std::string& path);
TaggerModel load_model(std::istream& is);
TaggerModel load_model_file(const std::string& path);

// Deterministic stream mixing for per-(epoch, sentence) sampling seeds.
uint64_t mix_seed(uint64_t seed, uint64_t a, uint64_t b);

}  // namespace pw

#endif  // PW_TAGGER_HPP_
