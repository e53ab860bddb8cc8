#ifndef PW_CORPUS_HPP_
#define PW_CORPUS_HPP_

#include <array>
#include <cstdint>
#include <istream>
#include <string>
#include <vector>

#include "pw/annotation.hpp"
#include "pw/lexicon.hpp"

namespace pw {

struct LineError {
  uint64_t line = 0;  // 1-based
  std::string message;
};

struct LoadResult {
  std::vector<AnnotatedSentence> sentences;
  std::vector<LineError> errors;
};

// One bracketed annotation per line; blank lines and lines starting "# "
// are skipped. Bad lines are reported, not fatal.
LoadResult load_corpus(std::istream& in, uint32_t max_len);
// Throws Error{IoFailure} only.
LoadResult load_corpus_file(const std::string& path, uint32_t max_len);

struct GrammarWeights {
  double conj_lead = 0.10;        // sentence-initial conjunction phrase
  double modal_tail = 0.15;       // sentence-final modal phrase
  double prep_before_verb = 0.25; // prepositional phrase before the verb
  double quantity_in_np = 0.20;   // nested quantity inside a noun phrase
  double adj_in_np = 0.25;        // attributive adjective inside a noun phrase
  double second_np = 0.60;        // object noun phrase after the verb
  double entity_np = 0.25;        // single-word noun phrase
  double double_noun = 0.15;      // two juxtaposed nouns
  double aux_in_vp = 0.20;        // auxiliary after the verb
  double quantity_in_vp = 0.08;   // nested quantity inside a verb phrase
  double clause = 0.35;           // clause object / serial-verb clause
  double clause_recursion = 0.15; // clause nested inside a clause
  double compound_entry = 0.50;   // noun-phrase surface copied to the lexicon
  double prep_compound = 0.30;    // prep-phrase surface copied to the lexicon
};

struct SynthConfig {
  uint64_t seed = 1;
  uint32_t count = 100;
  // Max node depth as reported by corpus_stats (roots sit at depth 1);
  // 0 degenerates to a flat forest.
  uint32_t max_depth = 3;
  uint32_t max_len = kDefaultMaxLen;
  // Probability that a sentence contributes one spurious lexicon entry
  // straddling a word boundary.
  double noise_rate = 0.0;
  GrammarWeights weights;
  // Leave empty to generate a vocabulary from the seed. When supplied,
  // Ming and Dong must be non-empty.
  std::array<std::vector<std::u32string>, kNumPosTags> vocabulary;
};

struct SynthResult {
  std::vector<AnnotatedSentence> corpus;
  Lexicon lexicon;
  std::array<std::vector<std::u32string>, kNumPosTags> vocabulary;
  uint64_t compound_entries = 0;
  uint64_t noise_entries = 0;
  std::vector<std::u32string> noise_surfaces;
};

// Samples sentences from a stochastic phrase grammar over the 7 types and
// emits a lexicon holding every vocabulary word plus noise entries.
// Deterministic for a fixed config. Throws Error{BadConfig}.
SynthResult synth_corpus(const SynthConfig& cfg);

struct CorpusStats {
  uint64_t sentences = 0;
  uint64_t total_spans = 0;
  std::array<uint64_t, kNumPhraseTypes> spans_per_type{};
  std::vector<uint64_t> length_hist;  // index = sentence length
  std::vector<uint64_t> depth_hist;   // index = tree depth (0 = spanless)
  uint32_t max_depth = 0;
  uint32_t max_len = 0;
};

CorpusStats corpus_stats(const std::vector<AnnotatedSentence>& corpus);
std::string format_stats(const CorpusStats& s);

}  // namespace pw

#endif  // PW_CORPUS_HPP_
