#ifndef PW_BATCH_HPP_
#define PW_BATCH_HPP_

#include <string>
#include <vector>

#include "pw/lexicon.hpp"
#include "pw/tagger.hpp"

namespace pw {
namespace batch {

// Serial is the reference path; Parallel runs the same per-sentence work
// under OpenMP. Both produce identical results in identical order.
enum class ExecMode { Serial, Parallel };

std::vector<Prediction> tag_corpus(const TaggerModel& model,
                                   const Matcher* matcher,
                                   const std::vector<std::u32string>& sentences,
                                   ExecMode mode);

std::vector<MatchSet> match_corpus(const Matcher& matcher,
                                   const std::vector<std::u32string>& sentences,
                                   ExecMode mode);

int max_threads();

}  // namespace batch
}  // namespace pw

#endif  // PW_BATCH_HPP_
