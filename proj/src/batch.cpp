#include "pw/batch.hpp"

#include <cstdint>
#include <exception>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace pw {
namespace batch {

namespace {

// Runs fn(i) for i in [0, n), optionally under OpenMP. The first exception
// wins and is rethrown on the calling thread.
template <typename Fn>
void for_each_index(std::size_t n, ExecMode mode, Fn&& fn) {
  if (mode == ExecMode::Serial) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::exception_ptr first_error = nullptr;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic, 8)
#endif
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    try {
      fn(static_cast<std::size_t>(i));
    } catch (...) {
      bool store = false;
#ifdef _OPENMP
#pragma omp critical(pw_batch_error)
#endif
      {
        if (!first_error) {
          first_error = std::current_exception();
          store = true;
        }
      }
      (void)store;
    }
  }
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace

std::vector<Prediction> tag_corpus(const TaggerModel& model,
                                   const Matcher* matcher,
                                   const std::vector<std::u32string>& sentences,
                                   ExecMode mode) {
  std::vector<Prediction> out(sentences.size());
  for_each_index(sentences.size(), mode, [&](std::size_t i) {
    out[i] = predict(model, sentences[i], matcher);
  });
  return out;
}

std::vector<MatchSet> match_corpus(const Matcher& matcher,
                                   const std::vector<std::u32string>& sentences,
                                   ExecMode mode) {
  std::vector<MatchSet> out(sentences.size());
  for_each_index(sentences.size(), mode, [&](std::size_t i) {
    out[i] = matcher.find(sentences[i]);
  });
  return out;
}

int max_threads() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace batch
}  // namespace pw
