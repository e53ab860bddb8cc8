#ifndef PW_METRICS_HPP_
#define PW_METRICS_HPP_

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "pw/annotation.hpp"
#include "pw/gridcodec.hpp"

namespace pw {

struct TypeCounts {
  uint64_t tp = 0;
  uint64_t fp = 0;
  uint64_t fn = 0;

  // 0/0 counts as 0 throughout.
  double precision() const;
  double recall() const;
  double f1() const;
};

struct EvalReport {
  std::array<TypeCounts, kNumPhraseTypes> per_type{};
  TypeCounts micro{};
  uint64_t sentences = 0;
  // Indexed by RejectReason; filled when decode reports are supplied.
  std::array<uint64_t, kNumRejectReasons> rejections{};
  // Per-character accuracy of the flat projection; diagnostic only.
  double token_accuracy = 0.0;
};

// Span-exact scoring: a predicted span counts iff (start, len, type)
// matches a gold span of the same sentence; matching is one-to-one.
// Throws Error{MisalignedCorpora} on length or text mismatch.
EvalReport evaluate_spans(const std::vector<AnnotatedSentence>& gold,
                          const std::vector<AnnotatedSentence>& pred,
                          const std::vector<DecodeReport>* reports = nullptr);

// Projects both sides to one BIO layer first, then scores span-exact.
EvalReport evaluate_flat(const std::vector<AnnotatedSentence>& gold,
                         const std::vector<AnnotatedSentence>& pred,
                         FlatPolicy policy,
                         const std::vector<DecodeReport>* reports = nullptr);

// Human-readable table.
std::string format_report_table(const EvalReport& r);
// Machine rows "type<TAB>tp<TAB>fp<TAB>fn<TAB>P<TAB>R<TAB>F1", one per
// phrase type plus an ALL row.
std::string format_report_tsv(const EvalReport& r);

// Fixed notice for requests to compare against published CPWD scores.
std::string published_baseline_notice();

}  // namespace pw

#endif  // PW_METRICS_HPP_
