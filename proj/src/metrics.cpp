#include "pw/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <set>
#include <tuple>

#include "pw/errors.hpp"

namespace pw {

namespace {

using SpanKey = std::tuple<uint32_t, uint32_t, int>;

std::set<SpanKey> span_keys(const std::vector<PhraseSpan>& spans) {
  std::set<SpanKey> keys;
  for (const auto& s : spans) {
    keys.insert({s.start, s.len, static_cast<int>(s.type)});
  }
  return keys;
}

void count_sentence(const std::vector<PhraseSpan>& gold_spans,
                    const std::vector<PhraseSpan>& pred_spans,
                    EvalReport* report) {
  auto gold_keys = span_keys(gold_spans);
  auto pred_keys = span_keys(pred_spans);
  for (const auto& k : pred_keys) {
    auto& counts = report->per_type[static_cast<std::size_t>(std::get<2>(k))];
    if (gold_keys.count(k)) {
      ++counts.tp;
    } else {
      ++counts.fp;
    }
  }
  for (const auto& k : gold_keys) {
    if (!pred_keys.count(k)) {
      ++report->per_type[static_cast<std::size_t>(std::get<2>(k))].fn;
    }
  }
}

void check_aligned(const std::vector<AnnotatedSentence>& gold,
                   const std::vector<AnnotatedSentence>& pred) {
  if (gold.size() != pred.size()) {
    throw Error(Errc::MisalignedCorpora,
                "gold has " + std::to_string(gold.size()) +
                    " sentences, pred has " + std::to_string(pred.size()));
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].sentence != pred[i].sentence) {
      throw Error(Errc::MisalignedCorpora, "sentence text differs", i + 1);
    }
  }
}

void finish_report(EvalReport* report,
                   const std::vector<DecodeReport>* reports,
                   uint64_t token_correct, uint64_t token_total) {
  for (const auto& c : report->per_type) {
    report->micro.tp += c.tp;
    report->micro.fp += c.fp;
    report->micro.fn += c.fn;
  }
  if (reports) {
    for (const auto& r : *reports) {
      for (const auto& rej : r.rejected) {
        ++report->rejections[static_cast<std::size_t>(rej.reason)];
      }
    }
  }
  report->token_accuracy =
      token_total > 0
          ? static_cast<double>(token_correct) / static_cast<double>(token_total)
          : 0.0;
}

}  // namespace

double TypeCounts::precision() const {
  uint64_t denom = tp + fp;
  return denom == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(denom);
}

double TypeCounts::recall() const {
  uint64_t denom = tp + fn;
  return denom == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(denom);
}

double TypeCounts::f1() const {
  double p = precision(), r = recall();
  return (p + r) == 0.0 ? 0.0 : 2.0 * p * r / (p + r);
}

EvalReport evaluate_spans(const std::vector<AnnotatedSentence>& gold,
                          const std::vector<AnnotatedSentence>& pred,
                          const std::vector<DecodeReport>* reports) {
  check_aligned(gold, pred);
  EvalReport report;
  report.sentences = gold.size();
  uint64_t token_correct = 0, token_total = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    count_sentence(gold[i].tree.spans(), pred[i].tree.spans(), &report);
    uint32_t len = static_cast<uint32_t>(gold[i].sentence.size());
    auto gt = project_flat(gold[i].tree.spans(), len, FlatPolicy::Outermost);
    auto pt = project_flat(pred[i].tree.spans(), len, FlatPolicy::Outermost);
    for (uint32_t k = 0; k < len; ++k) {
      if (gt[k] == pt[k]) ++token_correct;
    }
    token_total += len;
  }
  finish_report(&report, reports, token_correct, token_total);
  return report;
}

EvalReport evaluate_flat(const std::vector<AnnotatedSentence>& gold,
                         const std::vector<AnnotatedSentence>& pred,
                         FlatPolicy policy,
                         const std::vector<DecodeReport>* reports) {
  check_aligned(gold, pred);
  EvalReport report;
  report.sentences = gold.size();
  uint64_t token_correct = 0, token_total = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    uint32_t len = static_cast<uint32_t>(gold[i].sentence.size());
    auto gt = project_flat(gold[i].tree.spans(), len, policy);
    auto pt = project_flat(pred[i].tree.spans(), len, policy);
    count_sentence(flat_spans(gt), flat_spans(pt), &report);
    for (uint32_t k = 0; k < len; ++k) {
      if (gt[k] == pt[k]) ++token_correct;
    }
    token_total += len;
  }
  finish_report(&report, reports, token_correct, token_total);
  return report;
}

namespace {

void append_row(std::string* out, const char* name, const TypeCounts& c,
                bool tsv) {
  char buf[160];
  if (tsv) {
    std::snprintf(buf, sizeof(buf),
                  "%s\t%llu\t%llu\t%llu\t%.6f\t%.6f\t%.6f\n", name,
                  static_cast<unsigned long long>(c.tp),
                  static_cast<unsigned long long>(c.fp),
                  static_cast<unsigned long long>(c.fn), c.precision(),
                  c.recall(), c.f1());
  } else {
    std::snprintf(buf, sizeof(buf),
                  "%-6s %8llu %8llu %8llu %10.4f %10.4f %10.4f\n", name,
                  static_cast<unsigned long long>(c.tp),
                  static_cast<unsigned long long>(c.fp),
                  static_cast<unsigned long long>(c.fn), c.precision(),
                  c.recall(), c.f1());
  }
  *out += buf;
}

}  // namespace

std::string format_report_table(const EvalReport& r) {
  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "sentences: %llu\n",
                static_cast<unsigned long long>(r.sentences));
  out += buf;
  std::snprintf(buf, sizeof(buf),
                "rejections: WrongLength=%llu IStart=%llu TypeSwitch=%llu "
                "Crossing=%llu\n",
                static_cast<unsigned long long>(r.rejections[0]),
                static_cast<unsigned long long>(r.rejections[1]),
                static_cast<unsigned long long>(r.rejections[2]),
                static_cast<unsigned long long>(r.rejections[3]));
  out += buf;
  std::snprintf(buf, sizeof(buf), "token accuracy (diagnostic): %.4f\n",
                r.token_accuracy);
  out += buf;
  std::snprintf(buf, sizeof(buf), "%-6s %8s %8s %8s %10s %10s %10s\n", "type",
                "tp", "fp", "fn", "precision", "recall", "f1");
  out += buf;
  for (int t = 0; t < kNumPhraseTypes; ++t) {
    append_row(&out, phrase_stem(static_cast<PhraseType>(t)),
               r.per_type[static_cast<std::size_t>(t)], false);
  }
  append_row(&out, "ALL", r.micro, false);
  return out;
}

std::string format_report_tsv(const EvalReport& r) {
  std::string out;
  for (int t = 0; t < kNumPhraseTypes; ++t) {
    append_row(&out, phrase_stem(static_cast<PhraseType>(t)),
               r.per_type[static_cast<std::size_t>(t)], true);
  }
  append_row(&out, "ALL", r.micro, true);
  return out;
}

std::string published_baseline_notice() {
  return "NOTE: published CPWD benchmark scores (F1 86-92, deep sequence "
         "encoders, 45k-sentence corpus) are not comparable to results from "
         "this reference tagger on synthetic data and are not reproduction "
         "targets.\n";
}

}  // namespace pw
