// phrasewin -- nested phrase tagging pipeline over per-length label grids.
//
// Subcommands: validate, stats, match, encode, synth, train, tag, eval.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "pw/batch.hpp"
#include "pw/corpus.hpp"
#include "pw/metrics.hpp"
#include "pw/utf8.hpp"

namespace {

constexpr const char* kVersion = "0.1.0";

using Clock = std::chrono::steady_clock;

struct Manifest {
  std::vector<std::pair<std::string, std::string>> entries;

  void add(const std::string& key, const std::string& value) {
    entries.emplace_back(key, value);
  }
  void add(const std::string& key, uint64_t value) {
    add(key, std::to_string(value));
  }
  void add(const std::string& key, double value) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%g", value);
    add(key, std::string(buf));
  }

  void write(const std::string& path) const {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw pw::Error(pw::Errc::IoFailure, "cannot write " + path);
    for (const auto& [k, v] : entries) os << k << '\t' << v << '\n';
  }
};

uint64_t wall_ms_since(Clock::time_point start) {
  return static_cast<uint64_t>(
      std::chrono::duration_cast<std::chrono::milliseconds>(Clock::now() -
                                                            start)
          .count());
}

void warn_line_errors(const std::vector<pw::LineError>& errors,
                      const std::string& path) {
  for (const auto& e : errors) {
    std::cerr << path << ":" << e.line << ": " << e.message << "\n";
  }
}

std::vector<std::u32string> plain_sentences(
    const std::vector<pw::AnnotatedSentence>& corpus) {
  std::vector<std::u32string> out;
  out.reserve(corpus.size());
  for (const auto& a : corpus) out.push_back(a.sentence);
  return out;
}

pw::FlatPolicy parse_policy(const std::string& name) {
  if (name == "outermost") return pw::FlatPolicy::Outermost;
  if (name == "innermost") return pw::FlatPolicy::Innermost;
  throw pw::Error(pw::Errc::BadConfig,
                  "flat policy must be outermost or innermost");
}

void write_lexicon_file(const pw::Lexicon& lex, const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw pw::Error(pw::Errc::IoFailure, "cannot write " + path);
  for (const auto& [surface, tags] : lex.entries) {
    for (int t = 0; t < pw::kNumPosTags; ++t) {
      if (tags & (1u << t)) {
        os << pw::encode_utf8(surface) << '\t'
           << pw::pos_stem(static_cast<pw::PosTag>(t)) << '\n';
      }
    }
  }
}

void write_corpus_file(const std::vector<pw::AnnotatedSentence>& corpus,
                       const std::string& path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw pw::Error(pw::Errc::IoFailure, "cannot write " + path);
  for (const auto& a : corpus) os << pw::serialize_annotation_utf8(a) << '\n';
}

// ---------------------------------------------------------------------------

struct ValidateArgs {
  std::string corpus;
};

int run_validate(const ValidateArgs& args, uint32_t max_len) {
  pw::LoadResult loaded = pw::load_corpus_file(args.corpus, max_len);
  for (const auto& e : loaded.errors) {
    std::cout << "line " << e.line << "\t" << e.message << "\n";
  }
  std::cout << "sentences\t" << loaded.sentences.size() << "\n";
  std::cout << "errors\t" << loaded.errors.size() << "\n";
  return loaded.errors.empty() ? 0 : 1;
}

struct StatsArgs {
  std::string corpus;
};

int run_stats(const StatsArgs& args, uint32_t max_len) {
  pw::LoadResult loaded = pw::load_corpus_file(args.corpus, max_len);
  warn_line_errors(loaded.errors, args.corpus);
  std::cout << pw::format_stats(pw::corpus_stats(loaded.sentences));
  return 0;
}

struct MatchArgs {
  std::string lexicon;
  std::vector<std::string> texts;
};

int run_match(const MatchArgs& args, uint32_t max_len) {
  pw::Lexicon lex = pw::load_lexicon_file(args.lexicon, max_len);
  pw::Matcher matcher(lex);
  bool first = true;
  for (const auto& text : args.texts) {
    if (!first) std::cout << "\n";
    first = false;
    std::u32string chars = pw::decode_utf8(text);
    std::cout << "# text\t" << text << "\n";
    for (const auto& m : matcher.find(chars).matches) {
      std::cout << m.start << '\t' << m.len << '\t'
                << pw::encode_utf8(chars.substr(m.start, m.len)) << '\t'
                << pw::tag_mask_names(m.tags) << "\n";
    }
  }
  return 0;
}

struct EncodeArgs {
  std::string lexicon;
  std::string corpus;
  bool labels = false;
};

int run_encode(const EncodeArgs& args, uint32_t max_len) {
  pw::LoadResult loaded = pw::load_corpus_file(args.corpus, max_len);
  warn_line_errors(loaded.errors, args.corpus);

  if (args.labels) {
    for (std::size_t i = 0; i < loaded.sentences.size(); ++i) {
      const auto& a = loaded.sentences[i];
      if (i) std::cout << "\n";
      std::cout << "# sentence\t" << i << '\t'
                << pw::serialize_annotation_utf8(a) << "\n";
      pw::LabelGrid g = pw::encode_labels(a, max_len);
      for (uint32_t row = 1; row <= g.L; ++row) {
        for (uint32_t col = 0; col < g.L; ++col) {
          if (g.at(row, col) == pw::OutputTag::O) continue;
          std::cout << row << '\t' << col << '\t'
                    << pw::output_tag_name(g.at(row, col)) << "\n";
        }
      }
    }
    return 0;
  }

  pw::Lexicon lex = pw::load_lexicon_file(args.lexicon, max_len);
  pw::Matcher matcher(lex);
  for (std::size_t i = 0; i < loaded.sentences.size(); ++i) {
    const auto& a = loaded.sentences[i];
    if (i) std::cout << "\n";
    std::cout << "# sentence\t" << i << '\t' << pw::encode_utf8(a.sentence)
              << "\n";
    uint32_t len = static_cast<uint32_t>(a.sentence.size());
    pw::KnowledgeGrid g = pw::encode_knowledge(matcher.find(a.sentence), len,
                                               max_len, max_len);
    for (const auto& rec : g.records()) {
      std::cout << rec.row << '\t' << rec.col << '\t'
                << pw::tag_mask_names(rec.tags) << "\n";
    }
  }
  return 0;
}

struct SynthArgs {
  uint64_t seed = 1;
  uint32_t count = 1000;
  uint32_t depth = 3;
  double noise = 0.0;
  std::string out_dir;
};

int run_synth(const SynthArgs& args, uint32_t max_len,
              Clock::time_point start) {
  pw::SynthConfig cfg;
  cfg.seed = args.seed;
  cfg.count = args.count;
  cfg.max_depth = args.depth;
  cfg.max_len = max_len;
  cfg.noise_rate = args.noise;
  pw::SynthResult result = pw::synth_corpus(cfg);

  std::filesystem::create_directories(args.out_dir);
  std::string corpus_path = args.out_dir + "/corpus.txt";
  std::string lexicon_path = args.out_dir + "/lexicon.tsv";
  write_corpus_file(result.corpus, corpus_path);
  write_lexicon_file(result.lexicon, lexicon_path);

  std::cout << "sentences\t" << result.corpus.size() << "\n";
  std::cout << "lexicon_entries\t" << result.lexicon.size() << "\n";
  std::cout << "compound_entries\t" << result.compound_entries << "\n";
  std::cout << "noise_entries\t" << result.noise_entries << "\n";

  Manifest m;
  m.add("command", "synth");
  m.add("version", kVersion);
  m.add("seed", args.seed);
  m.add("n", args.count);
  m.add("depth", args.depth);
  m.add("noise", args.noise);
  m.add("max_len", max_len);
  m.add("out_corpus", corpus_path);
  m.add("out_lexicon", lexicon_path);
  m.add("wall_ms", wall_ms_since(start));
  m.write(args.out_dir + "/synth.manifest");
  return 0;
}

struct TrainArgs {
  std::string corpus;
  std::string lexicon;
  std::string model_out;
  uint32_t epochs = 15;
  double lr = 0.1;
  double neg_ratio = 2.0;
  uint32_t dmax = pw::kDefaultMaxLen;
  uint64_t seed = 1;
  uint32_t window = 2;
  bool no_shuffle = false;
  bool lr_decay = false;
};

int run_train(const TrainArgs& args, uint32_t max_len,
              Clock::time_point start) {
  if (args.dmax > max_len) {
    throw pw::Error(pw::Errc::BadConfig, "--dmax exceeds --max-len");
  }
  pw::LoadResult loaded = pw::load_corpus_file(args.corpus, max_len);
  warn_line_errors(loaded.errors, args.corpus);

  pw::Lexicon lex;
  if (args.dmax > 0) {
    lex = pw::load_lexicon_file(args.lexicon, max_len);
  }

  pw::TrainConfig cfg;
  cfg.epochs = args.epochs;
  cfg.lr = args.lr;
  cfg.lr_decay = args.lr_decay;
  cfg.negative_ratio = args.neg_ratio;
  cfg.seed = args.seed;
  cfg.shuffle = !args.no_shuffle;
  cfg.feat.window = args.window;
  cfg.feat.d_max = args.dmax;

  std::cout << "epoch\tavg_loss\tmasked_cells\n";
  pw::TrainResult result =
      pw::train(loaded.sentences, lex, max_len, cfg, [](const pw::EpochLog& e) {
        char buf[96];
        std::snprintf(buf, sizeof(buf), "%u\t%.6f\t%llu\n", e.epoch,
                      e.avg_loss, static_cast<unsigned long long>(e.masked_cells));
        std::cout << buf << std::flush;
      });

  pw::save_model_file(result.model, args.model_out);

  Manifest m;
  m.add("command", "train");
  m.add("version", kVersion);
  m.add("corpus", args.corpus);
  m.add("lexicon", args.dmax > 0 ? args.lexicon : std::string("-"));
  m.add("epochs", args.epochs);
  m.add("lr", args.lr);
  m.add("lr_decay", args.lr_decay ? "1" : "0");
  m.add("neg_ratio", args.neg_ratio);
  m.add("dmax", args.dmax);
  m.add("window", args.window);
  m.add("seed", args.seed);
  m.add("shuffle", args.no_shuffle ? "0" : "1");
  m.add("max_len", max_len);
  m.add("model_out", args.model_out);
  m.add("wall_ms", wall_ms_since(start));
  m.write(args.model_out + ".manifest");
  return 0;
}

struct TagArgs {
  std::string model;
  std::string lexicon;
  std::string flat;
  std::string out;
  std::string rejects;
  bool serial = false;
  std::string input;
};

int run_tag(const TagArgs& args, Clock::time_point start) {
  pw::TaggerModel model = pw::load_model_file(args.model);

  std::unique_ptr<pw::Matcher> matcher;
  if (model.cfg.d_max > 0) {
    if (args.lexicon.empty()) {
      throw pw::Error(pw::Errc::BadConfig,
                      "model uses knowledge features; --lexicon is required");
    }
    pw::Lexicon lex = pw::load_lexicon_file(args.lexicon, model.L);
    matcher = std::make_unique<pw::Matcher>(lex);
  }

  std::vector<pw::AnnotatedSentence> inputs;
  if (std::filesystem::exists(args.input)) {
    pw::LoadResult loaded = pw::load_corpus_file(args.input, model.L);
    if (!loaded.errors.empty()) {
      warn_line_errors(loaded.errors, args.input);
      throw pw::Error(pw::Errc::BadLine,
                      "input file has unparseable lines; predictions would "
                      "not align");
    }
    inputs = std::move(loaded.sentences);
  } else {
    inputs.push_back(pw::parse_annotation_utf8(args.input, model.L));
  }

  std::vector<pw::Prediction> preds = pw::batch::tag_corpus(
      model, matcher.get(), plain_sentences(inputs),
      args.serial ? pw::batch::ExecMode::Serial
                  : pw::batch::ExecMode::Parallel);

  std::ofstream out_file;
  std::ostream* out = &std::cout;
  if (!args.out.empty()) {
    out_file.open(args.out, std::ios::binary);
    if (!out_file) {
      throw pw::Error(pw::Errc::IoFailure, "cannot write " + args.out);
    }
    out = &out_file;
  }

  for (const auto& p : preds) {
    if (!args.flat.empty()) {
      auto tags = pw::project_flat(
          p.annotated.tree.spans(),
          static_cast<uint32_t>(p.annotated.sentence.size()),
          parse_policy(args.flat));
      for (std::size_t k = 0; k < tags.size(); ++k) {
        if (k) *out << ' ';
        *out << pw::output_tag_name(tags[k]);
      }
      *out << '\n';
    } else {
      *out << pw::serialize_annotation_utf8(p.annotated) << '\n';
    }
  }

  if (!args.rejects.empty()) {
    std::ofstream rej(args.rejects, std::ios::binary);
    if (!rej) {
      throw pw::Error(pw::Errc::IoFailure, "cannot write " + args.rejects);
    }
    for (std::size_t i = 0; i < preds.size(); ++i) {
      for (const auto& r : preds[i].report.rejected) {
        rej << i << '\t' << r.row << '\t' << r.col_start << '\t' << r.col_end
            << '\t' << pw::reject_reason_name(r.reason) << '\n';
      }
    }
  }

  if (!args.out.empty()) {
    Manifest m;
    m.add("command", "tag");
    m.add("version", kVersion);
    m.add("model", args.model);
    m.add("lexicon", args.lexicon.empty() ? std::string("-") : args.lexicon);
    m.add("input", args.input);
    m.add("flat", args.flat.empty() ? std::string("-") : args.flat);
    m.add("out", args.out);
    m.add("serial", args.serial ? "1" : "0");
    m.add("wall_ms", wall_ms_since(start));
    m.write(args.out + ".manifest");
  }
  return 0;
}

struct EvalArgs {
  std::string gold;
  std::string pred;
  std::string flat;
  bool machine = false;
  bool compare_published = false;
};

int run_eval(const EvalArgs& args, uint32_t max_len) {
  pw::LoadResult gold = pw::load_corpus_file(args.gold, max_len);
  pw::LoadResult pred = pw::load_corpus_file(args.pred, max_len);
  if (!gold.errors.empty() || !pred.errors.empty()) {
    warn_line_errors(gold.errors, args.gold);
    warn_line_errors(pred.errors, args.pred);
    throw pw::Error(pw::Errc::BadLine, "corpora contain unparseable lines");
  }

  if (args.compare_published) std::cout << pw::published_baseline_notice();

  pw::EvalReport report =
      args.flat.empty()
          ? pw::evaluate_spans(gold.sentences, pred.sentences)
          : pw::evaluate_flat(gold.sentences, pred.sentences,
                              parse_policy(args.flat));
  std::cout << (args.machine ? pw::format_report_tsv(report)
                             : pw::format_report_table(report));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nested phrase tagging over per-length label grids"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  uint32_t max_len = pw::kDefaultMaxLen;
  app.add_option("--max-len", max_len, "sentence capacity L")
      ->capture_default_str();

  ValidateArgs validate_args;
  auto* validate = app.add_subcommand("validate", "parse-check a corpus file");
  validate->add_option("corpus", validate_args.corpus, "corpus file")
      ->required();

  StatsArgs stats_args;
  auto* stats = app.add_subcommand("stats", "corpus statistics");
  stats->add_option("corpus", stats_args.corpus, "corpus file")->required();

  MatchArgs match_args;
  auto* match = app.add_subcommand("match", "lexicon occurrences in text");
  match->add_option("--lexicon", match_args.lexicon, "lexicon tsv")
      ->required();
  match->add_option("text", match_args.texts, "text to scan")->required();

  EncodeArgs encode_args;
  auto* encode = app.add_subcommand("encode", "print knowledge/label grids");
  encode->add_option("--lexicon", encode_args.lexicon, "lexicon tsv")
      ->required();
  encode->add_flag("--labels", encode_args.labels,
                   "print gold label grids instead of knowledge grids");
  encode->add_option("corpus", encode_args.corpus, "corpus file")->required();

  SynthArgs synth_args;
  auto* synth = app.add_subcommand("synth", "generate a synthetic corpus");
  synth->add_option("--seed", synth_args.seed, "generator seed")
      ->capture_default_str();
  synth->add_option("--n", synth_args.count, "sentence count")
      ->capture_default_str();
  synth->add_option("--depth", synth_args.depth, "max nesting depth")
      ->capture_default_str();
  synth->add_option("--noise", synth_args.noise, "lexicon noise rate")
      ->capture_default_str();
  synth->add_option("--out-dir", synth_args.out_dir, "output directory")
      ->required();

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "train a tagger model");
  train->add_option("--corpus", train_args.corpus, "training corpus")
      ->required();
  train->add_option("--lexicon", train_args.lexicon, "lexicon tsv");
  train->add_option("--epochs", train_args.epochs, "epochs")
      ->capture_default_str();
  train->add_option("--lr", train_args.lr, "learning rate")
      ->capture_default_str();
  train->add_option("--neg-ratio", train_args.neg_ratio,
                    "O-cells sampled per labeled cell")
      ->capture_default_str();
  train->add_option("--dmax", train_args.dmax,
                    "knowledge rows used (0 disables knowledge features)")
      ->capture_default_str();
  train->add_option("--seed", train_args.seed, "training seed")
      ->capture_default_str();
  train->add_option("--window", train_args.window, "context window radius")
      ->capture_default_str();
  train->add_flag("--no-shuffle", train_args.no_shuffle,
                  "keep corpus order every epoch");
  train->add_flag("--lr-decay", train_args.lr_decay, "decay lr by 1/epoch");
  train->add_option("--model-out", train_args.model_out, "model output path")
      ->required();

  TagArgs tag_args;
  auto* tag = app.add_subcommand("tag", "annotate text with a trained model");
  tag->add_option("--model", tag_args.model, "model file")->required();
  tag->add_option("--lexicon", tag_args.lexicon, "lexicon tsv");
  tag->add_option("--flat", tag_args.flat,
                  "flat BIO output: outermost|innermost");
  tag->add_option("--out", tag_args.out, "write predictions to file");
  tag->add_option("--rejects", tag_args.rejects,
                  "write decode rejections to file");
  tag->add_flag("--serial", tag_args.serial, "disable parallel tagging");
  tag->add_option("input", tag_args.input, "text or corpus file")->required();

  EvalArgs eval_args;
  auto* eval = app.add_subcommand("eval", "score predictions against gold");
  eval->add_option("--gold", eval_args.gold, "gold corpus")->required();
  eval->add_option("--pred", eval_args.pred, "predicted corpus")->required();
  eval->add_option("--flat", eval_args.flat,
                   "score flat projection: outermost|innermost");
  eval->add_flag("--machine", eval_args.machine, "tab-separated output");
  eval->add_flag("--compare-published", eval_args.compare_published,
                 "note how results relate to published CPWD scores");

  Clock::time_point start = Clock::now();
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand(validate)) return run_validate(validate_args, max_len);
    if (app.got_subcommand(stats)) return run_stats(stats_args, max_len);
    if (app.got_subcommand(match)) return run_match(match_args, max_len);
    if (app.got_subcommand(encode)) return run_encode(encode_args, max_len);
    if (app.got_subcommand(synth)) return run_synth(synth_args, max_len, start);
    if (app.got_subcommand(train)) return run_train(train_args, max_len, start);
    if (app.got_subcommand(tag)) return run_tag(tag_args, start);
    if (app.got_subcommand(eval)) return run_eval(eval_args, max_len);
  } catch (const pw::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
