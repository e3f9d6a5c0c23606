#include "fastctx/cli.h"

#include <fstream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "fastctx/bench.h"
#include "fastctx/corpus.h"
#include "fastctx/engine.h"
#include "fastctx/eval.h"
#include "fastctx/rules.h"
#include "fastctx/text.h"

namespace fastctx::cli {
namespace {

class InputSource {
 public:
  InputSource(const std::string& path, std::istream& stdin_stream) {
    if (path == "-") {
      stream_ = &stdin_stream;
    } else {
      file_ = std::make_unique<std::ifstream>(path, std::ios::binary);
      if (!*file_) throw CorpusError(0, "cannot open '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::istream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ifstream> file_;
  std::istream* stream_ = nullptr;
};

class OutputSink {
 public:
  OutputSink(const std::string& path, std::ostream& stdout_stream) {
    if (path == "-") {
      stream_ = &stdout_stream;
    } else {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw CorpusError(0, "cannot write '" + path + "'");
      stream_ = file_.get();
    }
  }
  std::ostream& get() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_ = nullptr;
};

// Raw JSON is kept so annotate can echo records unchanged.
struct InputRecord {
  Json raw;
  CorpusRecord record;
};

std::vector<InputRecord> ReadInputRecords(std::istream& in) {
  std::vector<InputRecord> records;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (TrimAscii(line).empty()) continue;
    InputRecord r;
    try {
      r.raw = Json::parse(line);
    } catch (const Json::parse_error& e) {
      throw CorpusError(line_number, std::string("invalid JSON: ") + e.what());
    }
    r.record = RecordFromJson(r.raw, line_number);
    records.push_back(std::move(r));
  }
  return records;
}

std::optional<ContextAnnotation> PredictionFromJson(const Json& j,
                                                    std::size_t line) {
  if (!j.contains("pred")) return std::nullopt;
  const Json& pred = j["pred"];
  const auto field = [&](const char* key) -> std::string {
    if (!pred.is_object() || !pred.contains(key) || !pred[key].is_string()) {
      throw CorpusError(line, std::string("pred.") + key + " missing");
    }
    return pred[key].get<std::string>();
  };
  ContextAnnotation a;
  const auto negation = ParseNegation(field("negation"));
  const auto experiencer = ParseExperiencer(field("experiencer"));
  const auto temporality = ParseTemporality(field("temporality"));
  if (!negation || !experiencer || !temporality) {
    throw CorpusError(line, "unknown value in pred");
  }
  a.negation = *negation;
  a.experiencer = *experiencer;
  a.temporality = *temporality;
  return a;
}

std::vector<std::optional<ContextAnnotation>> ReadPredictions(
    std::istream& in) {
  std::vector<std::optional<ContextAnnotation>> preds;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (TrimAscii(line).empty()) continue;
    try {
      preds.push_back(PredictionFromJson(Json::parse(line), line_number));
    } catch (const Json::parse_error& e) {
      throw CorpusError(line_number, std::string("invalid JSON: ") + e.what());
    }
  }
  return preds;
}

std::vector<AnnotateInput> InputsOf(std::span<const CorpusRecord> records) {
  std::vector<AnnotateInput> inputs;
  inputs.reserve(records.size());
  for (const auto& r : records) inputs.push_back({r.tokens, r.mention});
  return inputs;
}

MatcherBackend BackendFlag(const std::string& name) {
  // The option's CLI::IsMember check has already validated the name.
  return *ParseMatcherBackend(name);
}

struct AnnotateOptions {
  std::string rules;
  std::string input = "-";
  std::string output = "-";
  std::string engine = "trie";
  bool strict = false;
};

int CmdAnnotate(const AnnotateOptions& opt, std::istream& in,
                std::ostream& out, std::ostream& err) {
  RuleSet rules;
  try {
    rules = LoadRulesFromFile(opt.rules);
  } catch (const std::exception& e) {
    err << "error: " << opt.rules << ": " << e.what() << '\n';
    return kRuleError;
  }

  std::vector<InputRecord> records;
  try {
    InputSource source(opt.input, in);
    records = ReadInputRecords(source.get());
  } catch (const CorpusError& e) {
    err << "error: " << opt.input << ": " << e.what() << '\n';
    return kDataError;
  }

  const ContextEngine engine(std::move(rules), BackendFlag(opt.engine));
  std::vector<CorpusRecord> corpus;
  corpus.reserve(records.size());
  for (const auto& r : records) corpus.push_back(r.record);
  const BatchResult batch = engine.AnnotateBatch(InputsOf(corpus));

  std::size_t next_error = 0;
  try {
    OutputSink sink(opt.output, out);
    for (std::size_t i = 0; i < records.size(); ++i) {
      Json j = records[i].raw;
      if (batch.annotations[i]) {
        j["pred"] = AnnotationToJson(*batch.annotations[i]);
      } else {
        const std::string& message = batch.errors[next_error++].message;
        err << "warning: record " << i << ": " << message << '\n';
        j["error"] = message;
      }
      sink.get() << j.dump() << '\n';
    }
  } catch (const CorpusError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  if (opt.strict && !batch.errors.empty()) return kAssertionFailed;
  return kOk;
}

struct EvaluateOptions {
  std::string rules;
  std::string gold;
  std::string pred;
  std::string engine = "trie";
  std::string format = "text";
};

int CmdEvaluate(const EvaluateOptions& opt, std::istream& in,
                std::ostream& out, std::ostream& err) {
  std::vector<CorpusRecord> gold;
  try {
    InputSource source(opt.gold, in);
    gold = ReadCorpus(source.get());
  } catch (const CorpusError& e) {
    err << "error: " << opt.gold << ": " << e.what() << '\n';
    return kDataError;
  }

  std::vector<std::optional<ContextAnnotation>> predictions;
  if (!opt.pred.empty()) {
    try {
      InputSource source(opt.pred, in);
      predictions = ReadPredictions(source.get());
    } catch (const CorpusError& e) {
      err << "error: " << opt.pred << ": " << e.what() << '\n';
      return kDataError;
    }
  } else {
    if (opt.rules.empty()) {
      err << "error: evaluate needs --rules or --pred\n";
      return kRuleError;
    }
    RuleSet rules;
    try {
      rules = LoadRulesFromFile(opt.rules);
    } catch (const std::exception& e) {
      err << "error: " << opt.rules << ": " << e.what() << '\n';
      return kRuleError;
    }
    const ContextEngine engine(std::move(rules), BackendFlag(opt.engine));
    BatchResult batch = engine.AnnotateBatch(InputsOf(gold));
    for (const auto& e : batch.errors) {
      err << "warning: record " << e.index << ": " << e.message << '\n';
    }
    predictions = std::move(batch.annotations);
  }

  EvalReport report;
  try {
    report = Score(predictions, gold);
  } catch (const LengthMismatch& e) {
    err << "error: gold/prediction misalignment: " << e.what() << '\n';
    return kDataError;
  }
  out << (opt.format == "csv" ? FormatReportCsv(report)
                              : FormatReportText(report));
  return kOk;
}

struct BenchOptions {
  BenchConfig config;
  std::string rules;
  std::string corpus;
  std::vector<std::string> engines = {"trie", "naive"};
  std::string format = "csv";
  bool check = false;
  ScalingThresholds thresholds;
};

int CmdBench(BenchOptions opt, std::ostream& out, std::ostream& err) {
  if (!opt.rules.empty()) opt.config.rules_path = opt.rules;
  if (!opt.corpus.empty()) opt.config.corpus_path = opt.corpus;
  opt.config.engines.clear();
  for (const auto& name : opt.engines) {
    opt.config.engines.push_back(BackendFlag(name));
  }

  BenchReport report;
  try {
    report = RunRamp(opt.config);
  } catch (const MalformedRule& e) {
    err << "error: " << e.what() << '\n';
    return kRuleError;
  } catch (const DuplicateRule& e) {
    err << "error: " << e.what() << '\n';
    return kRuleError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }

  if (opt.format == "table") {
    EmitReportTable(report, out);
  } else {
    EmitReportCsv(report, out);
  }
  if (!opt.check) return kOk;

  bool ok = true;
  for (const auto& c : CheckScaling(report, opt.thresholds)) {
    err << (c.passed ? "PASS " : "FAIL ") << c.name << " = " << c.value
        << " (threshold " << c.threshold << ")\n";
    ok = ok && c.passed;
  }
  return ok ? kOk : kAssertionFailed;
}

int CmdRulesValidate(const std::string& path, bool canonical,
                     std::ostream& out, std::ostream& err) {
  try {
    const RuleSet rules = LoadRulesFromFile(path);
    if (canonical) {
      out << SerializeRules(rules);
    } else {
      out << path << ": " << rules.size() << " rules OK\n";
    }
    return kOk;
  } catch (const std::exception& e) {
    err << "error: " << path << ": " << e.what() << '\n';
    return kRuleError;
  }
}

struct GenerateOptions {
  std::uint64_t seed = 1;
  std::size_t count = 849;
  std::string output = "-";
  // corpus only
  GeneratorConfig corpus;
  std::string rules;
  std::uint64_t rule_seed = 7;
};

int CmdGenerateRules(const GenerateOptions& opt, std::ostream& out,
                     std::ostream& err) {
  if (opt.count == 0) {
    err << "error: --count must be positive\n";
    return kRuleError;
  }
  try {
    OutputSink sink(opt.output, out);
    sink.get() << SerializeRules(GenerateRules(opt.seed, opt.count));
  } catch (const CorpusError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

int CmdGenerateCorpus(GenerateOptions opt, std::ostream& out,
                      std::ostream& err) {
  RuleSet rules;
  try {
    rules = opt.rules.empty() ? GenerateRules(opt.rule_seed, opt.count)
                              : LoadRulesFromFile(opt.rules);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuleError;
  }
  opt.corpus.seed = opt.seed;
  opt.corpus.rule_count = rules.empty() ? 1 : rules.size();
  try {
    const auto corpus = GenerateCorpus(opt.corpus, rules);
    OutputSink sink(opt.output, out);
    WriteCorpus(sink.get(), corpus);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const CorpusError& e) {
    err << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kOk;
}

}  // namespace

int Run(int argc, const char* const* argv, std::istream& in, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Negation, experiencer and temporality detection with a "
               "word-level rule trie",
               "fastctx"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read options from an INI/TOML file");

  const auto engine_check = CLI::IsMember({"trie", "naive"});

  AnnotateOptions annotate;
  auto* annotate_cmd =
      app.add_subcommand("annotate", "Annotate concepts in a corpus file");
  annotate_cmd->add_option("--rules", annotate.rules, "Rule file")->required();
  annotate_cmd->add_option("--input", annotate.input, "Corpus file or '-'")
      ->capture_default_str();
  annotate_cmd->add_option("--output", annotate.output, "Output file or '-'")
      ->capture_default_str();
  annotate_cmd->add_option("--engine", annotate.engine, "trie or naive")
      ->check(engine_check)
      ->capture_default_str();
  annotate_cmd->add_flag("--strict", annotate.strict,
                         "Exit 1 if any record has an invalid concept span");

  EvaluateOptions evaluate;
  auto* evaluate_cmd = app.add_subcommand(
      "evaluate", "Score predictions against gold labels");
  evaluate_cmd->add_option("--rules", evaluate.rules, "Rule file");
  evaluate_cmd->add_option("--gold", evaluate.gold, "Gold corpus file or '-'")
      ->required();
  evaluate_cmd->add_option("--pred", evaluate.pred,
                           "Annotate output to score instead of running rules");
  evaluate_cmd->add_option("--engine", evaluate.engine, "trie or naive")
      ->check(engine_check)
      ->capture_default_str();
  evaluate_cmd->add_option("--format", evaluate.format, "text or csv")
      ->check(CLI::IsMember({"text", "csv"}))
      ->capture_default_str();

  BenchOptions bench;
  auto* bench_cmd = app.add_subcommand(
      "bench", "Time annotation over an incremental rule ramp");
  bench_cmd->add_option("--base", bench.config.base_rule_count,
                        "Rule count of the first step")
      ->capture_default_str();
  bench_cmd->add_option("--final", bench.config.final_rule_count,
                        "Rule count of the last step")
      ->capture_default_str();
  bench_cmd->add_option("--step", bench.config.step, "Rules added per step")
      ->capture_default_str();
  bench_cmd->add_option("--runs", bench.config.runs_per_step,
                        "Timed runs per step and engine")
      ->capture_default_str();
  bench_cmd->add_option("--warmup", bench.config.warmup_runs,
                        "Untimed runs before each step")
      ->capture_default_str();
  bench_cmd->add_option("--rules", bench.rules,
                        "Rule file (default: generated rules)");
  bench_cmd->add_option("--rule-seed", bench.config.rule_seed,
                        "Seed for generated rules")
      ->capture_default_str();
  bench_cmd->add_option("--corpus", bench.corpus,
                        "Corpus file (default: generated corpus)");
  bench_cmd->add_option("--seed", bench.config.corpus_seed,
                        "Seed for the generated corpus")
      ->capture_default_str();
  bench_cmd->add_option("--sentences", bench.config.corpus_sentences,
                        "Generated corpus size")
      ->capture_default_str();
  bench_cmd->add_option("--ramp-seed", bench.config.ramp_seed,
                        "Seed for the order rules are added in")
      ->capture_default_str();
  bench_cmd->add_option("--engines", bench.engines, "Comma-separated engines")
      ->delimiter(',')
      ->check(engine_check)
      ->capture_default_str();
  bench_cmd->add_option("--format", bench.format, "csv or table")
      ->check(CLI::IsMember({"csv", "table"}))
      ->capture_default_str();
  bench_cmd->add_flag("--check", bench.check,
                      "Exit 1 unless the scaling thresholds hold");
  bench_cmd->add_option("--naive-ratio-min", bench.thresholds.naive_ratio_min)
      ->capture_default_str();
  bench_cmd->add_option("--trie-ratio-max", bench.thresholds.trie_ratio_max)
      ->capture_default_str();
  bench_cmd->add_option("--spearman-min", bench.thresholds.naive_spearman_min)
      ->capture_default_str();
  bench_cmd->add_option("--flatness-max", bench.thresholds.trie_flatness_max)
      ->capture_default_str();
  bench_cmd->add_option("--speedup-min", bench.thresholds.speedup_min)
      ->capture_default_str();

  std::string validate_path;
  bool canonical = false;
  auto* validate_cmd =
      app.add_subcommand("rules-validate", "Check a rule file");
  validate_cmd->add_option("--rules,rules", validate_path, "Rule file")
      ->required();
  validate_cmd->add_flag("--canonical", canonical,
                         "Print the rules in canonical form");

  GenerateOptions generate;
  auto* generate_cmd =
      app.add_subcommand("generate", "Write synthetic rules or corpora");
  generate_cmd->require_subcommand(1);
  auto* gen_rules_cmd =
      generate_cmd->add_subcommand("rules", "Generate a rule file");
  gen_rules_cmd->add_option("--seed", generate.seed)->capture_default_str();
  gen_rules_cmd->add_option("--count", generate.count)->capture_default_str();
  gen_rules_cmd->add_option("--output", generate.output)->capture_default_str();
  auto* gen_corpus_cmd =
      generate_cmd->add_subcommand("corpus", "Generate a gold corpus");
  gen_corpus_cmd->add_option("--seed", generate.seed)->capture_default_str();
  gen_corpus_cmd->add_option("--rules", generate.rules,
                             "Rule file (default: generated rules)");
  gen_corpus_cmd->add_option("--rule-seed", generate.rule_seed)
      ->capture_default_str();
  gen_corpus_cmd->add_option("--rule-count", generate.count)
      ->capture_default_str();
  gen_corpus_cmd->add_option("--sentences", generate.corpus.sentence_count)
      ->capture_default_str();
  gen_corpus_cmd->add_option("--vocab", generate.corpus.vocab_size)
      ->capture_default_str();
  gen_corpus_cmd->add_option("--min-length", generate.corpus.min_length)
      ->capture_default_str();
  gen_corpus_cmd->add_option("--max-length", generate.corpus.max_length)
      ->capture_default_str();
  gen_corpus_cmd->add_option("--rate", generate.corpus.cue_injection_rate,
                             "Fraction of records with an injected cue")
      ->capture_default_str();
  gen_corpus_cmd->add_option("--output", generate.output)
      ->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  if (annotate_cmd->parsed()) return CmdAnnotate(annotate, in, out, err);
  if (evaluate_cmd->parsed()) return CmdEvaluate(evaluate, in, out, err);
  if (bench_cmd->parsed()) return CmdBench(bench, out, err);
  if (validate_cmd->parsed()) {
    return CmdRulesValidate(validate_path, canonical, out, err);
  }
  if (gen_rules_cmd->parsed()) return CmdGenerateRules(generate, out, err);
  if (gen_corpus_cmd->parsed()) return CmdGenerateCorpus(generate, out, err);
  return kOk;
}

}  // namespace fastctx::cli
