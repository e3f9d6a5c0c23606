// Speed harness: times corpus annotation at every step of a rule ramp, for
// the trie and naive matchers, and checks the scaling shape of the results.

#ifndef FASTCTX_BENCH_H_
#define FASTCTX_BENCH_H_

#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "fastctx/corpus.h"
#include "fastctx/engine.h"
#include "fastctx/rules.h"

namespace fastctx {

struct BenchConfig {
  std::size_t base_rule_count = 409;
  std::size_t final_rule_count = 849;
  std::size_t step = 50;
  std::size_t runs_per_step = 20;
  std::size_t warmup_runs = 2;

  // Rules: the first final_rule_count rules of this file, or generated.
  std::optional<std::string> rules_path;
  std::uint64_t rule_seed = 7;

  // Corpus: this file, or generated from the full rule set.
  std::optional<std::string> corpus_path;
  std::uint64_t corpus_seed = 1;
  std::size_t corpus_sentences = 1000;

  std::uint64_t ramp_seed = 42;
  std::vector<MatcherBackend> engines = {MatcherBackend::kTrie,
                                         MatcherBackend::kNaive};

  // Throws ConfigError.
  void Validate() const;
};

struct BenchRow {
  std::size_t rule_count = 0;
  MatcherBackend engine = MatcherBackend::kTrie;
  double mean_ms = 0.0;
  double stddev_ms = 0.0;
  // Trie construction, measured once per step; not part of mean_ms.
  double build_ms = 0.0;
  // naive mean / this mean; set only when both engines ran at this step.
  std::optional<double> speedup_vs_naive;
};

struct BenchReport {
  std::vector<BenchRow> rows;
  std::string environment;

  // Rows of one engine in ramp order.
  std::vector<BenchRow> RowsFor(MatcherBackend engine) const;
};

// Loads or generates rules and corpus per the config, then times the ramp.
BenchReport RunRamp(const BenchConfig& config);

// Times the ramp over `all_rules` (at least final_rule_count rules; the
// first base_rule_count form the base) and an already-loaded corpus.
BenchReport RunRamp(const BenchConfig& config, const RuleSet& all_rules,
                    std::span<const CorpusRecord> corpus);

// Header rule_count,engine,mean_ms,stddev_ms,speedup_vs_naive.
void EmitReportCsv(const BenchReport& report, std::ostream& out);
// One line per rule count, one column per engine, then the speedup.
void EmitReportTable(const BenchReport& report, std::ostream& out);

struct ScalingThresholds {
  double naive_ratio_min = 1.5;
  double trie_ratio_max = 1.3;
  double naive_spearman_min = 0.9;
  double trie_flatness_max = 1.5;
  double speedup_min = 10.0;
};

struct CheckResult {
  std::string name;
  double value = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

// Checks that need an engine missing from the report are omitted.
std::vector<CheckResult> CheckScaling(const BenchReport& report,
                                      const ScalingThresholds& thresholds);

}  // namespace fastctx

#endif  // FASTCTX_BENCH_H_
