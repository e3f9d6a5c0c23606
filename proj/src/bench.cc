#include "fastctx/bench.h"

#include <unistd.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>

#include "fastctx/ramp.h"

namespace fastctx {

void BenchConfig::Validate() const {
  RampSchedule(base_rule_count, final_rule_count, step);
  if (runs_per_step == 0) throw ConfigError("runs_per_step must be at least 1");
  if (engines.empty()) throw ConfigError("no engines selected");
  if (!corpus_path && corpus_sentences == 0) {
    throw ConfigError("corpus_sentences must be positive");
  }
}

std::vector<BenchRow> BenchReport::RowsFor(MatcherBackend engine) const {
  std::vector<BenchRow> out;
  for (const auto& row : rows) {
    if (row.engine == engine) out.push_back(row);
  }
  return out;
}

namespace {

using Clock = std::chrono::steady_clock;

double ElapsedMs(Clock::time_point since) {
  return std::chrono::duration<double, std::milli>(Clock::now() - since)
      .count();
}

std::string DescribeEnvironment() {
  char host[256] = "unknown";
  gethostname(host, sizeof host - 1);
  const std::time_t now = std::time(nullptr);
  char stamp[32];
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return std::string("host=") + host + " time=" + stamp;
}

}  // namespace

BenchReport RunRamp(const BenchConfig& config, const RuleSet& all_rules,
                    std::span<const CorpusRecord> corpus) {
  config.Validate();
  if (all_rules.size() < config.final_rule_count) {
    throw ConfigError("rule source has " + std::to_string(all_rules.size()) +
                      " rules, ramp needs " +
                      std::to_string(config.final_rule_count));
  }
  const auto schedule = RampSchedule(config.base_rule_count,
                                     config.final_rule_count, config.step);
  const auto order = ShuffledPool(
      config.final_rule_count - config.base_rule_count, config.ramp_seed);

  std::vector<AnnotateInput> inputs;
  inputs.reserve(corpus.size());
  for (const auto& r : corpus) inputs.push_back({r.tokens, r.mention});

  BenchReport report;
  report.environment = DescribeEnvironment();
  std::vector<ContextEngine> engines;
  engines.reserve(schedule.size() * config.engines.size());
  for (const std::size_t count : schedule) {
    const RuleSet rules =
        RampRules(all_rules, config.base_rule_count, order, count);
    for (const MatcherBackend backend : config.engines) {
      const auto build_start = Clock::now();
      engines.emplace_back(rules, backend);
      BenchRow row;
      row.rule_count = count;
      row.engine = backend;
      row.build_ms = ElapsedMs(build_start);
      report.rows.push_back(row);
    }
  }

  // Timed runs go round-robin over all rows so host drift during the
  // benchmark lands on every step alike instead of skewing the late ones.
  // Each timed run follows an untimed one on the same engine so it starts
  // with warm caches, as in steady-state annotation.
  // Keeps the timed calls observable.
  volatile std::size_t sink = 0;
  for (const ContextEngine& engine : engines) {
    for (std::size_t i = 0; i < config.warmup_runs; ++i) {
      sink = engine.AnnotateBatch(inputs).annotations.size();
    }
  }
  std::vector<std::vector<double>> times(
      engines.size(), std::vector<double>(config.runs_per_step));
  for (std::size_t i = 0; i < config.runs_per_step; ++i) {
    for (std::size_t e = 0; e < engines.size(); ++e) {
      sink = engines[e].AnnotateBatch(inputs).annotations.size();
      const auto start = Clock::now();
      const BatchResult result = engines[e].AnnotateBatch(inputs);
      times[e][i] = ElapsedMs(start);
      sink = result.annotations.size();
    }
  }
  for (std::size_t e = 0; e < engines.size(); ++e) {
    report.rows[e].mean_ms = Mean(times[e]);
    report.rows[e].stddev_ms = SampleStddev(times[e]);
  }

  const std::size_t per_step = config.engines.size();
  for (std::size_t first = 0; first < report.rows.size(); first += per_step) {
    const auto step_begin =
        report.rows.begin() + static_cast<std::ptrdiff_t>(first);
    const auto step_end = step_begin + static_cast<std::ptrdiff_t>(per_step);
    const auto naive = std::find_if(step_begin, step_end, [](const BenchRow& r) {
      return r.engine == MatcherBackend::kNaive;
    });
    if (naive == step_end || per_step < 2) continue;
    const double naive_mean = naive->mean_ms;
    for (auto row = step_begin; row != step_end; ++row) {
      row->speedup_vs_naive = row->mean_ms > 0 ? naive_mean / row->mean_ms : 0.0;
    }
  }
  static_cast<void>(sink);
  return report;
}

BenchReport RunRamp(const BenchConfig& config) {
  config.Validate();
  const RuleSet all_rules =
      config.rules_path
          ? LoadRulesFromFile(*config.rules_path)
          : GenerateRules(config.rule_seed, config.final_rule_count);
  if (all_rules.size() < config.final_rule_count) {
    throw ConfigError("rule file has " + std::to_string(all_rules.size()) +
                      " rules, ramp needs " +
                      std::to_string(config.final_rule_count));
  }
  std::vector<CorpusRecord> corpus;
  if (config.corpus_path) {
    corpus = ReadCorpusFile(*config.corpus_path);
  } else {
    GeneratorConfig gen;
    gen.seed = config.corpus_seed;
    gen.sentence_count = config.corpus_sentences;
    gen.rule_count = config.final_rule_count;
    std::vector<ContextRule> head(
        all_rules.rules().begin(),
        all_rules.rules().begin() +
            static_cast<std::ptrdiff_t>(config.final_rule_count));
    corpus = GenerateCorpus(gen, RuleSet(std::move(head)));
  }
  return RunRamp(config, all_rules, corpus);
}

namespace {

std::string Format(const char* fmt, double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, fmt, x);
  return buf;
}

}  // namespace

void EmitReportCsv(const BenchReport& report, std::ostream& out) {
  out << "rule_count,engine,mean_ms,stddev_ms,speedup_vs_naive\n";
  for (const auto& row : report.rows) {
    out << row.rule_count << ',' << ToString(row.engine) << ','
        << Format("%.4f", row.mean_ms) << ',' << Format("%.4f", row.stddev_ms)
        << ',';
    if (row.speedup_vs_naive) out << Format("%.2f", *row.speedup_vs_naive);
    out << '\n';
  }
}

void EmitReportTable(const BenchReport& report, std::ostream& out) {
  std::vector<MatcherBackend> engines;
  std::vector<std::size_t> counts;
  for (const auto& row : report.rows) {
    if (std::find(engines.begin(), engines.end(), row.engine) ==
        engines.end()) {
      engines.push_back(row.engine);
    }
    if (std::find(counts.begin(), counts.end(), row.rule_count) ==
        counts.end()) {
      counts.push_back(row.rule_count);
    }
  }
  const bool both = engines.size() > 1;

  out << "# Average processing time (ms) per corpus pass; " << report.environment
      << '\n';
  char line[256];
  std::snprintf(line, sizeof line, "%-16s", "Number of Rules");
  out << line;
  for (const auto engine : engines) {
    std::snprintf(line, sizeof line, "%14s%14s",
                  (std::string(ToString(engine)) + " mean").c_str(),
                  (std::string(ToString(engine)) + " build").c_str());
    out << line;
  }
  if (both) out << "  Times of speed over naive (rounded)";
  out << '\n';

  for (const std::size_t count : counts) {
    std::snprintf(line, sizeof line, "%-16zu", count);
    out << line;
    std::optional<double> speedup;
    for (const auto engine : engines) {
      const auto row = std::find_if(
          report.rows.begin(), report.rows.end(), [&](const BenchRow& r) {
            return r.rule_count == count && r.engine == engine;
          });
      if (row == report.rows.end()) {
        std::snprintf(line, sizeof line, "%14s%14s", "-", "-");
      } else {
        std::snprintf(line, sizeof line, "%14.3f%14.3f", row->mean_ms,
                      row->build_ms);
        if (row->engine == MatcherBackend::kTrie) {
          speedup = row->speedup_vs_naive;
        }
      }
      out << line;
    }
    if (both && speedup) out << "  " << std::lround(*speedup);
    out << '\n';
  }
}

std::vector<CheckResult> CheckScaling(const BenchReport& report,
                                      const ScalingThresholds& t) {
  std::vector<CheckResult> checks;
  const auto naive = report.RowsFor(MatcherBackend::kNaive);
  const auto trie = report.RowsFor(MatcherBackend::kTrie);

  const auto ratio = [](const std::vector<BenchRow>& rows) {
    return rows.front().mean_ms > 0 ? rows.back().mean_ms / rows.front().mean_ms
                                    : 0.0;
  };
  if (naive.size() >= 2) {
    const double r = ratio(naive);
    checks.push_back({"naive_ratio_final_over_base", r, t.naive_ratio_min,
                      r >= t.naive_ratio_min});
    std::vector<double> counts, means;
    for (const auto& row : naive) {
      counts.push_back(static_cast<double>(row.rule_count));
      means.push_back(row.mean_ms);
    }
    const double rho = Spearman(counts, means);
    checks.push_back({"naive_spearman_rule_count_vs_mean", rho,
                      t.naive_spearman_min, rho >= t.naive_spearman_min});
  }
  if (trie.size() >= 2) {
    const double r = ratio(trie);
    checks.push_back({"trie_ratio_final_over_base", r, t.trie_ratio_max,
                      r <= t.trie_ratio_max});
    double lo = trie.front().mean_ms, hi = trie.front().mean_ms;
    for (const auto& row : trie) {
      lo = std::min(lo, row.mean_ms);
      hi = std::max(hi, row.mean_ms);
    }
    const double flat = lo > 0 ? hi / lo : 0.0;
    checks.push_back({"trie_max_over_min", flat, t.trie_flatness_max,
                      flat <= t.trie_flatness_max});
  }
  if (!naive.empty() && !trie.empty() &&
      naive.back().rule_count == trie.back().rule_count) {
    const double speedup = trie.back().mean_ms > 0
                               ? naive.back().mean_ms / trie.back().mean_ms
                               : 0.0;
    checks.push_back({"speedup_at_final", speedup, t.speedup_min,
                      speedup >= t.speedup_min});
  }
  return checks;
}

}  // namespace fastctx
