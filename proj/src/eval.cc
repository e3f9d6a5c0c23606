#include "fastctx/eval.h"

#include <cstdio>
#include <sstream>

#include "fastctx/ramp.h"

namespace fastctx {

ClassMetrics ClassMetrics::FromCounts(std::size_t tp, std::size_t fp,
                                      std::size_t fn) {
  ClassMetrics m;
  m.tp = tp;
  m.fp = fp;
  m.fn = fn;
  const auto ratio = [](std::size_t num, std::size_t den) {
    return den == 0 ? 0.0 : static_cast<double>(num) / static_cast<double>(den);
  };
  m.precision = ratio(tp, tp + fp);
  m.recall = ratio(tp, tp + fn);
  const double sum = m.precision + m.recall;
  m.f = sum == 0.0 ? 0.0 : 2.0 * m.precision * m.recall / sum;
  return m;
}

std::string_view ToString(ScoredClass c) {
  switch (c) {
    case ScoredClass::kNegated:
      return "negated";
    case ScoredClass::kPossible:
      return "possible";
    case ScoredClass::kOther:
      return "other";
  }
  return "?";
}

namespace {

struct Counts {
  std::size_t tp = 0, fp = 0, fn = 0;

  void Add(bool predicted, bool actual) {
    if (predicted && actual) ++tp;
    if (predicted && !actual) ++fp;
    if (!predicted && actual) ++fn;
  }
};

}  // namespace

EvalReport Score(std::span<const std::optional<ContextAnnotation>> predictions,
                 std::span<const CorpusRecord> gold) {
  if (predictions.size() != gold.size()) {
    throw LengthMismatch(std::to_string(predictions.size()) +
                         " predictions for " + std::to_string(gold.size()) +
                         " gold records");
  }
  EvalReport report;
  report.records = gold.size();
  std::array<Counts, kScoredClassCount> counts;
  const auto idx = [](ScoredClass c) { return static_cast<std::size_t>(c); };

  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (!predictions[i]) {
      ++report.skipped_records;
      continue;
    }
    const ContextAnnotation& p = *predictions[i];
    const GoldLabels& g = gold[i].gold;
    if (g.negation) {
      counts[idx(ScoredClass::kNegated)].Add(
          p.negation == Negation::kNegated, *g.negation == Negation::kNegated);
      counts[idx(ScoredClass::kPossible)].Add(
          p.negation == Negation::kPossible,
          *g.negation == Negation::kPossible);
    } else {
      ++report.skipped[idx(ScoredClass::kNegated)];
      ++report.skipped[idx(ScoredClass::kPossible)];
    }
    if (g.experiencer) {
      counts[idx(ScoredClass::kOther)].Add(
          p.experiencer == Experiencer::kOther,
          *g.experiencer == Experiencer::kOther);
    } else {
      ++report.skipped[idx(ScoredClass::kOther)];
    }
  }
  for (std::size_t c = 0; c < kScoredClassCount; ++c) {
    report.classes[c] =
        ClassMetrics::FromCounts(counts[c].tp, counts[c].fp, counts[c].fn);
  }
  return report;
}

EvalReport Score(std::span<const ContextAnnotation> predictions,
                 std::span<const CorpusRecord> gold) {
  std::vector<std::optional<ContextAnnotation>> wrapped(predictions.begin(),
                                                        predictions.end());
  return Score(std::span<const std::optional<ContextAnnotation>>(wrapped),
               gold);
}

namespace {

std::string Fixed(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", x);
  return buf;
}

}  // namespace

std::string FormatReportText(const EvalReport& report) {
  std::ostringstream out;
  out << "records=" << report.records << '\n';
  out << "skipped_records=" << report.skipped_records << '\n';
  for (std::size_t c = 0; c < kScoredClassCount; ++c) {
    const std::string name(ToString(static_cast<ScoredClass>(c)));
    const ClassMetrics& m = report.classes[c];
    out << name << ".tp=" << m.tp << '\n'
        << name << ".fp=" << m.fp << '\n'
        << name << ".fn=" << m.fn << '\n'
        << name << ".precision=" << Fixed(m.precision) << '\n'
        << name << ".recall=" << Fixed(m.recall) << '\n'
        << name << ".f=" << Fixed(m.f) << '\n'
        << name << ".skipped=" << report.skipped[c] << '\n';
  }
  return out.str();
}

std::string FormatReportCsv(const EvalReport& report) {
  std::ostringstream out;
  out << "class,tp,fp,fn,precision,recall,f\n";
  for (std::size_t c = 0; c < kScoredClassCount; ++c) {
    const ClassMetrics& m = report.classes[c];
    out << ToString(static_cast<ScoredClass>(c)) << ',' << m.tp << ',' << m.fp
        << ',' << m.fn << ',' << Fixed(m.precision) << ',' << Fixed(m.recall)
        << ',' << Fixed(m.f) << '\n';
  }
  return out.str();
}

std::vector<AccuracyStep> RunAccuracyRamp(
    const RuleSet& all_rules, std::span<const CorpusRecord> corpus,
    std::size_t base, std::size_t step, std::size_t runs, std::uint64_t seed,
    MatcherBackend backend) {
  if (runs == 0) throw ConfigError("runs must be at least 1");
  const auto schedule = RampSchedule(base, all_rules.size(), step);

  std::vector<AnnotateInput> inputs;
  inputs.reserve(corpus.size());
  for (const auto& r : corpus) inputs.push_back({r.tokens, r.mention});

  // f_scores[step][class][run]
  std::vector<std::array<std::vector<double>, kScoredClassCount>> f_scores(
      schedule.size());
  for (std::size_t run = 0; run < runs; ++run) {
    const auto order = ShuffledPool(all_rules.size() - base, seed + run);
    for (std::size_t s = 0; s < schedule.size(); ++s) {
      const ContextEngine engine(
          RampRules(all_rules, base, order, schedule[s]), backend);
      const BatchResult batch = engine.AnnotateBatch(inputs);
      const EvalReport report = Score(
          std::span<const std::optional<ContextAnnotation>>(batch.annotations),
          corpus);
      for (std::size_t c = 0; c < kScoredClassCount; ++c) {
        f_scores[s][c].push_back(report.classes[c].f);
      }
    }
  }

  std::vector<AccuracyStep> steps;
  for (std::size_t s = 0; s < schedule.size(); ++s) {
    AccuracyStep row;
    row.rule_count = schedule[s];
    for (std::size_t c = 0; c < kScoredClassCount; ++c) {
      row.mean_f[c] = Mean(f_scores[s][c]);
      row.stddev_f[c] = SampleStddev(f_scores[s][c]);
    }
    steps.push_back(row);
  }
  return steps;
}

}  // namespace fastctx
