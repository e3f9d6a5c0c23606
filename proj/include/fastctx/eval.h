// Scoring against gold labels.
//
// Only the non-default classes are scored: "negated" and "possible" for the
// negation dimension and "other" for the experiencer dimension. Temporality
// is not scored.

#ifndef FASTCTX_EVAL_H_
#define FASTCTX_EVAL_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "fastctx/corpus.h"
#include "fastctx/engine.h"

namespace fastctx {

struct ClassMetrics {
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double precision = 0.0;
  double recall = 0.0;
  double f = 0.0;

  // A zero denominator yields 0 for the affected ratio.
  static ClassMetrics FromCounts(std::size_t tp, std::size_t fp,
                                 std::size_t fn);
};

enum class ScoredClass { kNegated, kPossible, kOther };
inline constexpr std::size_t kScoredClassCount = 3;
std::string_view ToString(ScoredClass c);

struct EvalReport {
  // Indexed by ScoredClass.
  std::array<ClassMetrics, kScoredClassCount> classes;
  std::size_t records = 0;
  // Records without gold for the class's dimension.
  std::array<std::size_t, kScoredClassCount> skipped{};
  // Records with no prediction at all (e.g. an invalid concept span).
  std::size_t skipped_records = 0;

  const ClassMetrics& operator[](ScoredClass c) const {
    return classes[static_cast<std::size_t>(c)];
  }
};

class LengthMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

EvalReport Score(std::span<const ContextAnnotation> predictions,
                 std::span<const CorpusRecord> gold);

// Entries without a prediction count toward skipped_records.
EvalReport Score(std::span<const std::optional<ContextAnnotation>> predictions,
                 std::span<const CorpusRecord> gold);

// Flat key=value block, one metric per line.
std::string FormatReportText(const EvalReport& report);
// Header plus one row per class: class,tp,fp,fn,precision,recall,f.
std::string FormatReportCsv(const EvalReport& report);

struct AccuracyStep {
  std::size_t rule_count = 0;
  std::array<double, kScoredClassCount> mean_f{};
  std::array<double, kScoredClassCount> stddev_f{};
};

// Scores `corpus` at every step of a ramp over `all_rules`, repeating with
// `runs` independently shuffled pools (run r uses seed + r), and averages F
// per step.
std::vector<AccuracyStep> RunAccuracyRamp(
    const RuleSet& all_rules, std::span<const CorpusRecord> corpus,
    std::size_t base, std::size_t step, std::size_t runs, std::uint64_t seed,
    MatcherBackend backend = MatcherBackend::kTrie);

}  // namespace fastctx

#endif  // FASTCTX_EVAL_H_
