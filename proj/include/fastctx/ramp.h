// Incremental rule ramps and the summary statistics both harnesses use.
//
// A ramp starts from the first `base` rules of a set, kept in file order, and
// adds rules from the remaining pool in a seeded random order until the full
// set is reached.

#ifndef FASTCTX_RAMP_H_
#define FASTCTX_RAMP_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "fastctx/rules.h"

namespace fastctx {

// base, base+step, ... while below final, then final. Throws ConfigError
// (from corpus.h) unless 0 < base <= final and step >= 1.
std::vector<std::size_t> RampSchedule(std::size_t base, std::size_t final_count,
                                      std::size_t step);

// A permutation of the pool indices [0, pool_size).
std::vector<std::size_t> ShuffledPool(std::size_t pool_size,
                                      std::uint64_t seed);

// The first `base` rules of `all`, followed by all[base + pool_order[k]] for
// k < count - base. Ids are reassigned densely.
RuleSet RampRules(const RuleSet& all, std::size_t base,
                  std::span<const std::size_t> pool_order, std::size_t count);

double Mean(std::span<const double> xs);
// Sample standard deviation; 0 for fewer than two values.
double SampleStddev(std::span<const double> xs);
// Spearman rank correlation with average ranks for ties. Returns 0 when
// either series is constant.
double Spearman(std::span<const double> xs, std::span<const double> ys);

}  // namespace fastctx

#endif  // FASTCTX_RAMP_H_
