#include "fastctx/ramp.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "fastctx/corpus.h"
#include "fastctx/random.h"

namespace fastctx {

std::vector<std::size_t> RampSchedule(std::size_t base, std::size_t final_count,
                                      std::size_t step) {
  if (base == 0) throw ConfigError("base rule count must be positive");
  if (base > final_count) {
    throw ConfigError("base rule count " + std::to_string(base) +
                      " exceeds final rule count " +
                      std::to_string(final_count));
  }
  if (step == 0) throw ConfigError("step must be at least 1");
  std::vector<std::size_t> counts;
  for (std::size_t n = base; n < final_count; n += step) counts.push_back(n);
  counts.push_back(final_count);
  return counts;
}

std::vector<std::size_t> ShuffledPool(std::size_t pool_size,
                                      std::uint64_t seed) {
  std::vector<std::size_t> order(pool_size);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Sampler rng(seed);
  rng.Shuffle(order);
  return order;
}

RuleSet RampRules(const RuleSet& all, std::size_t base,
                  std::span<const std::size_t> pool_order, std::size_t count) {
  if (base > all.size() || count < base || count > all.size() ||
      count - base > pool_order.size()) {
    throw ConfigError("ramp of " + std::to_string(count) +
                      " rules does not fit a set of " +
                      std::to_string(all.size()));
  }
  std::vector<ContextRule> rules(all.rules().begin(),
                                 all.rules().begin() + base);
  for (std::size_t k = 0; k < count - base; ++k) {
    rules.push_back(all[static_cast<RuleId>(base + pool_order[k])]);
  }
  return RuleSet(std::move(rules), all.source());
}

double Mean(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

double SampleStddev(std::span<const double> xs) {
  if (xs.size() < 2) return 0.0;
  const double mean = Mean(xs);
  double sum = 0.0;
  for (double x : xs) sum += (x - mean) * (x - mean);
  return std::sqrt(sum / static_cast<double>(xs.size() - 1));
}

namespace {

std::vector<double> Ranks(std::span<const double> xs) {
  std::vector<std::size_t> order(xs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
  std::vector<double> ranks(xs.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && xs[order[j + 1]] == xs[order[i]]) ++j;
    const double rank = (static_cast<double>(i + j) / 2.0) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double Spearman(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size() || xs.size() < 2) return 0.0;
  const auto rx = Ranks(xs);
  const auto ry = Ranks(ys);
  const double mx = Mean(rx);
  const double my = Mean(ry);
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0 || syy == 0) return 0.0;
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace fastctx
