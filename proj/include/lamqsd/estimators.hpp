#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace lamqsd::estimators {

struct McConfig {
  std::uint64_t masterSeed = 0;
  std::uint64_t samples = 100000;
  int batches = 32;          // batch-means error bars
  int parallelism = 0;       // 0 = use hardware/env; affects speed only
  std::uint64_t budget = 10'000'000;  // node cap per pruned-tree sample
};

struct Estimate {
  double mean = 0.0;
  double stderr_ = 0.0;
  double ci95Low = 0.0;
  double ci95High = 0.0;
  std::uint64_t samples = 0;
  std::uint64_t seed = 0;
  double wallTime = 0.0;
  bool truncatedAny = false;  // some sample hit the node budget: biased low
};

// Resolved worker count: flag > LAMQSD_THREADS > hardware.
int resolve_parallelism(int requested);

// Mean of #G_n over cfg.samples independent labeled trees; batch-means
// standard error. Sample i always consumes RNG stream (masterSeed, i), so
// the estimate is bitwise identical at any parallelism.
Estimate estimate_mean_good_paths(int k, long a, long x0, int n, const McConfig& cfg);

// Fraction of trees with at least one good path; binomial standard error.
Estimate estimate_nonempty_prob(int k, long a, long x0, int n, const McConfig& cfg);

struct TvCell {
  int k = 2;
  long m = 0;
  std::uint64_t splits = 0;
  double tv = 0.0;
  bool missing = false;  // not enough splits harvested
};

// Harvests accepted splits from fresh geometric constructions, grouped by
// parent label, and reports the total-variation distance between the
// empirical child-composition law and the uniform law on C(m+k-1, k-1)
// compositions.
std::vector<TvCell> cross_validate_geometry(int k, long mMax,
                                            std::uint64_t splitsPerLabel,
                                            const McConfig& cfg,
                                            std::uint64_t throwsPerRun = 192,
                                            std::uint64_t maxRuns = 4'000'000);

// experiment,k,a,x0,n,samples,batches,seed,mean,stderr,ci95_low,ci95_high,
// truncated,exact_oracle,wall_time_s
std::string csv_header();
std::string csv_row(const std::string& experiment, int k, long a, long x0, int n,
                    const McConfig& cfg, const Estimate& est,
                    double exactOracle, bool haveOracle, bool withTiming);
std::string to_json(const std::string& experiment, int k, long a, long x0, int n,
                    const McConfig& cfg, const Estimate& est,
                    double exactOracle, bool haveOracle, bool withTiming);

}  // namespace lamqsd::estimators
