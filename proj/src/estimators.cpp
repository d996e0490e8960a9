#include "lamqsd/estimators.hpp"

#include "lamqsd/branching.hpp"
#include "lamqsd/geometry.hpp"
#include "lamqsd/rng.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>
#include <map>
#include <stdexcept>
#include <thread>

namespace lamqsd::estimators {

namespace {

struct BatchStats {
  std::uint64_t countSum = 0;
  std::uint64_t nonempty = 0;
  std::uint64_t samples = 0;
  bool truncated = false;
};

// Runs count_good_paths for samples [0, cfg.samples) split into cfg.batches
// contiguous batches; a batch is the unit of parallel work and is always
// processed in sample order, so per-batch integer sums are exact and
// independent of the thread count.
std::vector<BatchStats> run_batches(int k, long a, long x0, int n, const McConfig& cfg) {
  if (cfg.samples < static_cast<std::uint64_t>(cfg.batches) || cfg.batches < 2)
    throw std::invalid_argument("McConfig: need samples >= batches >= 2");
  const auto B = static_cast<std::uint64_t>(cfg.batches);
  std::vector<BatchStats> stats(B);
  const int workers = resolve_parallelism(cfg.parallelism);

  auto runBatch = [&](std::uint64_t b) {
    const std::uint64_t lo = cfg.samples * b / B;
    const std::uint64_t hi = cfg.samples * (b + 1) / B;
    BatchStats& s = stats[b];
    for (std::uint64_t i = lo; i < hi; ++i) {
      RngStream rng(cfg.masterSeed, i);
      const auto res = branching::count_good_paths(k, a, x0, n, cfg.budget, rng);
      s.countSum += res.count;
      s.nonempty += res.count > 0 ? 1 : 0;
      s.truncated |= res.truncated;
      ++s.samples;
    }
  };

  if (workers <= 1) {
    for (std::uint64_t b = 0; b < B; ++b) runBatch(b);
  } else {
    std::atomic<std::uint64_t> nextBatch{0};
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (;;) {
          const std::uint64_t b = nextBatch.fetch_add(1);
          if (b >= B) return;
          runBatch(b);
        }
      });
    for (auto& t : pool) t.join();
  }
  return stats;
}

Estimate finalize_mean(const std::vector<BatchStats>& stats, const McConfig& cfg,
                       double wallTime) {
  Estimate est;
  est.samples = cfg.samples;
  est.seed = cfg.masterSeed;
  est.wallTime = wallTime;
  std::uint64_t total = 0;
  for (const auto& s : stats) {
    total += s.countSum;
    est.truncatedAny |= s.truncated;
  }
  est.mean = static_cast<double>(total) / static_cast<double>(cfg.samples);
  // batch-means standard error
  double ss = 0.0;
  for (const auto& s : stats) {
    const double bm = static_cast<double>(s.countSum) / static_cast<double>(s.samples);
    ss += (bm - est.mean) * (bm - est.mean);
  }
  const auto B = static_cast<double>(stats.size());
  est.stderr_ = std::sqrt(ss / (B * (B - 1.0)));
  est.ci95Low = est.mean - 1.96 * est.stderr_;
  est.ci95High = est.mean + 1.96 * est.stderr_;
  return est;
}

}  // namespace

int resolve_parallelism(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("LAMQSD_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

Estimate estimate_mean_good_paths(int k, long a, long x0, int n, const McConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto stats = run_batches(k, a, x0, n, cfg);
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return finalize_mean(stats, cfg, dt);
}

Estimate estimate_nonempty_prob(int k, long a, long x0, int n, const McConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto stats = run_batches(k, a, x0, n, cfg);
  const double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Estimate est;
  est.samples = cfg.samples;
  est.seed = cfg.masterSeed;
  est.wallTime = dt;
  std::uint64_t hits = 0;
  for (const auto& s : stats) {
    hits += s.nonempty;
    est.truncatedAny |= s.truncated;
  }
  const double p = static_cast<double>(hits) / static_cast<double>(cfg.samples);
  est.mean = p;
  est.stderr_ = std::sqrt(p * (1.0 - p) / static_cast<double>(cfg.samples));
  est.ci95Low = est.mean - 1.96 * est.stderr_;
  est.ci95High = est.mean + 1.96 * est.stderr_;
  return est;
}

namespace {

// composition -> index, by lexicographic enumeration of all compositions of
// m into k parts (small: at most C(m+k-1, k-1) entries)
void enumerate_compositions(int k, long m, std::vector<long>& cur,
                            std::vector<std::vector<long>>& out) {
  if (static_cast<int>(cur.size()) == k - 1) {
    long used = 0;
    for (long v : cur) used += v;
    cur.push_back(m - used);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  long used = 0;
  for (long v : cur) used += v;
  for (long v = 0; v <= m - used; ++v) {
    cur.push_back(v);
    enumerate_compositions(k, m, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<TvCell> cross_validate_geometry(int k, long mMax,
                                            std::uint64_t splitsPerLabel,
                                            const McConfig& cfg,
                                            std::uint64_t throwsPerRun,
                                            std::uint64_t maxRuns) {
  if (k < 2 || mMax < 0) throw std::invalid_argument("cross_validate_geometry: bad arguments");

  // per-label composition index
  std::vector<std::vector<std::vector<long>>> comps(static_cast<std::size_t>(mMax) + 1);
  std::vector<std::map<std::vector<long>, std::size_t>> index(static_cast<std::size_t>(mMax) + 1);
  for (long m = 0; m <= mMax; ++m) {
    std::vector<long> cur;
    enumerate_compositions(k, m, cur, comps[static_cast<std::size_t>(m)]);
    for (std::size_t i = 0; i < comps[static_cast<std::size_t>(m)].size(); ++i)
      index[static_cast<std::size_t>(m)][comps[static_cast<std::size_t>(m)][i]] = i;
  }

  using Histogram = std::vector<std::vector<std::uint64_t>>;
  Histogram hist(static_cast<std::size_t>(mMax) + 1);
  for (long m = 0; m <= mMax; ++m)
    hist[static_cast<std::size_t>(m)].assign(comps[static_cast<std::size_t>(m)].size(), 0);

  const int workers = resolve_parallelism(cfg.parallelism);
  // fixed round size: quota checks must land on the same run counts at any
  // parallelism, or the harvest (and the TV table) would depend on it
  const std::uint64_t runsPerRound = 512;

  std::uint64_t runsDone = 0;
  auto quotasMet = [&] {
    for (long m = 0; m <= mMax; ++m) {
      std::uint64_t total = 0;
      for (auto c : hist[static_cast<std::size_t>(m)]) total += c;
      if (total < splitsPerLabel) return false;
    }
    return true;
  };

  std::vector<long> comp;
  while (!quotasMet() && runsDone < maxRuns) {
    const std::uint64_t roundEnd = std::min(maxRuns, runsDone + runsPerRound);
    std::vector<Histogram> partial(static_cast<std::size_t>(workers), hist);
    for (auto& h : partial)
      for (auto& row : h) std::fill(row.begin(), row.end(), 0);

    auto worker = [&](int w) {
      Histogram& h = partial[static_cast<std::size_t>(w)];
      std::vector<long> localComp;
      for (std::uint64_t run = runsDone + static_cast<std::uint64_t>(w); run < roundEnd;
           run += static_cast<std::uint64_t>(workers)) {
        RngStream seeder(cfg.masterSeed ^ 0x67e6c7a31aULL, run);
        const auto lam = geometry::run_construction(k, throwsPerRun, seeder.next_u64());
        for (const auto& frag : lam.fragments()) {
          if (frag.children.empty()) continue;
          if (frag.label > mMax) continue;
          localComp.clear();
          for (auto childId : frag.children)
            localComp.push_back(lam.fragment(childId).label - 1);
          const auto& idx = index[static_cast<std::size_t>(frag.label)];
          auto it = idx.find(localComp);
          if (it == idx.end()) continue;  // unreachable: sibling sum invariant
          ++h[static_cast<std::size_t>(frag.label)][it->second];
        }
      }
    };

    if (workers <= 1) {
      worker(0);
    } else {
      std::vector<std::thread> pool;
      for (int w = 0; w < workers; ++w) pool.emplace_back(worker, w);
      for (auto& t : pool) t.join();
    }
    for (const auto& h : partial)
      for (std::size_t m = 0; m < hist.size(); ++m)
        for (std::size_t i = 0; i < hist[m].size(); ++i) hist[m][i] += h[m][i];
    runsDone = roundEnd;
  }

  std::vector<TvCell> cells;
  for (long m = 0; m <= mMax; ++m) {
    TvCell cell;
    cell.k = k;
    cell.m = m;
    const auto& row = hist[static_cast<std::size_t>(m)];
    std::uint64_t total = 0;
    for (auto c : row) total += c;
    cell.splits = total;
    cell.missing = total < splitsPerLabel;
    if (total > 0) {
      const double uniform = 1.0 / static_cast<double>(row.size());
      double tv = 0.0;
      for (auto c : row)
        tv += std::abs(static_cast<double>(c) / static_cast<double>(total) - uniform);
      cell.tv = 0.5 * tv;
    } else {
      cell.tv = std::numeric_limits<double>::quiet_NaN();
    }
    cells.push_back(cell);
  }
  return cells;
}

std::string csv_header() {
  return "experiment,k,a,x0,n,samples,batches,seed,mean,stderr,ci95_low,"
         "ci95_high,truncated,exact_oracle,wall_time_s";
}

static std::string format_row(const std::string& experiment, int k, long a, long x0,
                              int n, const McConfig& cfg, const Estimate& est,
                              double exactOracle, bool haveOracle, bool withTiming,
                              bool json) {
  char oracle[64] = "";
  if (haveOracle) std::snprintf(oracle, sizeof(oracle), "%.15g", exactOracle);
  char buf[768];
  if (!json) {
    std::snprintf(buf, sizeof(buf),
                  "%s,%d,%ld,%ld,%d,%llu,%d,%llu,%.15g,%.15g,%.15g,%.15g,%d,%s,%.6f",
                  experiment.c_str(), k, a, x0, n,
                  static_cast<unsigned long long>(cfg.samples), cfg.batches,
                  static_cast<unsigned long long>(cfg.masterSeed), est.mean,
                  est.stderr_, est.ci95Low, est.ci95High, est.truncatedAny ? 1 : 0,
                  oracle, withTiming ? est.wallTime : 0.0);
  } else {
    char oracleJson[96];
    if (haveOracle)
      std::snprintf(oracleJson, sizeof(oracleJson), "%.15g", exactOracle);
    else
      std::snprintf(oracleJson, sizeof(oracleJson), "null");
    std::snprintf(buf, sizeof(buf),
                  "{\"schemaVersion\": 1, \"experiment\": \"%s\", \"k\": %d, "
                  "\"a\": %ld, \"x0\": %ld, \"n\": %d, \"samples\": %llu, "
                  "\"batches\": %d, \"seed\": %llu, \"mean\": %.15g, "
                  "\"stderr\": %.15g, \"ci95\": [%.15g, %.15g], "
                  "\"truncated\": %s, \"exactOracle\": %s, \"wallTimeS\": %.6f}",
                  experiment.c_str(), k, a, x0, n,
                  static_cast<unsigned long long>(cfg.samples), cfg.batches,
                  static_cast<unsigned long long>(cfg.masterSeed), est.mean,
                  est.stderr_, est.ci95Low, est.ci95High,
                  est.truncatedAny ? "true" : "false", oracleJson,
                  withTiming ? est.wallTime : 0.0);
  }
  return buf;
}

std::string csv_row(const std::string& experiment, int k, long a, long x0, int n,
                    const McConfig& cfg, const Estimate& est, double exactOracle,
                    bool haveOracle, bool withTiming) {
  return format_row(experiment, k, a, x0, n, cfg, est, exactOracle, haveOracle,
                    withTiming, false);
}

std::string to_json(const std::string& experiment, int k, long a, long x0, int n,
                    const McConfig& cfg, const Estimate& est, double exactOracle,
                    bool haveOracle, bool withTiming) {
  return format_row(experiment, k, a, x0, n, cfg, est, exactOracle, haveOracle,
                    withTiming, true);
}

}  // namespace lamqsd::estimators
