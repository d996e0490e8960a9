// lamqsd: random recursive laminations of the disk, the label branching
// process on the k-ary tree, and the spectral analysis of its killed kernels.
//
// Subcommands: lam, labels, classify, verify, spectral. Every command is a
// pure function of its flags plus the seed; reruns are byte-identical.

#include "lamqsd/branching.hpp"
#include "lamqsd/estimators.hpp"
#include "lamqsd/geometry.hpp"
#include "lamqsd/spectral.hpp"
#include "lamqsd/svg.hpp"

#include <CLI11.hpp>

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;

std::uint64_t resolve_seed(bool seedSet, std::uint64_t seed) {
  if (seedSet) return seed;
  std::random_device rd;
  const std::uint64_t drawn =
      (static_cast<std::uint64_t>(rd()) << 32) ^ static_cast<std::uint64_t>(rd());
  std::printf("seed: %" PRIu64 " (drawn from system entropy)\n", drawn);
  return drawn;
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    std::fprintf(stderr, "error: cannot write %s\n", path.c_str());
    return false;
  }
  out << content;
  return out.good();
}

// ---------------------------------------------------------------------------
// lam

int cmd_lam(int k, std::uint64_t throws, bool seedSet, std::uint64_t seed,
            const std::string& svgPath, const std::string& treePath,
            bool hyperbolic) {
  const std::uint64_t s = resolve_seed(seedSet, seed);
  const auto lam = lamqsd::geometry::run_construction(k, throws, s);

  std::map<long, std::uint64_t> labelHist;
  int maxDepth = 0;
  std::vector<int> depth(lam.fragments().size(), 0);
  for (std::size_t i = 0; i < lam.fragments().size(); ++i) {
    const auto& f = lam.fragments()[i];
    if (i > 0) depth[i] = depth[f.parent] + 1;
    maxDepth = std::max(maxDepth, depth[i]);
    if (f.live) ++labelHist[f.label];
  }
  std::printf("k=%d throws=%" PRIu64 " accepted=%" PRIu64 " collisions=%" PRIu64
              " live=%zu maxDepth=%d\n",
              k, lam.throws(), lam.accepted(), lam.collisions(), lam.liveCount(),
              maxDepth);
  std::printf("live label histogram:");
  for (const auto& [label, count] : labelHist)
    std::printf(" %ld:%" PRIu64, label, count);
  std::printf("\n");

  if (!svgPath.empty()) {
    lamqsd::svg::RenderOptions opts;
    opts.hyperbolic = hyperbolic;
    if (!write_file(svgPath, lamqsd::svg::render_lamination(lam, opts)))
      return kExitCheckFailed;
  }
  if (!treePath.empty()) {
    if (!write_file(treePath, lam.genealogy_string())) return kExitCheckFailed;
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// labels

int cmd_labels(int k, long a, long x0, int n, std::uint64_t samples,
               bool seedSet, std::uint64_t seed, int threads,
               const std::string& outPath, const std::string& jsonPath,
               bool timing) {
  lamqsd::estimators::McConfig cfg;
  cfg.masterSeed = resolve_seed(seedSet, seed);
  cfg.samples = samples;
  cfg.parallelism = threads;

  const auto mean = lamqsd::estimators::estimate_mean_good_paths(k, a, x0, n, cfg);
  const auto prob = lamqsd::estimators::estimate_nonempty_prob(k, a, x0, n, cfg);

  bool haveOracle = false;
  double oracle = 0.0;
  if (k == 2 && a == 4 && x0 >= 4) {
    oracle = lamqsd::spectral::survival_asymptotics(n, x0 + n, x0).twoPowSurvival;
    haveOracle = true;
  }

  std::printf("mean #G_n     : %.9f (stderr %.3g, ci [%.9f, %.9f])\n", mean.mean,
              mean.stderr_, mean.ci95Low, mean.ci95High);
  std::printf("P(G_n != {})  : %.9f (stderr %.3g, ci [%.9f, %.9f])\n", prob.mean,
              prob.stderr_, prob.ci95Low, prob.ci95High);
  if (haveOracle) {
    std::printf("exact 2^n P(T>n): %.12f  (|mean - exact| = %.3g, %.2f stderr)\n",
                oracle, std::abs(mean.mean - oracle),
                mean.stderr_ > 0 ? std::abs(mean.mean - oracle) / mean.stderr_ : 0.0);
  }
  if (mean.truncatedAny)
    std::printf("warning: node budget hit; mean is a lower bound\n");

  std::string csv = lamqsd::estimators::csv_header() + "\n";
  csv += lamqsd::estimators::csv_row("mean_good_paths", k, a, x0, n, cfg, mean,
                                     oracle, haveOracle, timing) + "\n";
  csv += lamqsd::estimators::csv_row("nonempty_prob", k, a, x0, n, cfg, prob,
                                     oracle, false, timing) + "\n";
  if (!outPath.empty() && !write_file(outPath, csv)) return kExitCheckFailed;
  if (!jsonPath.empty()) {
    std::string js = "[\n  ";
    js += lamqsd::estimators::to_json("mean_good_paths", k, a, x0, n, cfg, mean,
                                      oracle, haveOracle, timing);
    js += ",\n  ";
    js += lamqsd::estimators::to_json("nonempty_prob", k, a, x0, n, cfg, prob,
                                      oracle, false, timing);
    js += "\n]\n";
    if (!write_file(jsonPath, js)) return kExitCheckFailed;
  }
  return mean.truncatedAny ? kExitCheckFailed : kExitOk;
}

// ---------------------------------------------------------------------------
// classify

int cmd_classify(int k, long a, long maxN, double tol, const std::string& outPath) {
  const auto report = lamqsd::spectral::classify(k, a, maxN, tol);
  const std::string json = lamqsd::spectral::to_json(report) + "\n";
  std::fputs(json.c_str(), stdout);
  if (!outPath.empty() && !write_file(outPath, json)) return kExitCheckFailed;
  return report.verdict == lamqsd::spectral::Verdict::Indeterminate
             ? kExitCheckFailed
             : kExitOk;
}

// ---------------------------------------------------------------------------
// verify

struct CheckTable {
  int failures = 0;
  void row(const std::string& name, bool pass, double value) {
    std::printf("%-58s %s  (%.3g)\n", name.c_str(), pass ? "PASS" : "FAIL", value);
    if (!pass) ++failures;
  }
};

void verify_eigen(CheckTable& t) {
  using namespace lamqsd::spectral;
  struct Case {
    int k;
    long a;
    double value;
  };
  for (const Case c : {Case{3, 4, 0.248376642883065}, Case{2, 5, 0.433040861268365},
                       Case{4, 3, 0.231280689028977}}) {
    const auto eig = dominant_eigen(build_killed_kernel(c.k, c.a, 30));
    char name[96];
    std::snprintf(name, sizeof(name), "eigen k=%d a=%ld N=30 vs reference", c.k, c.a);
    t.row(name, std::abs(eig.lambda - c.value) < 1e-9, std::abs(eig.lambda - c.value));
  }
  double prev = 0.0;
  bool monotone = true;
  for (long N : {10L, 20L, 40L, 80L, 160L}) {
    const double lam = dominant_eigen(build_killed_kernel(2, 4, N)).lambda;
    if (lam < prev - 1e-9) monotone = false;
    prev = lam;
  }
  t.row("eigen lambda_N nondecreasing (k=2,a=4)", monotone, prev);
  const double lam300 = dominant_eigen(build_killed_kernel(2, 4, 300)).lambda;
  t.row("eigen lambda_300 (k=2,a=4) near 1/2", std::abs(lam300 - 0.5) < 1e-6,
        std::abs(lam300 - 0.5));
}

void verify_qsd(CheckTable& t) {
  using namespace lamqsd::spectral;
  lamqsd::spectral::KahanSum sum;
  for (long i = 4; i <= 200; ++i) sum.add(qsd_exact(i));
  t.row("qsd sums to 1", std::abs(sum.value() - 1.0) < 1e-15,
        std::abs(sum.value() - 1.0));

  double worstLeft = 0.0;
  for (long x = 4; x <= 150; ++x) worstLeft = std::max(worstLeft, left_eigen_residual(x));
  t.row("left eigen-identity residual x<=150", worstLeft < 1e-12, worstLeft);

  double worstRight = 0.0;
  for (long x = 4; x <= 1000; ++x)
    worstRight = std::max(worstRight, right_eigen_residual(x));
  t.row("right eigen-identity residual x<=1000", worstRight < 1e-12, worstRight);

  double worstGf = 0.0;
  for (int i = 1; i <= 9; ++i)
    worstGf = std::max(worstGf, generating_function_check(0.1 * i));
  t.row("generating function residual z=0.1..0.9", worstGf < 1e-10, worstGf);

  const auto asym = survival_asymptotics(200, 600);
  const double limit = 4.0 / (std::exp(2.0) - 1.0);
  const double meanLimit = (std::exp(2.0) + 3.0) / 2.0;
  t.row("2^n P(T>n) -> 4/(e^2-1)", std::abs(asym.twoPowSurvival - limit) < 1e-6,
        std::abs(asym.twoPowSurvival - limit));
  t.row("E[X_n|T>n] -> (e^2+3)/2", std::abs(asym.condMean - meanLimit) < 1e-6,
        std::abs(asym.condMean - meanLimit));

  const auto ratio = monotone_ratio_check(50, 300);
  t.row("q_n/g nonincreasing (n<=50, N=300)", ratio.ok, ratio.worstMargin);

  bool symOk = true;
  double symWorst = 0.0;
  for (long x0 = 4; x0 <= 8; ++x0) {
    const auto rep = hitting_symmetry_check(x0, 30);
    symOk = symOk && rep.ok;
    symWorst = std::max(symWorst, rep.worst);
  }
  t.row("hitting symmetry x0=4..8, i<=30", symOk, symWorst);

  // conditioned law converges to the qsd in total variation
  const auto law = iterate_conditioned(2, 4, 4, 200, 250);
  double tv = 0.0;
  for (long x = 4; x <= law.N; ++x)
    tv += std::abs(law.q[static_cast<std::size_t>(x - 4)] - qsd_exact(x));
  tv *= 0.5;
  t.row("TV(q_200, qsd) < 1e-8", tv < 1e-8, tv);

  bool upperOk = true;
  for (long x0 = 4; x0 <= 10; ++x0) {
    const auto s = survival_asymptotics(200, 600, x0);
    // 2^n P(T>n) <= (x0-2)/2 along the whole run is rechecked here at n=200
    if (s.twoPowSurvival > static_cast<double>(x0 - 2) / 2.0 + 1e-12) upperOk = false;
  }
  t.row("2^n P_x0(T>n) <= (x0-2)/2", upperOk, 0.0);
}

void verify_martingale(CheckTable& t) {
  using lamqsd::Rat;
  bool rowsOk = true, meanOk = true, martOk = true, marginalOk = true;
  for (int k = 2; k <= 6 && rowsOk && meanOk; ++k) {
    for (long x = 0; x <= 200; ++x) {
      Rat sum = 0, mean = 0;
      for (long y = 1; y <= x + 1; ++y) {
        const Rat p = lamqsd::branching::kernel_prob(k, x, y);
        sum += p;
        mean += Rat(y) * p;
      }
      if (sum != 1) rowsOk = false;
      if (mean != 1 + Rat(x, k)) meanOk = false;
    }
  }
  t.row("row sums exactly 1 (k<=6, x<=200)", rowsOk, 0.0);
  t.row("mean exactly 1 + x/k (k<=6, x<=200)", meanOk, 0.0);
  for (long x = 0; x <= 1000; ++x) {
    Rat lhs = 0;
    for (long y = 1; y <= x + 1; ++y)
      lhs += lamqsd::branching::kernel_prob(2, x, y) * Rat(y - 2);
    if (lhs != Rat(x - 2, 2)) martOk = false;
  }
  t.row("martingale sum P(x,y)(y-2) == (x-2)/2 (x<=1000)", martOk, 0.0);

  // kernel marginal vs brute-force composition enumeration
  for (int k = 2; k <= 5 && marginalOk; ++k) {
    for (long m = 0; m <= 12 && marginalOk; ++m) {
      std::vector<long> firstPart(static_cast<std::size_t>(m) + 1, 0);
      long total = 0;
      auto enumerate = [&](auto&& self, int part, long left, long first) -> void {
        if (part == k - 1) {
          ++firstPart[static_cast<std::size_t>(part == 0 ? left : first)];
          ++total;
          return;
        }
        for (long v = 0; v <= left; ++v)
          self(self, part + 1, left - v, part == 0 ? v : first);
      };
      enumerate(enumerate, 0, m, 0);
      for (long m1 = 0; m1 <= m; ++m1) {
        const Rat expected(firstPart[static_cast<std::size_t>(m1)], total);
        if (expected != lamqsd::branching::kernel_prob(k, m, m1 + 1)) marginalOk = false;
      }
    }
  }
  t.row("kernel marginal == composition enumeration (k<=5,m<=12)", marginalOk, 0.0);
}

void verify_certificate(CheckTable& t) {
  using namespace lamqsd::spectral;
  const auto cert = subcritical_certificate_k3();
  t.row("k3 certificate tail sum < 0.014", cert.tailSum < 0.014, cert.tailSum);
  t.row("k3 certificate low range <= 0.263", cert.worstLowRatio <= 0.263,
        cert.worstLowRatio);
  t.row("k3 certificate high range <= 0.3", cert.worstHighRatio <= 0.3,
        cert.worstHighRatio);
  t.row("k3 certificate overall", cert.ok, cert.worstMargin);

  const double folded = (2.0 + std::sqrt(2.0)) / 10.0;
  const auto rep33 = classify(3, 3, 100, 1e-3);
  t.row("classify(3,3) supercritical, 3*lambda_100 > 1",
        rep33.verdict == Verdict::Supercritical && rep33.margin > 0, rep33.margin);
  t.row("folded 2x2 eigenvalue == (2+sqrt 2)/10 > 0.34",
        rep33.foldedLambda && std::abs(*rep33.foldedLambda - folded) < 1e-12 &&
            *rep33.foldedLambda > 0.34,
        rep33.foldedLambda.value_or(0.0));
  t.row("classify(2,4) critical", classify(2, 4).verdict == Verdict::Critical, 0.0);
  t.row("classify(2,5) subcritical",
        classify(2, 5).verdict == Verdict::Subcritical, 0.0);
  t.row("classify(3,4) subcritical",
        classify(3, 4).verdict == Verdict::Subcritical, 0.0);
  t.row("classify(4,3) subcritical",
        classify(4, 3).verdict == Verdict::Subcritical, 0.0);
}

void verify_geometry(CheckTable& t, std::uint64_t seed, int threads) {
  using namespace lamqsd::geometry;
  // disjointness against the Cartesian brute force
  lamqsd::RngStream rng(seed, 777);
  auto toXY = [](double pos) {
    return std::pair<double, double>{std::cos(2 * M_PI * pos), std::sin(2 * M_PI * pos)};
  };
  auto segInter = [&](double a1, double a2, double b1, double b2) {
    auto [p1x, p1y] = toXY(a1);
    auto [p2x, p2y] = toXY(a2);
    auto [q1x, q1y] = toXY(b1);
    auto [q2x, q2y] = toXY(b2);
    auto orient = [](double ax, double ay, double bx, double by, double cx, double cy) {
      const double v = (bx - ax) * (cy - ay) - (by - ay) * (cx - ax);
      return v > 0 ? 1 : (v < 0 ? -1 : 0);
    };
    const int o1 = orient(p1x, p1y, p2x, p2y, q1x, q1y);
    const int o2 = orient(p1x, p1y, p2x, p2y, q2x, q2y);
    const int o3 = orient(q1x, q1y, q2x, q2y, p1x, p1y);
    const int o4 = orient(q1x, q1y, q2x, q2y, p2x, p2y);
    return o1 != o2 && o3 != o4;
  };
  bool disjointOk = true;
  for (int trial = 0; trial < 10000 && disjointOk; ++trial) {
    const int ka = 2 + static_cast<int>(rng.below(3));
    const int kb = 2 + static_cast<int>(rng.below(3));
    std::vector<CirclePoint> a, b;
    for (int i = 0; i < ka; ++i) a.emplace_back(rng.uniform01());
    for (int i = 0; i < kb; ++i) b.emplace_back(rng.uniform01());
    bool bruteHit = false;
    for (int i = 0; i < ka && !bruteHit; ++i)
      for (int j = 0; j < kb && !bruteHit; ++j)
        bruteHit = segInter(a[static_cast<std::size_t>(i)].position,
                            a[static_cast<std::size_t>((i + 1) % ka)].position,
                            b[static_cast<std::size_t>(j)].position,
                            b[static_cast<std::size_t>((j + 1) % kb)].position);
    if (polygons_disjoint(a, b) != !bruteHit) disjointOk = false;
  }
  t.row("disjointness test vs Cartesian oracle (1e4 cases)", disjointOk, 0.0);

  lamqsd::estimators::McConfig cfg;
  cfg.masterSeed = seed;
  cfg.parallelism = threads;
  for (int k : {2, 3}) {
    const auto cells = lamqsd::estimators::cross_validate_geometry(
        k, 4, 50000, cfg, k == 2 ? 192 : 512);
    for (const auto& cell : cells) {
      char name[96];
      std::snprintf(name, sizeof(name), "split law TV k=%d m=%ld (n=%" PRIu64 ")",
                    cell.k, cell.m, cell.splits);
      t.row(name, !cell.missing && cell.tv < 0.02, cell.tv);
    }
  }
}

int cmd_verify(const std::string& suite, std::uint64_t seed, int threads) {
  CheckTable t;
  const bool all = suite == "all";
  if (all || suite == "eigen") verify_eigen(t);
  if (all || suite == "qsd") verify_qsd(t);
  if (all || suite == "martingale") verify_martingale(t);
  if (all || suite == "certificate") verify_certificate(t);
  if (all || suite == "geometry") verify_geometry(t, seed, threads);
  std::printf("%s: %d failure(s)\n", suite.c_str(), t.failures);
  return t.failures == 0 ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------------------
// spectral tables

int cmd_spectral(int k, long a, long N, int n, const std::string& what,
                 const std::string& outPath) {
  std::string csv;
  char line[160];
  if (what == "lambda") {
    csv = "k,a,N,lambda\n";
    for (long Ncur = 10; Ncur <= N; Ncur *= 2) {
      const auto eig = lamqsd::spectral::dominant_eigen(
          lamqsd::spectral::build_killed_kernel(k, a, Ncur));
      std::snprintf(line, sizeof(line), "%d,%ld,%ld,%.15f\n", k, a, Ncur, eig.lambda);
      csv += line;
    }
  } else if (what == "qsd") {
    csv = "i,g,f\n";
    for (long i = 4; i <= N; ++i) {
      std::snprintf(line, sizeof(line), "%ld,%.17g,%.17g\n", i,
                    lamqsd::spectral::qsd_exact(i),
                    lamqsd::spectral::right_eigen_exact(i));
      csv += line;
    }
  } else if (what == "qn") {
    const auto law = lamqsd::spectral::iterate_conditioned(k, a, a, n, std::max(N, a + n));
    csv = "x,q_n,survival\n";
    for (long x = a; x <= law.N; ++x) {
      std::snprintf(line, sizeof(line), "%ld,%.17g,%.17g\n", x,
                    law.q[static_cast<std::size_t>(x - a)], law.survival);
      csv += line;
    }
  } else {
    std::fprintf(stderr, "error: unknown table '%s' (lambda|qsd|qn)\n", what.c_str());
    return kExitUsage;
  }
  if (outPath.empty())
    std::fputs(csv.c_str(), stdout);
  else if (!write_file(outPath, csv))
    return kExitCheckFailed;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"random recursive laminations and their label branching processes"};
  app.require_subcommand(1);

  int threads = 0;
  app.add_option("--threads", threads, "worker count (wins over LAMQSD_THREADS)");

  // lam
  auto* lam = app.add_subcommand("lam", "run a construction, emit SVG + genealogy");
  int lamK = 2;
  std::uint64_t lamThrows = 100, lamSeed = 0;
  bool lamSeedSet = false, lamHyper = false;
  std::string lamSvg, lamTree;
  lam->add_option("--k", lamK, "polygon arity")->check(CLI::Range(2, 64));
  lam->add_option("--throws", lamThrows, "attempted polygons");
  auto* lamSeedOpt = lam->add_option("--seed", lamSeed, "RNG seed");
  lam->add_option("--svg", lamSvg, "output SVG path");
  lam->add_option("--tree", lamTree, "output genealogy path");
  lam->add_flag("--hyperbolic", lamHyper, "draw chords as hyperbolic geodesics");

  // labels
  auto* labels = app.add_subcommand("labels", "good-path estimates on the label tree");
  int labK = 2, labN = 40;
  long labA = 4, labX0 = 4;
  std::uint64_t labSamples = 100000, labSeed = 0;
  bool labSeedSet = false, labTiming = false;
  std::string labOut, labJson;
  labels->add_option("--k", labK)->check(CLI::Range(2, 64));
  labels->add_option("--a", labA)->check(CLI::Range(1L, 1000000L));
  labels->add_option("--x0", labX0)->check(CLI::Range(0L, 1000000L));
  labels->add_option("--n", labN)->check(CLI::Range(0, 100000));
  labels->add_option("--samples", labSamples);
  auto* labSeedOpt = labels->add_option("--seed", labSeed);
  labels->add_option("--out", labOut, "CSV output path");
  labels->add_option("--json", labJson, "JSON output path");
  labels->add_flag("--timing", labTiming, "include wall time in outputs");

  // classify
  auto* classify = app.add_subcommand("classify", "sub/super/critical verdict");
  int clsK = 2;
  long clsA = 4, clsMaxN = 400;
  double clsTol = 1e-3;
  std::string clsOut;
  classify->add_option("--k", clsK)->check(CLI::Range(2, 64));
  classify->add_option("--a", clsA)->check(CLI::Range(2L, 1000000L));
  classify->add_option("--max-n", clsMaxN, "largest truncation");
  classify->add_option("--tol", clsTol, "criticality tolerance");
  classify->add_option("--out", clsOut, "JSON output path");

  // verify
  auto* verify = app.add_subcommand("verify", "run the invariant suites");
  std::string verSuite = "all";
  std::uint64_t verSeed = 1;
  verify->add_option("suite", verSuite, "all|eigen|qsd|martingale|certificate|geometry")
      ->check(CLI::IsMember({"all", "eigen", "qsd", "martingale", "certificate",
                             "geometry"}));
  verify->add_option("--seed", verSeed, "seed for the randomized suites");

  // spectral
  auto* spectral = app.add_subcommand("spectral", "dump lambda_N, qsd, q_n tables");
  int spK = 2, spN = 30;
  long spA = 4, spNstates = 160;
  std::string spWhat = "lambda", spOut;
  spectral->add_option("--k", spK)->check(CLI::Range(2, 64));
  spectral->add_option("--a", spA)->check(CLI::Range(1L, 1000000L));
  spectral->add_option("--N", spNstates, "state cap / table length");
  spectral->add_option("--n", spN, "steps for the q_n table");
  spectral->add_option("--what", spWhat, "lambda|qsd|qn");
  spectral->add_option("--out", spOut, "CSV output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }
  lamSeedSet = lamSeedOpt->count() > 0;
  labSeedSet = labSeedOpt->count() > 0;

  try {
    if (lam->parsed())
      return cmd_lam(lamK, lamThrows, lamSeedSet, lamSeed, lamSvg, lamTree, lamHyper);
    if (labels->parsed())
      return cmd_labels(labK, labA, labX0, labN, labSamples, labSeedSet, labSeed,
                        threads, labOut, labJson, labTiming);
    if (classify->parsed()) return cmd_classify(clsK, clsA, clsMaxN, clsTol, clsOut);
    if (verify->parsed()) return cmd_verify(verSuite, verSeed, threads);
    if (spectral->parsed()) return cmd_spectral(spK, spA, spNstates, spN, spWhat, spOut);
  } catch (const lamqsd::spectral::NonConvergenceError& e) {
    std::fprintf(stderr, "numerical non-convergence: %s\n", e.what());
    return kExitNoConvergence;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCheckFailed;
  }
  return kExitUsage;
}
