#include "lamqsd/spectral.hpp"

#include "lamqsd/branching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

namespace lamqsd::spectral {

namespace {

double infNorm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

KilledKernel build_killed_kernel(int k, long a, long N) {
  if (k < 2 || a < 1) throw std::invalid_argument("build_killed_kernel: need k >= 2, a >= 1");
  if (N < a + 1) throw std::invalid_argument("build_killed_kernel: need N >= a+1");
  KilledKernel kernel;
  kernel.k = k;
  kernel.a = a;
  kernel.N = N;
  const long dim = kernel.dim();
  kernel.entries.assign(static_cast<std::size_t>(dim * dim), 0.0);
  for (long x = a; x <= N; ++x)
    for (long y = a; y <= std::min(x + 1, N); ++y)
      kernel.entries[static_cast<std::size_t>((x - a) * dim + (y - a))] =
          branching::kernel_prob_d(k, x, y);
  return kernel;
}

std::vector<Rat> build_killed_kernel_exact(int k, long a, long N) {
  if (N < a + 1) throw std::invalid_argument("build_killed_kernel_exact: need N >= a+1");
  const long dim = N - a + 1;
  std::vector<Rat> entries(static_cast<std::size_t>(dim * dim), Rat(0));
  for (long x = a; x <= N; ++x)
    for (long y = a; y <= std::min(x + 1, N); ++y)
      entries[static_cast<std::size_t>((x - a) * dim + (y - a))] =
          branching::kernel_prob(k, x, y);
  return entries;
}

EigenTriple dominant_eigen(const KilledKernel& kernel, double tol, int iterCap) {
  if (!(tol > 0)) throw std::invalid_argument("dominant_eigen: tol must be > 0");
  const long dim = kernel.dim();
  const auto n = static_cast<std::size_t>(dim);
  std::vector<double> left(n, 1.0), right(n, 1.0), tmp(n);

  auto leftStep = [&](const std::vector<double>& u, std::vector<double>& out) {
    for (long y = 0; y < dim; ++y) {
      KahanSum s;
      // band: contributions from x >= y-1 only
      for (long x = std::max<long>(0, y - 1); x < dim; ++x)
        s.add(u[static_cast<std::size_t>(x)] *
              kernel.entries[static_cast<std::size_t>(x * dim + y)]);
      out[static_cast<std::size_t>(y)] = s.value();
    }
  };
  auto rightStep = [&](const std::vector<double>& v, std::vector<double>& out) {
    for (long x = 0; x < dim; ++x) {
      KahanSum s;
      const long hi = std::min(dim - 1, x + 1);
      for (long y = 0; y <= hi; ++y)
        s.add(kernel.entries[static_cast<std::size_t>(x * dim + y)] *
              v[static_cast<std::size_t>(y)]);
      out[static_cast<std::size_t>(x)] = s.value();
    }
  };

  EigenTriple res;
  double lambda = 0.0;
  for (int iter = 1; iter <= iterCap; ++iter) {
    leftStep(left, tmp);
    KahanSum mass;
    for (double v : tmp) mass.add(v);
    lambda = mass.value();
    for (std::size_t i = 0; i < n; ++i) left[i] = tmp[i] / lambda;

    rightStep(right, tmp);
    const double scale = tmp[0];
    for (std::size_t i = 0; i < n; ++i) right[i] = tmp[i] / scale;

    // scaled infinity-norm defects
    leftStep(left, tmp);
    double defL = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      defL = std::max(defL, std::abs(tmp[i] - lambda * left[i]));
    defL /= infNorm(left);
    rightStep(right, tmp);
    double defR = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      defR = std::max(defR, std::abs(tmp[i] - lambda * right[i]));
    defR /= infNorm(right);

    res.residual = std::max(defL, defR);
    res.iterations = iter;
    if (res.residual < tol) {
      res.lambda = lambda;
      res.left = left;
      res.right = right;
      return res;
    }
  }
  std::ostringstream os;
  os << "dominant_eigen: no convergence after " << iterCap
     << " iterations, residual " << res.residual;
  throw NonConvergenceError(os.str(), res.residual);
}

double qsd_exact(long i) {
  if (i < 4) return 0.0;
  double g = 1.0 / 3.0;  // g(4) = 2 * 1 / 3!
  for (long j = 4; j < i; ++j)
    g *= 2.0 * static_cast<double>(j - 2) /
         (static_cast<double>(j) * static_cast<double>(j - 3));
  return g;
}

double right_eigen_exact(long i) { return static_cast<double>(i - 2) / 2.0; }

double generating_function_check(double z) {
  if (!(z >= 0.0 && z < 1.0))
    throw std::invalid_argument("generating_function_check: need 0 <= z < 1");
  KahanSum series;
  double g = 1.0 / 3.0;
  double zi = z * z * z * z;
  for (long i = 4; i <= 500; ++i) {
    series.add(g * zi);
    g *= 2.0 * static_cast<double>(i - 2) /
         (static_cast<double>(i) * static_cast<double>(i - 3));
    zi *= z;
  }
  const double closed = 0.5 * z * (std::exp(2.0 * z) * (z - 1.0) + z + 1.0);
  return std::abs(series.value() - closed);
}

double left_eigen_residual(long x) {
  if (x < 4) throw std::invalid_argument("left_eigen_residual: need x >= 4");
  const long y0 = std::max<long>(x - 1, 4);
  KahanSum s;
  double g = qsd_exact(y0);
  long y = y0;
  double term = g / static_cast<double>(y + 1);
  while (term > 1e-30 || y < y0 + 8) {
    s.add(term);
    g *= 2.0 * static_cast<double>(y - 2) /
         (static_cast<double>(y) * static_cast<double>(y - 3));
    ++y;
    term = g / static_cast<double>(y + 1);
    if (y > y0 + 4000) break;
  }
  // consecutive terms shrink by more than 1/2 from y >= 8 on, so the
  // unsummed tail is at most twice the first dropped term
  return std::abs(2.0 * s.value() - qsd_exact(x)) + 4.0 * term;
}

double right_eigen_residual(long x) {
  if (x < 4) throw std::invalid_argument("right_eigen_residual: need x >= 4");
  KahanSum s;
  for (long y = 4; y <= x + 1; ++y) s.add(right_eigen_exact(y));
  return std::abs(2.0 / static_cast<double>(x + 1) * s.value() - right_eigen_exact(x));
}

ConditionedLaw iterate_conditioned(int k, long a, long x0, int n, long N) {
  if (x0 < a || x0 > N)
    throw std::invalid_argument("iterate_conditioned: x0 must lie in [a, N]");
  if (n < 0) throw std::invalid_argument("iterate_conditioned: n must be >= 0");

  auto run = [&](long Ncap) {
    const KilledKernel kernel = build_killed_kernel(k, a, Ncap);
    const long dim = kernel.dim();
    std::vector<double> q(static_cast<std::size_t>(dim), 0.0), next(static_cast<std::size_t>(dim));
    q[static_cast<std::size_t>(x0 - a)] = 1.0;
    double survival = 1.0;
    for (int step = 0; step < n; ++step) {
      for (long y = 0; y < dim; ++y) {
        KahanSum s;
        for (long x = std::max<long>(0, y - 1); x < dim; ++x)
          s.add(q[static_cast<std::size_t>(x)] *
                kernel.entries[static_cast<std::size_t>(x * dim + y)]);
        next[static_cast<std::size_t>(y)] = s.value();
      }
      KahanSum mass;
      for (double v : next) mass.add(v);
      const double m = mass.value();
      survival *= m;
      for (long y = 0; y < dim; ++y) q[static_cast<std::size_t>(y)] = next[static_cast<std::size_t>(y)] / m;
    }
    ConditionedLaw law;
    law.n = n;
    law.a = a;
    law.N = Ncap;
    law.q = std::move(q);
    law.survival = survival;
    return law;
  };

  ConditionedLaw law = run(N);
  if (N < x0 + n) {
    // truncation can bite; check by doubling
    const ConditionedLaw wide = run(std::min<long>(2 * N, x0 + n));
    if (std::abs(wide.survival - law.survival) > 1e-12 * wide.survival)
      throw ConsistencyError(
          "iterate_conditioned: survival is N-sensitive, increase N");
  }
  return law;
}

SurvivalAsymptotics survival_asymptotics(int n, long N, long x0) {
  const long a = 4;
  if (x0 < a) throw std::invalid_argument("survival_asymptotics: x0 must be >= 4");
  const long Ncap = std::max(N, x0 + n);  // keeps the iteration exact
  const KilledKernel kernel = build_killed_kernel(2, a, Ncap);
  const long dim = kernel.dim();
  std::vector<double> q(static_cast<std::size_t>(dim), 0.0), next(static_cast<std::size_t>(dim));
  q[static_cast<std::size_t>(x0 - a)] = 1.0;

  SurvivalAsymptotics res;
  double r = 1.0;  // 2^j P(T>j)
  double mean = static_cast<double>(x0);
  double worst = std::abs(static_cast<double>(x0 - 2) - r * (mean - 2.0));
  for (int j = 1; j <= n; ++j) {
    for (long y = 0; y < dim; ++y) {
      KahanSum s;
      for (long x = std::max<long>(0, y - 1); x < dim; ++x)
        s.add(q[static_cast<std::size_t>(x)] *
              kernel.entries[static_cast<std::size_t>(x * dim + y)]);
      next[static_cast<std::size_t>(y)] = s.value();
    }
    KahanSum mass;
    for (double v : next) mass.add(v);
    const double m = mass.value();
    r *= 2.0 * m;
    for (long y = 0; y < dim; ++y) q[static_cast<std::size_t>(y)] = next[static_cast<std::size_t>(y)] / m;
    KahanSum ms;
    for (long y = 0; y < dim; ++y)
      ms.add(static_cast<double>(a + y) * q[static_cast<std::size_t>(y)]);
    mean = ms.value();
    const double residual = std::abs(static_cast<double>(x0 - 2) - r * (mean - 2.0));
    worst = std::max(worst, residual);
    if (residual > 1e-10)
      throw ConsistencyError("survival_asymptotics: martingale identity violated");
  }
  res.n = n;
  res.twoPowSurvival = r;
  res.condMean = mean;
  res.identityResidual = worst;
  return res;
}

RatioReport monotone_ratio_check(int nMax, long N) {
  const long a = 4;
  const KilledKernel kernel = build_killed_kernel(2, a, N);
  const long dim = kernel.dim();
  std::vector<double> q(static_cast<std::size_t>(dim), 0.0), next(static_cast<std::size_t>(dim));
  q[0] = 1.0;  // x0 = 4
  std::vector<double> g(static_cast<std::size_t>(dim));
  for (long x = a; x <= N; ++x) g[static_cast<std::size_t>(x - a)] = qsd_exact(x);

  RatioReport report;
  report.worstMargin = std::numeric_limits<double>::infinity();
  auto check = [&](int n) {
    double prev = q[0] / g[0];
    for (long i = 1; i < dim; ++i) {
      const double cur = q[static_cast<std::size_t>(i)] / g[static_cast<std::size_t>(i)];
      const double margin = prev - cur;
      if (margin < report.worstMargin) {
        report.worstMargin = margin;
        report.nAt = n;
        report.xAt = a + i - 1;
      }
      if (margin < -1e-12) report.ok = false;
      prev = cur;
    }
  };
  check(0);
  for (int n = 1; n <= nMax; ++n) {
    for (long y = 0; y < dim; ++y) {
      KahanSum s;
      for (long x = std::max<long>(0, y - 1); x < dim; ++x)
        s.add(q[static_cast<std::size_t>(x)] *
              kernel.entries[static_cast<std::size_t>(x * dim + y)]);
      next[static_cast<std::size_t>(y)] = s.value();
    }
    KahanSum mass;
    for (double v : next) mass.add(v);
    for (long y = 0; y < dim; ++y)
      q[static_cast<std::size_t>(y)] = next[static_cast<std::size_t>(y)] / mass.value();
    check(n);
  }
  return report;
}

SymmetryReport hitting_symmetry_check(long x0, int nMax) {
  if (x0 < 4) throw std::invalid_argument("hitting_symmetry_check: need x0 >= 4");
  const long a = 4;
  const long N = x0 + nMax + 1;
  const KilledKernel kernel = build_killed_kernel(2, a, N);
  const long dim = kernel.dim();
  std::vector<double> alive(static_cast<std::size_t>(dim), 0.0), next(static_cast<std::size_t>(dim));
  alive[static_cast<std::size_t>(x0 - a)] = 1.0;

  SymmetryReport report;
  for (int i = 1; i <= nMax; ++i) {
    double hit[3];
    for (long j = 1; j <= 3; ++j) {
      KahanSum s;
      for (long x = a; x <= N; ++x)
        s.add(alive[static_cast<std::size_t>(x - a)] * branching::kernel_prob_d(2, x, j));
      hit[j - 1] = s.value();
    }
    const double spread = std::max({hit[0], hit[1], hit[2]}) -
                          std::min({hit[0], hit[1], hit[2]});
    if (spread > report.worst) {
      report.worst = spread;
      report.iAt = i;
    }
    if (spread > 1e-12) report.ok = false;
    for (long y = 0; y < dim; ++y) {
      KahanSum s;
      for (long x = std::max<long>(0, y - 1); x < dim; ++x)
        s.add(alive[static_cast<std::size_t>(x)] *
              kernel.entries[static_cast<std::size_t>(x * dim + y)]);
      next[static_cast<std::size_t>(y)] = s.value();
    }
    alive.swap(next);
  }
  return report;
}

namespace {

// Left Perron eigenvector of the [a,M] truncation scaled so h(M) = 1.
// Returns empty when the scaled vector misbehaves (nonpositive entries or
// minimum away from M), which voids the certificate construction.
std::vector<double> certificate_head(int k, long a, long M, double* lambdaOut) {
  const KilledKernel kernel = build_killed_kernel(k, a, M);
  const EigenTriple eig = dominant_eigen(kernel, 1e-13);
  *lambdaOut = eig.lambda;
  std::vector<double> h = eig.left;
  const double hM = h.back();
  if (!(hM > 0.0)) return {};
  for (auto& v : h) v /= hM;
  for (double v : h)
    if (!(v >= 1.0) || !std::isfinite(v)) return {};  // min must sit at M
  return h;
}

}  // namespace

CertificateRecord subcritical_certificate(int k, long a, long M, double beta,
                                          double target) {
  CertificateRecord rec;
  rec.checked = true;
  rec.M = M;
  rec.beta = beta;
  const long XMAX = M + 400;  // direct tail evaluation range
  const double tailRatioCap = beta / std::pow(static_cast<double>(M + 2),
                                              static_cast<double>(k - 1));
  if (!(tailRatioCap < 1.0)) return rec;  // tail not even geometric

  double lambdaMax = 0.0;
  const std::vector<double> h = certificate_head(k, a, M, &lambdaMax);
  rec.lambdaMax = lambdaMax;
  if (h.empty()) return rec;

  // h on (M, XMAX]: h(x) = beta^{x-M} (M!/x!)^{k-1}, via the ratio
  // h(x)/h(x-1) = beta / x^{k-1}.
  std::vector<double> tail(static_cast<std::size_t>(XMAX - M), 0.0);
  {
    double hx = 1.0;
    for (long x = M + 1; x <= XMAX; ++x) {
      hx *= beta / std::pow(static_cast<double>(x), static_cast<double>(k - 1));
      tail[static_cast<std::size_t>(x - M - 1)] = hx;
    }
  }
  KahanSum tailSum;
  for (double v : tail) tailSum.add(v);
  const double tailRemainder =
      tail.back() * tailRatioCap / (1.0 - tailRatioCap);
  rec.tailSum = tailSum.value() + tailRemainder;

  // (1) y in [a, M]: head part plus the tail's contribution, bounded with
  // the explicit remainder (entries of the kernel never exceed 1).
  double worstLow = 0.0;
  for (long y = a; y <= M; ++y) {
    KahanSum s;
    for (long x = a; x <= M; ++x)
      s.add(h[static_cast<std::size_t>(x - a)] * branching::kernel_prob_d(k, x, y));
    for (long x = M + 1; x <= XMAX; ++x)
      s.add(tail[static_cast<std::size_t>(x - M - 1)] * branching::kernel_prob_d(k, x, y));
    const double lhs = s.value() + tailRemainder;
    worstLow = std::max(worstLow, lhs / h[static_cast<std::size_t>(y - a)]);
  }
  rec.worstLowRatio = worstLow;

  // (2) y in (M, YMAX]: everything relative to h(y); the running ratio
  // t(x) = h(x)/h(y) only decreases so it stays in range.
  const long YMAX = M + 200;
  double worstHigh = 0.0;
  for (long y = M + 1; y <= YMAX; ++y) {
    KahanSum s;
    double t;  // h(y-1)/h(y) = y^{k-1}/beta
    t = std::pow(static_cast<double>(y), static_cast<double>(k - 1)) / beta;
    long x = y - 1;
    while (true) {
      s.add(t * branching::kernel_prob_d(k, x, y));
      ++x;
      t *= beta / std::pow(static_cast<double>(x), static_cast<double>(k - 1));
      if (t < 1e-22 && x > y + 4) break;
    }
    const double c = beta / std::pow(static_cast<double>(x + 1), static_cast<double>(k - 1));
    worstHigh = std::max(worstHigh, s.value() + t * 1.0 / (1.0 - c));
  }
  // (3) y > YMAX, uniform bound: top-transition term, diagonal term and the
  // geometric rest, each monotone decreasing in y.
  {
    const double y = static_cast<double>(YMAX + 1);
    double fact = 1.0;
    for (int i = 2; i < k; ++i) fact *= i;  // (k-1)!
    const double term1 = fact / beta;
    const double term2 =
        static_cast<double>(k - 1) / to_double(Rat(binomial(YMAX + k, k - 1)));
    const double c = beta / std::pow(y + 1.0, static_cast<double>(k - 1));
    const double term3 = c / (1.0 - c);
    worstHigh = std::max(worstHigh, term1 + term2 + term3);
  }
  rec.worstHighRatio = worstHigh;

  rec.lambdaCertified = std::max(worstLow, worstHigh);
  rec.worstMargin = target - rec.lambdaCertified;
  rec.ok = rec.lambdaCertified <= target;
  return rec;
}

CertificateRecord subcritical_certificate_k3(double lambdaTarget) {
  // Paper constants: [4,30] head, 13^{x-30}(30!/x!)^2 tail, 0.263 low bound.
  CertificateRecord rec = subcritical_certificate(3, 4, 30, 13.0, lambdaTarget);
  if (!rec.checked) return rec;
  // the printed bounds: low range against 0.263, tail mass against 0.014
  rec.ok = rec.ok && rec.worstLowRatio <= 0.263 && rec.tailSum < 0.014 &&
           rec.worstHighRatio <= lambdaTarget;
  rec.worstMargin = std::min({0.263 - rec.worstLowRatio,
                              lambdaTarget - rec.worstHighRatio,
                              0.014 - rec.tailSum});
  return rec;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Subcritical: return "Subcritical";
    case Verdict::Critical: return "Critical";
    case Verdict::Supercritical: return "Supercritical";
    case Verdict::Indeterminate: return "Indeterminate";
  }
  return "Indeterminate";
}

ClassificationReport classify(int k, long a, long maxN, double tol) {
  if (k < 2 || a < 2) throw std::invalid_argument("classify: need k >= 2, a >= 2");
  ClassificationReport report;
  report.k = k;
  report.a = a;

  // truncation ladder
  std::vector<long> ladder;
  for (long N = 12; N < maxN; N *= 2) ladder.push_back(N);
  ladder.push_back(maxN);
  double lambdaFirst = 0.0, lambda = 0.0;
  long Nlast = 0;
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const long N = std::max(ladder[i], a + 2);
    lambda = dominant_eigen(build_killed_kernel(k, a, N)).lambda;
    if (i == 0) lambdaFirst = lambda;
    Nlast = N;
  }
  report.lambdaN = lambda;
  report.N = Nlast;
  report.margin = k * lambda - 1.0;
  report.driftPositive = lambda > lambdaFirst;

  // 2-state folded chain on {a, a+1}: a lower bound for the survival decay,
  // so k * lambda_fold > 1 is supercritical evidence on its own.
  {
    const double p00 = branching::kernel_prob_d(k, a, a);
    const double p01 = branching::kernel_prob_d(k, a, a + 1);
    const double p10 = branching::kernel_prob_d(k, a + 1, a);
    const double p11 = branching::kernel_prob_d(k, a + 1, a + 1) +
                       branching::kernel_prob_d(k, a + 1, a + 2);
    const double tr = p00 + p11;
    const double det = p00 * p11 - p01 * p10;
    const double disc = tr * tr - 4.0 * det;
    if (disc >= 0.0) report.foldedLambda = 0.5 * (tr + std::sqrt(disc));
  }

  if (k * lambda > 1.0 + tol) {
    report.verdict = Verdict::Supercritical;
    return report;
  }

  const double target = (1.0 - tol) / k;
  double betaFact = 1.0;
  for (int i = 2; i <= k; ++i) betaFact *= i;
  for (long M : {40L, 80L, 120L}) {
    CertificateRecord cert = subcritical_certificate(k, a, M, 2.0 * betaFact, target);
    report.certificate = cert;
    if (cert.ok) {
      report.verdict = Verdict::Subcritical;
      return report;
    }
  }

  if (std::abs(k * lambda - 1.0) < tol && report.driftPositive) {
    // measured, not proven: lambda_N keeps drifting up toward 1/k
    report.verdict = Verdict::Critical;
    return report;
  }
  report.verdict = Verdict::Indeterminate;
  return report;
}

std::string to_json(const ClassificationReport& report) {
  char buf[512];
  std::string cert = "null";
  if (report.certificate) {
    std::snprintf(buf, sizeof(buf),
                  "{\"checked\": %s, \"worstMargin\": %.12g}",
                  report.certificate->checked ? "true" : "false",
                  report.certificate->worstMargin);
    cert = buf;
  }
  std::snprintf(buf, sizeof(buf),
                "{\"schemaVersion\": 1, \"k\": %d, \"a\": %ld, "
                "\"verdict\": \"%s\", \"lambda\": %.15g, \"N\": %ld, "
                "\"margin\": %.12g, \"certificate\": %s}",
                report.k, report.a, to_string(report.verdict).c_str(),
                report.lambdaN, report.N, report.margin, cert.c_str());
  return buf;
}

}  // namespace lamqsd::spectral
