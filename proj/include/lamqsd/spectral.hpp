#pragma once

#include "lamqsd/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace lamqsd::spectral {

struct NonConvergenceError : std::runtime_error {
  double residual;
  NonConvergenceError(const std::string& what, double res)
      : std::runtime_error(what), residual(res) {}
};

struct ConsistencyError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Compensated (Kahan) accumulator; all spectral sums run through this so
// results do not depend on how work could be carved up.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double v) {
    const double y = v - carry;
    const double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

// Label chain killed below a, truncated to states a..N. Rows sum to less
// than one; entries vanish for y > x+1 (lower-Hessenberg band).
struct KilledKernel {
  int k = 2;
  long a = 4;
  long N = 30;
  std::vector<double> entries;  // dense row-major, dim() x dim()

  long dim() const { return N - a + 1; }
  double at(long x, long y) const {
    return entries[static_cast<std::size_t>((x - a) * dim() + (y - a))];
  }
};

KilledKernel build_killed_kernel(int k, long a, long N);

// Exact-rational twin used to validate the double-precision entries.
std::vector<Rat> build_killed_kernel_exact(int k, long a, long N);

struct EigenTriple {
  double lambda = 0.0;
  std::vector<double> left;   // normalized to sum 1
  std::vector<double> right;  // normalized so the first entry is 1
  double residual = 0.0;      // max of the two scaled infinity-norm defects
  int iterations = 0;
};

// Power iteration (forward for the right vector, transposed for the left)
// from the all-ones start until both defects drop below tol.
EigenTriple dominant_eigen(const KilledKernel& kernel, double tol = 1e-13,
                           int iterCap = 200000);

// Quasi-stationary distribution of the chord process killed below 4:
// g(i) = 2^{i-3} (i-3) / (i-1)!  for i >= 4, zero otherwise.
double qsd_exact(long i);

// Right eigenvector at eigenvalue 1/2 for the same kernel: f(i) = (i-2)/2.
double right_eigen_exact(long i);

// |power series of g at z - closed form (z/2)(e^{2z}(z-1)+z+1)|.
double generating_function_check(double z);

// Residual of the left eigen-identity g(x) = 2 sum_{y>=(x-1) v 4} g(y)/(y+1),
// the infinite sum evaluated with an explicit geometric remainder.
double left_eigen_residual(long x);

// Residual of the right eigen-identity f(x) = 2/(x+1) sum_{y=4}^{x+1} f(y).
double right_eigen_residual(long x);

struct ConditionedLaw {
  int n = 0;
  long a = 4;
  long N = 0;
  std::vector<double> q;   // law of X_n given survival, states a..N
  double survival = 1.0;   // P_{x0}(T > n)
};

// Row iteration of delta_{x0} through the killed kernel with per-step
// renormalization. Exact (no truncation) whenever N >= x0 + n; otherwise the
// tail sensitivity is checked by doubling N.
ConditionedLaw iterate_conditioned(int k, long a, long x0, int n, long N);

struct SurvivalAsymptotics {
  int n = 0;
  double twoPowSurvival = 1.0;     // 2^n P_{x0}(T > n)
  double condMean = 4.0;           // E_{x0}[X_n | T > n]
  double identityResidual = 0.0;   // worst |(x0-2) - 2^j P(T>j) E[X_j-2|T>j]|
};

// Critical chord case (k=2, killed below 4). The martingale identity is
// re-checked at every step and a violation beyond 1e-10 throws.
SurvivalAsymptotics survival_asymptotics(int n, long N, long x0 = 4);

struct RatioReport {
  bool ok = true;
  double worstMargin = 0.0;  // min over checks of ratio(x) - ratio(x+1)
  int nAt = -1;
  long xAt = -1;
};

// Checks that x -> q_n(x)/g(x) is nonincreasing for every n <= nMax.
RatioReport monotone_ratio_check(int nMax, long N);

struct SymmetryReport {
  bool ok = true;
  double worst = 0.0;  // max over i of spread between P(T=i, X_T=j), j=1,2,3
  int iAt = -1;
};

// Joint law of (T, X_T) for the chord chain from x0, absorption at {1,2,3}.
SymmetryReport hitting_symmetry_check(long x0, int nMax);

struct CertificateRecord {
  bool checked = false;
  bool ok = false;
  long M = 0;            // truncation carrying the eigenvector part of h
  double beta = 0.0;     // tail ratio base
  double lambdaMax = 0.0;
  double tailSum = 0.0;         // rigorous bound on sum_{x>M} h(x)
  double worstLowRatio = 0.0;   // max over y in [a,M] of (h P)(y) / h(y)
  double worstHighRatio = 0.0;  // uniform bound over y > M
  double lambdaCertified = 0.0; // max of the two
  double worstMargin = 0.0;     // min slack against the targets
};

// The certificate exactly as printed in the source analysis for the triangle
// process killed below 4: eigenvector part on [4,30], tail
// h(x) = 13^{x-30} (30!/x!)^2, bound 0.263 on [4,30] and lambdaTarget above.
CertificateRecord subcritical_certificate_k3(double lambdaTarget = 0.3);

// Generalization: eigenvector of the [a,M] truncation scaled to h(M)=1,
// tail h(x) = beta^{x-M} (M!/x!)^{k-1}, all infinite sums carried with
// explicit geometric remainders. Certifies h P <= target h pointwise.
CertificateRecord subcritical_certificate(int k, long a, long M, double beta,
                                          double target);

enum class Verdict { Subcritical, Critical, Supercritical, Indeterminate };

std::string to_string(Verdict v);

struct ClassificationReport {
  int k = 2;
  long a = 4;
  Verdict verdict = Verdict::Indeterminate;
  double lambdaN = 0.0;  // dominant eigenvalue at the largest truncation
  long N = 0;
  double margin = 0.0;   // k * lambdaN - 1
  bool driftPositive = false;            // lambda_N increasing along the ladder
  std::optional<double> foldedLambda;    // 2-state folded-chain lower bound
  std::optional<CertificateRecord> certificate;
};

// Ladder of truncations up to maxN, then: supercritical when k*lambda_N
// exceeds 1+tol (lambda_N is a certified lower bound), subcritical when the
// tail certificate lands below (1-tol)/k, critical when k*lambda_N sits
// within tol of 1 while still drifting up. Anything else is Indeterminate.
ClassificationReport classify(int k, long a, long maxN = 400, double tol = 1e-3);

// {schemaVersion, k, a, verdict, lambda, N, margin,
//  certificate:{checked, worstMargin}} with a stable field order.
std::string to_json(const ClassificationReport& report);

}  // namespace lamqsd::spectral
