#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "lamqsd/branching.hpp"
#include "lamqsd/spectral.hpp"

#include <cmath>

using namespace lamqsd;
using namespace lamqsd::spectral;

TEST_CASE("killed kernel rows") {
  SUBCASE("chord kernel killed below 4") {
    const auto kernel = build_killed_kernel(2, 4, 30);
    CHECK(kernel.at(4, 4) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(kernel.at(4, 5) == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(kernel.at(4, 6) == 0.0);
    for (long x = 4; x <= 30; ++x) {
      double row = 0.0;
      for (long y = 4; y <= 30; ++y) {
        row += kernel.at(x, y);
        if (y > x + 1) CHECK(kernel.at(x, y) == 0.0);
      }
      CHECK(row < 1.0);  // substochastic
    }
  }

  SUBCASE("chord kernel killed below 5") {
    const auto kernel = build_killed_kernel(2, 5, 30);
    CHECK(kernel.at(5, 5) == doctest::Approx(1.0 / 6).epsilon(1e-15));
    CHECK(kernel.at(5, 6) == doctest::Approx(1.0 / 6).epsilon(1e-15));
  }

  SUBCASE("triangle kernel folded to {3,4} matches the 2x2 matrix") {
    // restriction to {3,4} with the 4 -> 5 mass folded onto 4 -> 4
    const double p33 = branching::kernel_prob_d(3, 3, 3);
    const double p34 = branching::kernel_prob_d(3, 3, 4);
    const double p43 = branching::kernel_prob_d(3, 4, 3);
    const double p44 = branching::kernel_prob_d(3, 4, 4) + branching::kernel_prob_d(3, 4, 5);
    CHECK(p33 == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(p34 == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(p43 == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(p44 == doctest::Approx(0.2).epsilon(1e-15));
  }

  SUBCASE("double entries match the exact rationals") {
    const auto kernel = build_killed_kernel(3, 4, 20);
    const auto exact = build_killed_kernel_exact(3, 4, 20);
    const long dim = kernel.dim();
    for (long i = 0; i < dim * dim; ++i)
      CHECK(kernel.entries[static_cast<std::size_t>(i)] ==
            doctest::Approx(to_double(exact[static_cast<std::size_t>(i)]))
                .epsilon(1e-15));
  }

  SUBCASE("bad arguments throw") {
    CHECK_THROWS_AS(build_killed_kernel(2, 4, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_killed_kernel(1, 4, 30), std::invalid_argument);
  }
}

TEST_CASE("dominant eigenvalues reproduce the reference numerics") {
  struct Case {
    int k;
    long a;
    double lambda;
  };
  for (const Case c : {Case{3, 4, 0.248376642883065}, Case{2, 5, 0.433040861268365},
                       Case{4, 3, 0.231280689028977}}) {
    const auto eig = dominant_eigen(build_killed_kernel(c.k, c.a, 30));
    CHECK(std::abs(eig.lambda - c.lambda) < 1e-9);
    CHECK(eig.residual < 1e-13);
    for (double v : eig.left) CHECK(v > 0.0);
    for (double v : eig.right) CHECK(v > 0.0);
    // normalizations: left sums to one, right starts at one
    double sum = 0.0;
    for (double v : eig.left) sum += v;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(eig.right[0] == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("eigenvalue is nondecreasing in the truncation and tends to 1/2") {
  double prev = 0.0;
  for (long N : {10L, 20L, 40L, 80L, 160L}) {
    const double lam = dominant_eigen(build_killed_kernel(2, 4, N)).lambda;
    CHECK(lam >= prev - 1e-11);
    CHECK(lam < 0.5 + 1e-9);
    prev = lam;
  }
  const double lam300 = dominant_eigen(build_killed_kernel(2, 4, 300)).lambda;
  CHECK(std::abs(lam300 - 0.5) < 1e-6);
}

TEST_CASE("power iteration reports non-convergence instead of guessing") {
  CHECK_THROWS_AS(dominant_eigen(build_killed_kernel(2, 4, 60), 1e-13, 2),
                  NonConvergenceError);
}

TEST_CASE("quasi-stationary closed form") {
  CHECK(qsd_exact(4) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(qsd_exact(5) == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(qsd_exact(6) == doctest::Approx(0.2).epsilon(1e-14));
  CHECK(qsd_exact(3) == 0.0);
  KahanSum sum;
  for (long i = 4; i <= 200; ++i) sum.add(qsd_exact(i));
  CHECK(std::abs(sum.value() - 1.0) < 1e-15);
  // mean of the qsd is (e^2+3)/2
  KahanSum mean;
  for (long i = 4; i <= 200; ++i) mean.add(static_cast<double>(i) * qsd_exact(i));
  CHECK(mean.value() == doctest::Approx((std::exp(2.0) + 3.0) / 2.0).epsilon(1e-13));
}

TEST_CASE("right eigenvector closed form") {
  CHECK(right_eigen_exact(4) == 1.0);
  CHECK(right_eigen_exact(6) == 2.0);
  CHECK(right_eigen_residual(100) < 1e-12);
  double worst = 0.0;
  for (long x = 4; x <= 1000; ++x) worst = std::max(worst, right_eigen_residual(x));
  CHECK(worst < 1e-12);
}

TEST_CASE("left eigen-identity holds with the closed form") {
  double worst = 0.0;
  for (long x = 4; x <= 150; ++x) worst = std::max(worst, left_eigen_residual(x));
  CHECK(worst < 1e-12);
}

TEST_CASE("generating function matches the series") {
  CHECK(generating_function_check(0.0) == 0.0);
  CHECK(generating_function_check(0.5) < 1e-12);
  CHECK(generating_function_check(0.99) < 1e-10);
}

TEST_CASE("conditioned iteration") {
  SUBCASE("zero steps is the point mass") {
    const auto law = iterate_conditioned(2, 4, 7, 0, 50);
    CHECK(law.survival == 1.0);
    CHECK(law.q[3] == 1.0);
  }

  SUBCASE("one step from 4 spreads evenly over {4,5}") {
    const auto law = iterate_conditioned(2, 4, 4, 1, 50);
    CHECK(law.survival == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(law.q[0] == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(law.q[1] == doctest::Approx(0.5).epsilon(1e-14));
  }

  SUBCASE("q sums to one and survival is monotone") {
    double prevSurvival = 1.0;
    for (int n : {5, 10, 20}) {
      const auto law = iterate_conditioned(2, 4, 4, n, 100);
      KahanSum s;
      for (double v : law.q) s.add(v);
      CHECK(std::abs(s.value() - 1.0) < 1e-12);
      CHECK(law.survival <= prevSurvival);
      prevSurvival = law.survival;
    }
  }

  SUBCASE("converges to the quasi-stationary law in total variation") {
    const auto law = iterate_conditioned(2, 4, 4, 200, 250);
    double tv = 0.0;
    for (long x = 4; x <= law.N; ++x)
      tv += std::abs(law.q[static_cast<std::size_t>(x - 4)] - qsd_exact(x));
    CHECK(0.5 * tv < 1e-8);
  }

  SUBCASE("x0 outside [a, N] is rejected") {
    CHECK_THROWS_AS(iterate_conditioned(2, 4, 3, 5, 50), std::invalid_argument);
  }
}

TEST_CASE("survival asymptotics and the martingale identity") {
  SUBCASE("n = 0") {
    const auto s = survival_asymptotics(0, 50);
    CHECK(s.twoPowSurvival == 1.0);
    CHECK(s.condMean == 4.0);
  }

  SUBCASE("limits at n = 200") {
    const auto s = survival_asymptotics(200, 600);
    CHECK(std::abs(s.twoPowSurvival - 4.0 / (std::exp(2.0) - 1.0)) < 1e-6);
    CHECK(std::abs(s.condMean - (std::exp(2.0) + 3.0) / 2.0) < 1e-6);
    CHECK(s.identityResidual < 1e-10);
  }

  SUBCASE("expected good paths never exceed (x0-2)/2") {
    for (long x0 = 4; x0 <= 10; ++x0) {
      const auto s = survival_asymptotics(200, 600, x0);
      CHECK(s.twoPowSurvival <= static_cast<double>(x0 - 2) / 2.0 + 1e-12);
    }
  }

  SUBCASE("conditioned mass at 4 stays within the initial ratio bound") {
    // q_n(4)/g(4) <= q_0(4)/g(4) = 3 for all n
    const long N = 250;
    const auto kernel = build_killed_kernel(2, 4, N);
    std::vector<double> q(static_cast<std::size_t>(kernel.dim()), 0.0);
    std::vector<double> next(q.size());
    q[0] = 1.0;
    for (int n = 1; n <= 200; ++n) {
      for (long y = 0; y < kernel.dim(); ++y) {
        KahanSum s;
        for (long x = std::max<long>(0, y - 1); x < kernel.dim(); ++x)
          s.add(q[static_cast<std::size_t>(x)] * kernel.entries[static_cast<std::size_t>(x * kernel.dim() + y)]);
        next[static_cast<std::size_t>(y)] = s.value();
      }
      KahanSum mass;
      for (double v : next) mass.add(v);
      for (std::size_t i = 0; i < q.size(); ++i) q[i] = next[i] / mass.value();
      CHECK(q[0] / qsd_exact(4) <= 3.0 + 1e-12);
    }
  }
}

TEST_CASE("monotone ratio of q_n against the qsd") {
  const auto report = monotone_ratio_check(50, 300);
  CHECK(report.ok);
  CHECK(report.worstMargin > -1e-12);
}

TEST_CASE("hitting symmetry of the killed chord chain") {
  // single-step laws are equal by the kernel's shape
  CHECK(branching::kernel_prob_d(2, 4, 1) == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(branching::kernel_prob_d(2, 5, 1) == doctest::Approx(1.0 / 6).epsilon(1e-15));
  for (long x0 = 4; x0 <= 8; ++x0) {
    const auto rep = hitting_symmetry_check(x0, 30);
    CHECK(rep.ok);
    CHECK(rep.worst < 1e-12);
  }
}

TEST_CASE("subcritical certificate with the printed constants") {
  const auto cert = subcritical_certificate_k3();
  CHECK(cert.checked);
  CHECK(cert.ok);
  CHECK(cert.lambdaMax == doctest::Approx(0.248376642883065).epsilon(1e-9));
  CHECK(cert.tailSum < 0.014);
  CHECK(cert.worstLowRatio <= 0.263);
  CHECK(cert.worstHighRatio <= 0.3);

  // h(31) = 13/31^2 relative to h(30) = 1
  const auto kernel = build_killed_kernel(3, 4, 30);
  const auto eig = dominant_eigen(kernel);
  std::vector<double> h = eig.left;
  for (auto& v : h) v /= eig.left.back();
  CHECK(h.back() == 1.0);
  for (std::size_t i = 0; i + 1 < h.size(); ++i) CHECK(h[i] > h[i + 1]);
  CHECK(13.0 / 961.0 == doctest::Approx(0.013527575442).epsilon(1e-9));
}

TEST_CASE("generalized certificates") {
  CHECK(subcritical_certificate(2, 5, 80, 4.0, 0.4995).ok);
  CHECK(subcritical_certificate(3, 4, 40, 12.0, (1.0 - 1e-3) / 3).ok);
  CHECK(subcritical_certificate(4, 3, 40, 48.0, (1.0 - 1e-3) / 4).ok);
  // the critical case must NOT be certifiable below 1/2
  CHECK_FALSE(subcritical_certificate(2, 4, 80, 4.0, 0.4995).ok);
}

TEST_CASE("classification of the five pinned cases") {
  const auto super = classify(3, 3, 100);
  CHECK(super.verdict == Verdict::Supercritical);
  CHECK(super.margin > 0.0);
  REQUIRE(super.foldedLambda.has_value());
  CHECK(*super.foldedLambda == doctest::Approx((2.0 + std::sqrt(2.0)) / 10.0).epsilon(1e-14));
  CHECK(*super.foldedLambda > 0.34);

  const auto crit = classify(2, 4);
  CHECK(crit.verdict == Verdict::Critical);
  CHECK(std::abs(crit.margin) < 1e-3);
  CHECK(crit.driftPositive);

  CHECK(classify(2, 5).verdict == Verdict::Subcritical);
  CHECK(classify(3, 4).verdict == Verdict::Subcritical);
  CHECK(classify(4, 3).verdict == Verdict::Subcritical);
}

TEST_CASE("classification report serializes to the stable JSON shape") {
  const auto report = classify(2, 5, 100);
  const auto json = to_json(report);
  CHECK(json.find("\"schemaVersion\": 1") != std::string::npos);
  CHECK(json.find("\"k\": 2") != std::string::npos);
  CHECK(json.find("\"a\": 5") != std::string::npos);
  CHECK(json.find("\"verdict\": \"Subcritical\"") != std::string::npos);
  CHECK(json.find("\"lambda\": ") != std::string::npos);
  CHECK(json.find("\"margin\": ") != std::string::npos);
  CHECK(json.find("\"certificate\": {\"checked\": true") != std::string::npos);
  // serialization is deterministic
  CHECK(json == to_json(classify(2, 5, 100)));
}
