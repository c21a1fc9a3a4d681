#include <cmath>
#include <vector>

#include <doctest.h>

#include "revosim/prob.hpp"
#include "revosim/rng.hpp"

using namespace revosim;
using namespace revosim::prob;

namespace {

// exhaustive subset enumeration oracle for the hypergeometric pmf
Rational enumerate_pmf(std::uint64_t N, std::uint64_t K, std::uint64_t n, std::uint64_t k) {
  BigInt hits = 0, total = 0;
  for (std::uint64_t mask = 0; mask < (1ull << N); ++mask) {
    if (static_cast<std::uint64_t>(__builtin_popcountll(mask)) != n) continue;
    ++total;
    std::uint64_t marked = 0;
    for (std::uint64_t i = 0; i < K; ++i) marked += (mask >> i) & 1;  // first K are marked
    if (marked == k) ++hits;
  }
  return Rational{hits, total};
}

}  // namespace

TEST_CASE("inverse normal CDF hits reference quantiles") {
  CHECK(std::abs(inverse_normal_cdf(0.5)) < 1e-12);
  CHECK(inverse_normal_cdf(0.975) == doctest::Approx(1.95996398454).epsilon(1e-9));
  CHECK(inverse_normal_cdf(0.025) == doctest::Approx(-1.95996398454).epsilon(1e-9));
  for (double p : {1e-10, 1e-4, 0.1, 0.3, 0.77, 0.999, 1 - 1e-10}) {
    CHECK(normal_cdf(inverse_normal_cdf(p)) == doctest::Approx(p).epsilon(1e-9));
  }
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), ProbError);
  CHECK_THROWS_AS(inverse_normal_cdf(1.0), ProbError);
}

TEST_CASE("hypergeometric pmf known values") {
  CHECK(hypergeom_pmf({4, 4, 4}, 4) == 1.0);
  const Rational r = hypergeom_pmf_exact({10, 4, 3}, 2);
  CHECK(r.num * 10 == r.den * 3);  // exactly 3/10
  CHECK(hypergeom_pmf({10, 4, 3}, 2) == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(hypergeom_pmf({10, 4, 3}, 9) == 0.0);  // outside support
}

TEST_CASE("hypergeometric pmf equals subset enumeration on random small params") {
  Rng rng(61);
  for (int trial = 0; trial < 60; ++trial) {
    const std::uint64_t N = 1 + rng.below(12);
    const std::uint64_t K = rng.below(static_cast<int>(N) + 1);
    const std::uint64_t n = rng.below(static_cast<int>(N) + 1);
    for (std::uint64_t k = 0; k <= n; ++k) {
      CHECK(hypergeom_pmf_exact({N, K, n}, k) == enumerate_pmf(N, K, n, k));
    }
  }
}

TEST_CASE("hypergeometric pmf normalizes exactly") {
  const HypergeomParams params{20, 7, 5};
  Rational sum{0, 1};
  for (std::uint64_t k = 0; k <= 5; ++k) {
    const Rational p = hypergeom_pmf_exact(params, k);
    sum = Rational{sum.num * p.den + p.num * sum.den, sum.den * p.den};
  }
  CHECK(sum == Rational{1, 1});
}

TEST_CASE("large-parameter pmf falls back to log-factorials accurately") {
  // C(50,3)*C(150,7)/C(200,10), exact 0.17069... via rationals at N=200
  const double v = hypergeom_pmf({200, 50, 10}, 3);
  const Rational r = hypergeom_pmf_exact({200, 50, 10}, 3);
  CHECK(v == doctest::Approx(r.to_double()).epsilon(1e-9));
}

TEST_CASE("transfer bound endpoints and reference value") {
  CHECK(transfer_prob_bound(100, 100, 5) == 1.0);
  CHECK(transfer_prob_bound(100, 4, 5) == 0.0);
  CHECK(transfer_prob_bound(100, 96, 5) == doctest::Approx(0.811875116).epsilon(1e-8));
}

TEST_CASE("transfer bound is nondecreasing in rank and zero iff rank < s") {
  double prev = -1.0;
  for (std::uint64_t rank = 1; rank <= 100; ++rank) {
    const double b = transfer_prob_bound(100, rank, 5);
    CHECK(b >= prev);
    CHECK((b == 0.0) == (rank < 5));
    prev = b;
  }
}

TEST_CASE("birthday threshold reference values and monotonicity") {
  CHECK(birthday_threshold(365, 2, 0.5) == doctest::Approx(22.49).epsilon(0.0005));
  CHECK(birthday_threshold(365, 2, 1e-9) < 0.1);
  CHECK(birthday_threshold(730, 2, 0.5) > birthday_threshold(365, 2, 0.5));
  CHECK(birthday_threshold(365, 2, 0.9) > birthday_threshold(365, 2, 0.5));
  CHECK(birthday_threshold(365, 3, 0.5) > birthday_threshold(365, 2, 0.5));  // needs more draws
  CHECK_THROWS_AS(birthday_threshold(365, 1, 0.5), ProbError);
  CHECK_THROWS_AS(birthday_threshold(365, 2, 1.0), ProbError);
}

TEST_CASE("birthday threshold tracks a Monte Carlo collision simulation") {
  // draw uniformly from c prefixes until one value has been seen k times
  const double predicted = birthday_threshold(15625, 6, 0.5);
  Rng rng(71);
  std::vector<int> counts(15625, 0);
  std::vector<double> trials;
  for (int t = 0; t < 2000; ++t) {
    std::fill(counts.begin(), counts.end(), 0);
    long draws = 0;
    while (true) {
      ++draws;
      if (++counts[rng.below(15625)] == 6) break;
    }
    trials.push_back(static_cast<double>(draws));
  }
  std::sort(trials.begin(), trials.end());
  const double median = trials[trials.size() / 2];
  CHECK(std::abs(predicted - median) / median < 0.15);
}

TEST_CASE("normal order statistics match Blom's approximation properties") {
  CHECK(normal_order_stat(2, 2) == doctest::Approx(0.600).epsilon(0.005));
  for (std::uint64_t w : {5ull, 9ull, 25ull}) {
    CHECK(std::abs(normal_order_stat((w + 1) / 2, w)) < 0.02);  // median symmetry
    CHECK(normal_order_stat(1, w) == doctest::Approx(-normal_order_stat(w, w)).epsilon(1e-9));
    double prev = normal_order_stat(1, w);
    for (std::uint64_t r = 2; r <= w; ++r) {
      const double v = normal_order_stat(r, w);
      CHECK(v > prev);
      prev = v;
    }
  }
  // E[max of 2 standard normals] = 1/sqrt(pi); Blom is approximate here
  CHECK(std::abs(normal_order_stat(2, 2) - 0.5642) < 0.04);
}

TEST_CASE("quanta delay bound endpoints") {
  CHECK(quanta_delay_bound(25, 25, 60.0, 10.0) == 0.0);
  CHECK(quanta_delay_bound(5, 25, 60.0, 0.0) == 0.0);
  CHECK(quanta_delay_bound(5, 25, 60.0, 10.0) == doctest::Approx(28.8089516).epsilon(1e-6));
  CHECK(quanta_delay_bound(5, 25, 60.0, 10.0) > quanta_delay_bound(20, 25, 60.0, 10.0));
}

TEST_CASE("expected evaluations until the max is sampled") {
  CHECK(expected_evals_until_donor(100, 100) == 1.0);
  CHECK(expected_evals_until_donor(100, 5) == 20.0);
  CHECK(expected_evals_until_donor(2, 1) == 2.0);
}

TEST_CASE("geometric expectation matches repeated-sampling simulation") {
  Rng rng(83);
  long total = 0;
  const int trials = 100000;
  for (int t = 0; t < trials; ++t) {
    // sample 5 of 100 without replacement until index 0 is included
    int draws = 0;
    while (true) {
      ++draws;
      bool hit = false;
      std::vector<int> chosen;
      while (chosen.size() < 5) {
        const int v = rng.below(100);
        if (std::find(chosen.begin(), chosen.end(), v) == chosen.end()) {
          chosen.push_back(v);
          if (v == 0) hit = true;
        }
      }
      if (hit) break;
    }
    total += draws;
  }
  CHECK(std::abs(static_cast<double>(total) / trials - 20.0) < 0.5);
}
