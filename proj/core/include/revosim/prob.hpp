#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace revosim::prob {

using BigInt = boost::multiprecision::cpp_int;

struct Rational {
  BigInt num;
  BigInt den;
  bool operator==(const Rational& o) const { return num * o.den == o.num * den; }
  double to_double() const;
};

struct ProbError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Inverse standard-normal CDF. Acklam's rational approximation refined with
/// one Halley step; absolute error well below 1e-9 on (1e-12, 1-1e-12).
double inverse_normal_cdf(double p);

double normal_cdf(double x);

BigInt binomial(std::uint64_t n, std::uint64_t k);

struct HypergeomParams {
  std::uint64_t total;   // N
  std::uint64_t marked;  // K
  std::uint64_t draws;   // n
  void validate() const;
};

/// P(X = k) for X ~ H(N, K, n). Exact rational arithmetic; 0 outside support.
Rational hypergeom_pmf_exact(const HypergeomParams& params, std::uint64_t k);
double hypergeom_pmf(const HypergeomParams& params, std::uint64_t k);

/// Upper bound on the probability that the rank-lambda population member
/// (lambda = 1 worst, lambda = P best) donates at a given step:
/// p(X=0 | X ~ H(P, P-lambda, s)) = C(lambda, s) / C(P, s), 0 when lambda < s.
double transfer_prob_bound(std::uint64_t population, std::uint64_t lambda,
                           std::uint64_t sample_size);

/// Generalized birthday bound: sample size at which some prefix out of c
/// appears at least k times with probability p.
double birthday_threshold(double prefix_count, std::uint64_t repetitions, double p);

/// Blom-style expected value of the r-th of w standard normal order statistics:
/// Phi^-1((r - pi/8) / (w - pi/4 + 1)).
double normal_order_stat(std::uint64_t r, std::uint64_t w);

/// Mean extra wait from batching dispatch into groups of s_wait out of w
/// workers, scaled to a duration distribution with the given sigma.
/// Magnitude of E(s,w) - E(w,w); the expression is negative as written for
/// s_wait < w, so the absolute value is returned.
double quanta_delay_bound(std::uint64_t s_wait, std::uint64_t w, double mu, double sigma);

/// Expected evaluations until a fixed population member (the current maximum)
/// is included in a size-s sample: geometric mean P/s.
double expected_evals_until_donor(std::uint64_t population, std::uint64_t sample_size);

}  // namespace revosim::prob
