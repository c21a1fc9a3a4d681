#include "revosim/prob.hpp"

#include <cmath>

namespace revosim::prob {

double Rational::to_double() const {
  if (den == 0) throw ProbError("rational with zero denominator");
  // cpp_int -> double via long-division style conversion
  return static_cast<double>(boost::multiprecision::cpp_rational(num, den));
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    throw ProbError("inverse_normal_cdf: argument must lie in (0, 1), got " + std::to_string(p));
  }

  // Acklam coefficients.
  static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                             -2.759285104469687e+02, 1.383577518672690e+02,
                             -3.066479806614716e+01, 2.506628277459239e+00};
  static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                             -1.556989798598866e+02, 6.680131188771972e+01,
                             -1.328068155288572e+01};
  static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                             -2.400758277161838e+00, -2.549732539343734e+00,
                             4.374664141464968e+00,  2.938163982698783e+00};
  static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                             2.445134137142996e+00, 3.754408661907416e+00};

  const double plow = 0.02425;
  double x;
  if (p < plow) {
    const double q = std::sqrt(-2.0 * std::log(p));
    x = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else if (p <= 1.0 - plow) {
    const double q = p - 0.5;
    const double r = q * q;
    x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  } else {
    const double q = std::sqrt(-2.0 * std::log(1.0 - p));
    x = -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  }

  // One Halley refinement against erfc.
  const double e = 0.5 * std::erfc(-x / std::sqrt(2.0)) - p;
  const double u = e * std::sqrt(2.0 * M_PI) * std::exp(x * x / 2.0);
  x = x - u / (1.0 + x * u / 2.0);
  return x;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  if (k > n - k) k = n - k;
  BigInt result = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    result *= n - i;
    result /= i + 1;
  }
  return result;
}

void HypergeomParams::validate() const {
  if (marked > total) throw ProbError("hypergeom: marked count exceeds total");
  if (draws > total) throw ProbError("hypergeom: sample size exceeds total");
}

Rational hypergeom_pmf_exact(const HypergeomParams& params, std::uint64_t k) {
  params.validate();
  const std::uint64_t N = params.total, K = params.marked, n = params.draws;
  if (k > n || k > K || n - k > N - K) return Rational{0, 1};
  return Rational{binomial(K, k) * binomial(N - K, n - k), binomial(N, n)};
}

double hypergeom_pmf(const HypergeomParams& params, std::uint64_t k) {
  params.validate();
  const std::uint64_t N = params.total, K = params.marked, n = params.draws;
  if (k > n || k > K || n - k > N - K) return 0.0;
  if (N <= 64) return hypergeom_pmf_exact(params, k).to_double();
  // log-factorial fallback for large parameters
  auto lchoose = [](std::uint64_t m, std::uint64_t j) {
    return std::lgamma(double(m) + 1.0) - std::lgamma(double(j) + 1.0) -
           std::lgamma(double(m - j) + 1.0);
  };
  return std::exp(lchoose(K, k) + lchoose(N - K, n - k) - lchoose(N, n));
}

double transfer_prob_bound(std::uint64_t population, std::uint64_t lambda,
                           std::uint64_t sample_size) {
  if (lambda < 1 || lambda > population) throw ProbError("transfer_prob_bound: rank out of range");
  if (sample_size < 1 || sample_size > population) {
    throw ProbError("transfer_prob_bound: sample size out of range");
  }
  if (lambda < sample_size) return 0.0;
  return hypergeom_pmf({population, population - lambda, sample_size}, 0);
}

double birthday_threshold(double prefix_count, std::uint64_t repetitions, double p) {
  if (prefix_count < 1.0) throw ProbError("birthday_threshold: prefix count must be >= 1");
  if (repetitions < 2) throw ProbError("birthday_threshold: repetition count must be >= 2");
  if (!(p > 0.0 && p < 1.0)) throw ProbError("birthday_threshold: probability must lie in (0, 1)");
  const double k = static_cast<double>(repetitions);
  const double log_term = std::log(1.0 / (1.0 - p));
  // [c^{k-1} k! ln(1/(1-p))]^{1/k}, evaluated in log space
  const double log_val = (k - 1.0) * std::log(prefix_count) +
                         std::lgamma(k + 1.0) + std::log(log_term);
  return std::exp(log_val / k);
}

double normal_order_stat(std::uint64_t r, std::uint64_t w) {
  if (r < 1 || r > w) throw ProbError("normal_order_stat: rank out of range");
  const double arg = (double(r) - M_PI / 8.0) / (double(w) - M_PI / 4.0 + 1.0);
  return inverse_normal_cdf(arg);
}

double quanta_delay_bound(std::uint64_t s_wait, std::uint64_t w, double /*mu*/, double sigma) {
  if (s_wait < 1 || s_wait > w) throw ProbError("quanta_delay_bound: s_wait out of range");
  if (sigma < 0.0) throw ProbError("quanta_delay_bound: sigma must be >= 0");
  if (sigma == 0.0 || s_wait == w) return 0.0;
  return sigma * std::abs(normal_order_stat(s_wait, w) - normal_order_stat(w, w));
}

double expected_evals_until_donor(std::uint64_t population, std::uint64_t sample_size) {
  if (sample_size < 1 || sample_size > population) {
    throw ProbError("expected_evals_until_donor: sample size out of range");
  }
  return static_cast<double>(population) / static_cast<double>(sample_size);
}

}  // namespace revosim::prob
