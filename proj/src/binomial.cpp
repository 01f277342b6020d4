#include "paclab/binomial.hpp"

#include <cmath>
#include <stdexcept>

namespace paclab {

namespace {

void check(long long n, double p) {
  if (n < 0) throw std::invalid_argument("binomial: n must be >= 0");
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("binomial: p in [0,1]");
}

double log_pmf(long long n, double p, long long k) {
  return std::lgamma(static_cast<double>(n) + 1) -
         std::lgamma(static_cast<double>(k) + 1) -
         std::lgamma(static_cast<double>(n - k) + 1) +
         k * std::log(p) + (n - k) * std::log1p(-p);
}

}  // namespace

double binomial_pmf(long long n, double p, long long k) {
  check(n, p);
  if (k < 0 || k > n) return 0.0;
  if (p == 0.0) return k == 0 ? 1.0 : 0.0;
  if (p == 1.0) return k == n ? 1.0 : 0.0;
  return std::exp(log_pmf(n, p, k));
}

double binomial_cdf(long long n, double p, long long k) {
  check(n, p);
  if (k < 0) return 0.0;
  if (k >= n) return 1.0;
  if (p == 0.0) return 1.0;
  if (p == 1.0) return 0.0;
  const double q = 1.0 - p;
  // Accumulate whichever tail has fewer terms, smallest terms first.
  if (k <= n * p) {
    // Sum pmf(0..k) downward from k.
    double term = std::exp(log_pmf(n, p, k));
    double sum = 0.0;
    for (long long j = k; j >= 0; --j) {
      sum += term;
      if (term < sum * 1e-18) break;
      term *= (static_cast<double>(j) / (n - j + 1)) * (q / p);
    }
    return sum;
  }
  // Complement: sum pmf(k+1..n) upward from k+1.
  double term = std::exp(log_pmf(n, p, k + 1));
  double sum = 0.0;
  for (long long j = k + 1; j <= n; ++j) {
    sum += term;
    if (term < sum * 1e-18) break;
    term *= (static_cast<double>(n - j) / (j + 1)) * (p / q);
  }
  return 1.0 - sum;
}

double binomial_sf(long long n, double p, long long k) {
  check(n, p);
  if (k <= 0) return 1.0;
  if (k > n) return 0.0;
  if (p == 0.0) return 0.0;
  if (p == 1.0) return 1.0;
  const double q = 1.0 - p;
  if (k > n * p) {
    double term = std::exp(log_pmf(n, p, k));
    double sum = 0.0;
    for (long long j = k; j <= n; ++j) {
      sum += term;
      if (term < sum * 1e-18) break;
      term *= (static_cast<double>(n - j) / (j + 1)) * (p / q);
    }
    return sum;
  }
  return 1.0 - binomial_cdf(n, p, k - 1);
}

}  // namespace paclab
