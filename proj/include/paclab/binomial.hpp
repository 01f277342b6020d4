#pragma once

namespace paclab {

/// P[Bin(n,p) = k], computed through the log-gamma function.
double binomial_pmf(long long n, double p, long long k);

/// P[Bin(n,p) <= k]. Summation with the stable pmf recursion
/// pmf(j+1) = pmf(j) * (n-j)/(j+1) * p/q, accumulated from the boundary.
double binomial_cdf(long long n, double p, long long k);

/// P[Bin(n,p) >= k].
double binomial_sf(long long n, double p, long long k);

}  // namespace paclab
