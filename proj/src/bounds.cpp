#include "paclab/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "paclab/shattering.hpp"  // refusal_error

namespace paclab {

namespace {

constexpr double kE = 2.718281828459045235360287471352662498;

long long ceil_to_ll(double v) {
  return static_cast<long long>(std::ceil(v - 1e-12));
}

}  // namespace

long long alpha_sample_size(double alpha, double delta, int vc, double c) {
  if (!(alpha > 0.0 && alpha <= 1.0))
    throw std::invalid_argument("alpha_sample_size: alpha in (0,1]");
  if (!(delta > 0.0 && delta <= 1.0))
    throw std::invalid_argument("alpha_sample_size: delta in (0,1]");
  if (vc < 1) throw std::invalid_argument("alpha_sample_size: VC >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("alpha_sample_size: c > 0");
  return ceil_to_ll(c / (alpha * alpha) * (vc + std::log(1.0 / delta)));
}

NastyUpperBound nasty_upper_bound(double gap, double delta, int vc, double c) {
  if (!(gap > 0.0)) throw std::invalid_argument("nasty_upper_bound: gap > 0");
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("nasty_upper_bound: delta in (0,1)");
  if (vc < 1) throw std::invalid_argument("nasty_upper_bound: VC >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("nasty_upper_bound: c > 0");
  NastyUpperBound b;
  b.n = ceil_to_ll(c / (gap * gap) * (vc + std::log(1.0 / delta)));
  b.hoeffding_floor = ceil_to_ll(8.0 / (gap * gap) * std::log(2.0 / delta));
  return b;
}

NastyLowerBound nasty_lower_bound(double eta, double gap, int vc) {
  if (!(eta >= 0.0)) throw std::invalid_argument("nasty_lower_bound: eta >= 0");
  if (!(gap > 0.0)) throw std::invalid_argument("nasty_lower_bound: gap > 0");
  if (vc < 1) throw std::invalid_argument("nasty_lower_bound: VC >= 1");
  return {eta / (gap * gap), static_cast<double>(vc) / gap};
}

PacBounds pac_sample_bounds(int N, int d, DistanceCase distance_case, double eps) {
  if (N < 3) throw std::invalid_argument("pac_sample_bounds: N >= 3");
  if (d < 1) throw std::invalid_argument("pac_sample_bounds: d >= 1");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("pac_sample_bounds: eps in (0,1)");
  const double n2 = static_cast<double>(N) * N;
  const double nd = static_cast<double>(N) * d;
  PacBounds b{};
  switch (distance_case) {
    case DistanceCase::Arbitrary:
      b.lower_leading = n2;
      b.upper_leading = n2;
      break;
    case DistanceCase::EvenP:
      b.lower_leading = std::min(nd, n2);
      b.upper_leading = std::min(nd, n2);
      break;
    case DistanceCase::OddP:
      b.lower_leading = std::min(nd, n2);
      b.upper_leading = std::min(nd * std::log2(static_cast<double>(N)), n2);
      break;
    case DistanceCase::ConstantD:
      b.lower_leading = std::min(nd, n2);
      b.upper_leading = N;
      break;
  }
  b.lower_value = b.lower_leading / eps;
  b.upper_value = b.upper_leading / eps;
  return b;
}

NatarajanBounds natarajan_sample_bounds(int ndim, double log_s, double eps) {
  if (ndim < 1) throw std::invalid_argument("natarajan_sample_bounds: ndim >= 1");
  if (!(log_s > 0.0))
    throw std::invalid_argument("natarajan_sample_bounds: log_s > 0");
  if (!(eps > 0.0 && eps < 1.0))
    throw std::invalid_argument("natarajan_sample_bounds: eps in (0,1)");
  return {ndim * log_s / eps, ndim / eps};
}

double milnor_component_log2(long long m, long long ell, long long k) {
  if (!(m >= ell && ell >= 2))
    throw std::invalid_argument("milnor_component_bound: need m >= l >= 2");
  if (k < 1) throw std::invalid_argument("milnor_component_bound: degree >= 1");
  return static_cast<double>(ell) *
         std::log2(4.0 * kE * static_cast<double>(k) * static_cast<double>(m) /
                   static_cast<double>(ell));
}

double milnor_component_bound(long long m, long long ell, long long k) {
  return std::exp2(milnor_component_log2(m, ell, k));
}

namespace {

/// log2 of the sign-pattern cap at sample size n for each variant.
double pattern_log2(long long n, int N, int d, double p, UnshatterVariant v) {
  const double nd = static_cast<double>(N) * d;
  double degree_factor = p;
  if (v == UnshatterVariant::ConstantD) degree_factor = p * std::exp2(2.0 * d);
  double lg = nd * std::log2(4.0 * kE * degree_factor * static_cast<double>(n) / nd);
  if (v == UnshatterVariant::OddP) lg += nd * std::log2(static_cast<double>(N));
  return lg;
}

}  // namespace

UnshatterResult min_unshatterable_size(int N, int d, double p,
                                       UnshatterVariant variant, long long cap) {
  if (N < 2 || d < 1) throw std::invalid_argument("min_unshatterable_size: N >= 2, d >= 1");
  if (variant != UnshatterVariant::ConstantD && d >= N)
    throw std::invalid_argument("min_unshatterable_size: need d < N for this variant");
  if (!(p >= 1.0)) throw std::invalid_argument("min_unshatterable_size: p >= 1");
  const auto margin = [&](long long n) {
    return static_cast<double>(n) - pattern_log2(n, N, d, p, variant);
  };
  // n - Nd*log2(c*n) dips at n = Nd/ln2 and increases afterwards, and the
  // margin at the dip is negative for p >= 1, so the crossing past the dip is
  // unique. Bracket it by doubling, then bisect.
  const double nd = static_cast<double>(N) * d;
  long long lo = std::max<long long>(1, static_cast<long long>(nd / std::log(2.0)));
  if (margin(lo) > 0.0)
    throw std::invalid_argument("min_unshatterable_size: no crossing past the dip");
  long long hi = lo;
  while (margin(hi) <= 0.0) {
    if (hi > cap / 2)
      throw refusal_error("min_unshatterable_size: search cap " +
                          std::to_string(cap) + " exceeded");
    hi *= 2;
  }
  while (hi - lo > 1) {
    const long long mid = lo + (hi - lo) / 2;
    (margin(mid) <= 0.0 ? lo : hi) = mid;
  }
  UnshatterResult r;
  r.n_star = hi;
  r.margin_at = margin(hi);
  r.margin_before = margin(hi - 1);
  if (!(r.margin_at > 0.0) || !(r.margin_before <= 0.0))
    throw std::logic_error("min_unshatterable_size: crossing certificate failed");
  return r;
}

}  // namespace paclab
