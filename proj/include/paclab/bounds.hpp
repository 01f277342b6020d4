#pragma once

#include <cstdint>

namespace paclab {

/// ceil((c/alpha^2) * (VC + ln(1/delta))): sample size at which an i.i.d.
/// draw is an alpha-sample for a VC class with probability 1-delta. delta may
/// be 1 (the degenerate boundary, where the log term vanishes).
long long alpha_sample_size(double alpha, double delta, int vc, double c);

struct NastyUpperBound {
  long long n;               // ceil((c/gap^2)(VC + ln(1/delta)))
  long long hoeffding_floor; // ceil((8/gap^2) ln(2/delta))
};

/// Sample size sufficient to learn to accuracy 2*eta+gap under nasty noise,
/// plus the concentration-driven floor from the same argument.
NastyUpperBound nasty_upper_bound(double gap, double delta, int vc, double c);

struct NastyLowerBound {
  double eta_term;  // eta / gap^2
  double vc_term;   // VC / gap
};

NastyLowerBound nasty_lower_bound(double eta, double gap, int vc);

/// Distance-model case for the PAC sample-size leading terms.
enum class DistanceCase { Arbitrary, EvenP, OddP, ConstantD };

struct PacBounds {
  double lower_leading;  // VC lower bound leading term
  double upper_leading;  // VC upper bound leading term
  double lower_value;    // leading / eps
  double upper_value;
};

/// Leading terms of the classical-PAC sample bounds per case: arbitrary
/// distances N^2 both ways; even p min(Nd,N^2); odd p min(Nd log2 N, N^2)
/// upper with min(Nd,N^2) lower; constant d upper N. Polylog factors are
/// reported as 1.
PacBounds pac_sample_bounds(int N, int d, DistanceCase distance_case, double eps);

struct NatarajanBounds {
  double upper_value;  // ndim * log_s / eps
  double lower_value;  // ndim / eps
};

/// Multi-class sample-size leading terms. The log term of the upper bound is
/// ambiguous in its source (label-set size vs sample size), so it is exposed
/// as the opaque parameter log_s.
NatarajanBounds natarajan_sample_bounds(int ndim, double log_s, double eps);

/// (4*e*k*m/l)^l: cap on the connected components of the nonzero set of m
/// degree-k polynomials in l variables. Computed in log space; the direct
/// value may overflow to inf.
double milnor_component_bound(long long m, long long ell, long long k);
double milnor_component_log2(long long m, long long ell, long long k);

enum class UnshatterVariant { EvenP, OddP, ConstantD };

struct UnshatterResult {
  long long n_star;
  /// log2(2^n) - log2(rhs) at n_star and at n_star-1; the first is positive,
  /// the second nonpositive by construction.
  double margin_at, margin_before;
};

/// Least n (beyond the dip of n - Nd*log2(...)) where 2^n exceeds the sign
/// pattern count: (4epn/(Nd))^{Nd} for even p, times N^{Nd} for odd p, or
/// with p replaced by p*2^{2d} for constant d. Refuses past the search cap.
UnshatterResult min_unshatterable_size(int N, int d, double p,
                                       UnshatterVariant variant,
                                       long long cap = 2'000'000'000LL);

}  // namespace paclab
