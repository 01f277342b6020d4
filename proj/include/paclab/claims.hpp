#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "paclab/exec.hpp"
#include "paclab/triplet.hpp"

namespace paclab {

/// Outcome of one Monte Carlo / exact-CDF verification. The verdict uses the
/// exact path when the law is binomial; otherwise the MC estimate must clear
/// the claimed bound by 3 standard errors in the claimed direction.
struct ClaimCheckReport {
  std::string claim_id;
  double estimate = 0.0;      // MC estimate
  double exact = -1.0;        // exact value when available, else -1
  double claimed_bound = 0.0;
  long long trials = 0;
  double std_error = 0.0;
  bool pass = false;
  std::string note;
};

/// Central-tail claim: for S ~ Bin(N,p) with N > 37/(pq), both
/// P[S >= floor(Np) + floor(sqrt(Npq-1))] and
/// P[S <= ceil(Np) - ceil(sqrt(Npq-1))] exceed 1/19.
/// Returns the upper- and lower-tail reports. Refuses when N <= 37/(pq).
std::vector<ClaimCheckReport> verify_binomial_central_tails(
    long long N, double p, long long trials, std::uint64_t seed,
    Exec exec = Exec::OpenMP);

/// Distribution on [0, range] handed to the mean-tail verifier.
struct BoundedDistribution {
  enum class Kind { Binomial, PointMass, TwoPointEnds };
  Kind kind = Kind::Binomial;
  long long range = 0;   // the upper end N
  double p = 0.0;        // Binomial success prob / TwoPointEnds mass at N
  double point = 0.0;    // PointMass location

  double mean() const;
  double draw(class CounterRng& rng) const;
  /// Exact P[S >= threshold] where the law permits, else -1.
  double exact_tail(double threshold) const;
};

/// Mean-tail claim: for S in [0,N] with E[S] = alpha*N and 0 < beta < alpha
/// <= 1, P[S >= beta*N] > (alpha-beta)/(1-beta). Refuses if the supplied
/// distribution's mean is not alpha*N to within 1e-6 relative to N.
ClaimCheckReport verify_mean_tail_bound(double alpha, double beta,
                                        const BoundedDistribution& dist,
                                        long long trials, std::uint64_t seed,
                                        Exec exec = Exec::OpenMP);

/// Budget concentration: P[Bin(n,eta) > (eta + gap/4) n] <= exp(-n gap^2 / 8),
/// estimated by MC and cross-checked by the exact binomial tail.
ClaimCheckReport verify_budget_concentration(long long n, double eta, double gap,
                                             long long trials, std::uint64_t seed,
                                             Exec exec = Exec::OpenMP);

struct SignCellReport {
  long long samples = 0;
  long long resampled = 0;   // draws that hit a zero polynomial value
  long long mismatches = 0;  // polynomial sign vs hypothesis sign disagreements
  long long distinct_patterns = 0;
  bool pass = false;
};

/// Sign-cell disjointness probe for the even-p polynomial encoding: every
/// sampled embedding vector induces exactly one sign pattern, computed twice
/// (directly from the comparison polynomials and through the hypothesis
/// evaluation); the two routes must agree on every sample.
SignCellReport sign_cell_disjointness(int N, int d, int p_even,
                                      std::span<const TripletQuery> queries,
                                      long long samples, std::uint64_t seed);

}  // namespace paclab
