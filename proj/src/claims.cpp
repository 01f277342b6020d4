#include "paclab/claims.hpp"

#include <cmath>
#include <set>
#include <stdexcept>

#include "paclab/binomial.hpp"
#include "paclab/rng.hpp"
#include "paclab/shattering.hpp"  // refusal_error

namespace paclab {

namespace {

double mc_std_error(double estimate, long long trials) {
  return std::sqrt(std::max(estimate * (1.0 - estimate), 1e-12) / trials);
}

/// Fraction of trials whose per-trial predicate holds. Trial t draws from
/// substream t of the seed, so the count is independent of the execution
/// policy and thread count.
template <typename Predicate>
double mc_fraction(long long trials, std::uint64_t seed, Exec exec,
                   Predicate&& predicate) {
  long long hits = 0;
  const bool par = exec == Exec::OpenMP;
#pragma omp parallel for schedule(static) reduction(+ : hits) if (par)
  for (long long t = 0; t < trials; ++t) {
    CounterRng rng(seed, t);
    hits += predicate(rng) ? 1 : 0;
  }
  return static_cast<double>(hits) / trials;
}

}  // namespace

std::vector<ClaimCheckReport> verify_binomial_central_tails(
    long long N, double p, long long trials, std::uint64_t seed, Exec exec) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("verify_binomial_central_tails: p in (0,1)");
  const double q = 1.0 - p;
  if (!(static_cast<double>(N) > 37.0 / (p * q)))
    throw refusal_error("verify_binomial_central_tails: requires N > 37/(pq)");
  if (trials < 1) throw std::invalid_argument("trials >= 1");

  const double spread = std::sqrt(N * p * q - 1.0);
  const long long up_thr =
      static_cast<long long>(std::floor(N * p)) + static_cast<long long>(std::floor(spread));
  const long long lo_thr =
      static_cast<long long>(std::ceil(N * p)) - static_cast<long long>(std::ceil(spread));
  const double bound = 1.0 / 19.0;

  long long up_hits = 0, lo_hits = 0;
  const bool par = exec == Exec::OpenMP;
#pragma omp parallel for schedule(static) reduction(+ : up_hits, lo_hits) if (par)
  for (long long t = 0; t < trials; ++t) {
    CounterRng rng(seed, t);
    const long long s = rng.binomial(N, p);
    up_hits += s >= up_thr ? 1 : 0;
    lo_hits += s <= lo_thr ? 1 : 0;
  }

  std::vector<ClaimCheckReport> reports(2);
  reports[0].claim_id = "binomial-central-tails/upper";
  reports[0].estimate = static_cast<double>(up_hits) / trials;
  reports[0].exact = binomial_sf(N, p, up_thr);
  reports[1].claim_id = "binomial-central-tails/lower";
  reports[1].estimate = static_cast<double>(lo_hits) / trials;
  reports[1].exact = binomial_cdf(N, p, lo_thr);
  for (auto& r : reports) {
    r.claimed_bound = bound;
    r.trials = trials;
    r.std_error = mc_std_error(r.estimate, trials);
    // Exact path decides; the MC estimate must stay consistent with it.
    r.pass = r.exact > bound && r.estimate > bound - 3.0 * r.std_error;
  }
  return reports;
}

double BoundedDistribution::mean() const {
  switch (kind) {
    case Kind::Binomial:
      return range * p;
    case Kind::PointMass:
      return point;
    case Kind::TwoPointEnds:
      return range * p;
  }
  return 0.0;
}

double BoundedDistribution::draw(CounterRng& rng) const {
  switch (kind) {
    case Kind::Binomial:
      return static_cast<double>(rng.binomial(range, p));
    case Kind::PointMass:
      return point;
    case Kind::TwoPointEnds:
      return rng.bernoulli(p) ? static_cast<double>(range) : 0.0;
  }
  return 0.0;
}

double BoundedDistribution::exact_tail(double threshold) const {
  switch (kind) {
    case Kind::Binomial:
      return binomial_sf(range, p,
                         static_cast<long long>(std::ceil(threshold - 1e-12)));
    case Kind::PointMass:
      return point >= threshold ? 1.0 : 0.0;
    case Kind::TwoPointEnds:
      if (threshold <= 0.0) return 1.0;
      return threshold <= range ? p : 0.0;
  }
  return -1.0;
}

ClaimCheckReport verify_mean_tail_bound(double alpha, double beta,
                                        const BoundedDistribution& dist,
                                        long long trials, std::uint64_t seed,
                                        Exec exec) {
  if (!(beta > 0.0 && beta < alpha && alpha <= 1.0))
    throw std::invalid_argument("verify_mean_tail_bound: need 0 < beta < alpha <= 1");
  if (dist.range < 1) throw std::invalid_argument("verify_mean_tail_bound: range >= 1");
  const double n = static_cast<double>(dist.range);
  if (std::fabs(dist.mean() - alpha * n) > 1e-6 * n)
    throw refusal_error("verify_mean_tail_bound: distribution mean is not alpha*N");

  const double threshold = beta * n;
  ClaimCheckReport report;
  report.claim_id = "mean-tail-bound";
  report.claimed_bound = (alpha - beta) / (1.0 - beta);
  report.trials = trials;
  report.estimate = mc_fraction(trials, seed, exec, [&](CounterRng& rng) {
    return dist.draw(rng) >= threshold;
  });
  report.std_error = mc_std_error(report.estimate, trials);
  report.exact = dist.exact_tail(threshold);
  if (report.exact >= 0.0)
    report.pass = report.exact > report.claimed_bound &&
                  report.estimate > report.claimed_bound - 3.0 * report.std_error;
  else
    report.pass = report.estimate > report.claimed_bound - 3.0 * report.std_error;
  return report;
}

ClaimCheckReport verify_budget_concentration(long long n, double eta, double gap,
                                             long long trials, std::uint64_t seed,
                                             Exec exec) {
  if (n < 1) throw std::invalid_argument("verify_budget_concentration: n >= 1");
  if (eta < 0.0 || eta > 1.0 || !(gap > 0.0))
    throw std::invalid_argument("verify_budget_concentration: eta in [0,1], gap > 0");
  const double threshold = (eta + gap / 4.0) * n;
  const double bound = std::exp(-n * gap * gap / 8.0);

  ClaimCheckReport report;
  report.claim_id = "budget-concentration";
  report.claimed_bound = bound;
  report.trials = trials;
  report.estimate = mc_fraction(trials, seed, exec, [&](CounterRng& rng) {
    return static_cast<double>(rng.binomial(n, eta)) > threshold;
  });
  report.std_error = mc_std_error(report.estimate, trials);
  report.exact = threshold >= n
                     ? 0.0
                     : binomial_sf(n, eta,
                                   static_cast<long long>(std::floor(threshold)) + 1);
  report.pass = report.exact <= bound &&
                report.estimate <= bound + 3.0 * report.std_error;
  return report;
}

SignCellReport sign_cell_disjointness(int N, int d, int p_even,
                                      std::span<const TripletQuery> queries,
                                      long long samples, std::uint64_t seed) {
  if (p_even < 2 || p_even % 2 != 0)
    throw std::invalid_argument("sign_cell_disjointness: p must be a positive even integer");
  for (const auto& q : queries) check_query(N, q);

  SignCellReport report;
  report.samples = samples;
  std::set<std::vector<int>> patterns;
  for (long long s = 0; s < samples; ++s) {
    // Resample (fresh substream) until no polynomial value is exactly zero;
    // zero sets have measure zero, so this terminates immediately in practice.
    std::vector<int> pattern;
    for (std::uint64_t attempt = 0;; ++attempt) {
      CounterRng rng(seed, static_cast<std::uint64_t>(s) * 1000 + attempt);
      std::vector<double> coords(static_cast<std::size_t>(N) * d);
      for (auto& c : coords) c = rng.uniform(-1.0, 1.0);
      const Embedding e(N, d, static_cast<double>(p_even), coords);
      pattern.clear();
      bool zero = false;
      for (const auto& q : queries) {
        // Route one: the comparison polynomial in the raw coordinates.
        double poly = 0.0;
        for (int t = 0; t < d; ++t) {
          const double dy = coords[static_cast<std::size_t>(q.anchor) * d + t] -
                            coords[static_cast<std::size_t>(q.first) * d + t];
          const double dz = coords[static_cast<std::size_t>(q.anchor) * d + t] -
                            coords[static_cast<std::size_t>(q.second) * d + t];
          double py = 1.0, pz = 1.0;
          for (int e2 = 0; e2 < p_even; ++e2) {
            py *= dy;
            pz *= dz;
          }
          poly += py - pz;
        }
        if (poly == 0.0) {
          zero = true;
          break;
        }
        // Route two: the hypothesis evaluation on the embedding object.
        const Evaluation eval = evaluate_embedding_hypothesis(e, q);
        const int poly_sign = poly < 0.0 ? -1 : 1;
        if (eval.tie || poly_sign != sign_of(eval.label)) ++report.mismatches;
        pattern.push_back(poly_sign);
      }
      if (!zero) break;
      ++report.resampled;
      if (attempt > 100)
        throw std::runtime_error("sign_cell_disjointness: cannot escape a zero set");
    }
    patterns.insert(pattern);
  }
  report.distinct_patterns = static_cast<long long>(patterns.size());
  report.pass = report.mismatches == 0;
  return report;
}

}  // namespace paclab
