#include "paclab/adversary.hpp"

#include <ostream>
#include <stdexcept>

namespace paclab {

namespace {

/// Synthetic triplets for abstract queries: query q -> (3q, 3q+1, 3q+2).
std::vector<TripletQuery> synthetic_universe(int n_queries) {
  std::vector<TripletQuery> universe;
  universe.reserve(n_queries);
  for (int q = 0; q < n_queries; ++q)
    universe.push_back({3 * q, 3 * q + 1, 3 * q + 2});
  return universe;
}

}  // namespace

int SampleSet::corrupted_count() const {
  int c = 0;
  for (const auto& s : draws) c += s.corrupted ? 1 : 0;
  return c;
}

void SampleSet::write_csv(std::ostream& os, bool with_corrupted) const {
  os << "query_id,anchor,first,second,label";
  if (with_corrupted) os << ",corrupted";
  os << "\n";
  for (const auto& s : draws) {
    const auto& t = universe[s.query];
    os << s.query << ',' << t.anchor << ',' << t.first << ',' << t.second << ','
       << sign_of(s.label);
    if (with_corrupted) os << ',' << (s.corrupted ? 1 : 0);
    os << "\n";
  }
}

long long sample_budget(long long n, double eta, CounterRng& rng) {
  if (eta < 0.0 || eta > 1.0)
    throw std::invalid_argument("sample_budget: eta must lie in [0,1]");
  return rng.binomial(n, eta);
}

namespace {

/// Common two-point draw loop. Draw i uses its own (seed, i) substream: one
/// uniform picks the query, one the flip coin, so generation parallelizes and
/// replays per draw.
SampleSet two_point_draws(double s2_mass, double flip_prob, int n,
                          std::uint64_t seed, TwoPointTarget target) {
  TwoPointDistribution dist;
  dist.mass1 = 1.0 - s2_mass;
  dist.mass2 = s2_mass;
  dist.target = target;
  SampleSet set;
  set.universe = synthetic_universe(2);
  set.draws.resize(n);
  for (int i = 0; i < n; ++i) {
    CounterRng rng(seed, i);
    const int query = rng.next_unit() < s2_mass ? 1 : 0;
    Label label = dist.target_label(query);
    bool corrupted = false;
    if (query == 1) {
      // The flip coin is consumed for every s2 draw so that paired runs under
      // the two targets share identical randomness.
      const bool flip_coin = rng.bernoulli(flip_prob);
      if (flip_coin) {
        label = flip(label);
        corrupted = true;
      }
    }
    set.draws[i] = {query, label, corrupted};
  }
  return set;
}

}  // namespace

SampleSet indistinguishable_adversary(const AdversaryConfig& config,
                                      TwoPointTarget target) {
  if (config.eta < 0.0 || config.eta >= 0.5)
    throw std::invalid_argument(
        "indistinguishable_adversary: requires 0 <= eta < 1/2");
  if (config.n < 0) throw std::invalid_argument("indistinguishable_adversary: n >= 0");
  return two_point_draws(2.0 * config.eta, 0.5, config.n, config.seed, target);
}

SampleSet gap_adversary(const AdversaryConfig& config, TwoPointTarget target) {
  const double eps = 2.0 * config.eta + config.gap;
  if (!(config.gap > 0.0)) throw std::invalid_argument("gap_adversary: gap must be > 0");
  if (config.eta < 0.0 || eps > 1.0)
    throw std::invalid_argument("gap_adversary: requires eta >= 0 and 2*eta+gap <= 1");
  if (config.n < 0) throw std::invalid_argument("gap_adversary: n >= 0");
  return two_point_draws(eps, config.eta / eps, config.n, config.seed, target);
}

VcAdversaryDistribution VcAdversaryDistribution::make(int d, double eta,
                                                      double gap) {
  if (d < 3) throw std::invalid_argument("VcAdversaryDistribution: requires d >= 3");
  if (eta < 0.0 || !(gap > 0.0) || 2.0 * eta + 8.0 * gap > 1.0)
    throw std::invalid_argument(
        "VcAdversaryDistribution: requires eta >= 0, gap > 0, 2*eta+8*gap <= 1");
  VcAdversaryDistribution dist;
  dist.d = d;
  dist.eta = eta;
  dist.gap = gap;
  dist.masses.assign(d, 8.0 * gap / (d - 2));
  dist.masses.front() = 1.0 - 2.0 * eta - 8.0 * gap;
  dist.masses.back() = 2.0 * eta;
  return dist;
}

VcAdversaryDraw vc_adversary(int d, double eta, double gap, int n,
                             std::uint64_t seed) {
  const auto dist = VcAdversaryDistribution::make(d, eta, gap);
  std::vector<double> cumulative(d);
  double acc = 0.0;
  for (int q = 0; q < d; ++q) cumulative[q] = (acc += dist.masses[q]);
  cumulative.back() = 1.0;

  // Target picked uniformly from all 2^d labelings (stream n, past all draws).
  std::vector<Label> target_labels(d);
  {
    CounterRng rng(seed, n);
    for (int q = 0; q < d; ++q)
      target_labels[q] = rng.bernoulli(0.5) ? Label::CloserSecond : Label::CloserFirst;
  }

  SampleSet set;
  set.universe = synthetic_universe(d);
  set.draws.resize(n);
  for (int i = 0; i < n; ++i) {
    CounterRng rng(seed, i);
    const double u = rng.next_unit();
    int query = 0;
    while (cumulative[query] <= u) ++query;
    Label label = target_labels[query];
    bool corrupted = false;
    if (query == d - 1 && rng.bernoulli(0.5)) {
      label = flip(label);
      corrupted = true;
    }
    set.draws[i] = {query, label, corrupted};
  }
  return {std::move(set), SealedTarget(std::move(target_labels))};
}

}  // namespace paclab
