#include "paclab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>

#include "paclab/adversary.hpp"
#include "paclab/learners.hpp"
#include "paclab/rng.hpp"
#include "paclab/triplet.hpp"

namespace paclab {

namespace {

double mc_se(double p, long long trials) {
  return std::sqrt(std::max(p * (1.0 - p), 1e-12) / trials);
}

std::vector<TripletQuery> synthetic_queries(int d) {
  std::vector<TripletQuery> qs;
  for (int q = 0; q < d; ++q) qs.push_back({3 * q, 3 * q + 1, 3 * q + 2});
  return qs;
}

}  // namespace

long long erm_sample_size(double c, double gap, double delta, int d) {
  if (!(c > 0.0 && gap > 0.0 && delta > 0.0 && delta < 1.0 && d >= 1))
    throw parameter_gate_error("erm_sample_size: bad parameters");
  return static_cast<long long>(
      std::ceil(c / (gap * gap) * (d + std::log(2.0 / delta)) - 1e-12));
}

namespace {

struct ErmTrialOutcome {
  bool success = false;
  bool doubling_violation = false;
};

ErmTrialOutcome run_erm_trial(const ErmCurveParams& params,
                              const FiniteHypothesisClass& cls,
                              const std::vector<double>& masses, long long n,
                              std::uint64_t trial_seed) {
  const int d = params.d;
  std::vector<double> cumulative(d);
  double acc = 0.0;
  for (int q = 0; q < d; ++q) cumulative[q] = (acc += masses[q]);
  cumulative.back() = 1.0;

  CounterRng rng(trial_seed, 0);
  std::vector<Label> target(d);
  for (auto& l : target)
    l = rng.bernoulli(0.5) ? Label::CloserSecond : Label::CloserFirst;

  SampleSet sample;
  sample.universe = synthetic_queries(d);
  sample.draws.resize(n);
  std::vector<Label> clean(n);
  for (long long i = 0; i < n; ++i) {
    const double u = rng.next_unit();
    int q = 0;
    while (cumulative[q] <= u) ++q;
    clean[i] = target[q];
    sample.draws[i] = {q, target[q], false};
  }

  // The adversary modifies m ~ Bin(n, eta) samples by flipping labels.
  const long long budget = rng.binomial(n, params.eta);
  long long flipped = 0;
  if (budget > 0) {
    if (params.adversary == ErmAdversary::FlipRandom) {
      // Partial Fisher-Yates over the draw indices.
      std::vector<long long> order(n);
      std::iota(order.begin(), order.end(), 0);
      for (long long i = 0; i < budget && i < n; ++i) {
        const long long j = i + rng.below(static_cast<std::uint32_t>(n - i));
        std::swap(order[i], order[j]);
        auto& s = sample.draws[order[i]];
        s.label = flip(s.label);
        s.corrupted = true;
        ++flipped;
      }
    } else {
      // Concentrate the budget: flip the highest-mass query whose majority
      // the budget can overturn, spilling leftovers by descending mass.
      std::vector<long long> count(d, 0);
      for (const auto& s : sample.draws) ++count[s.query];
      std::vector<int> by_mass(d);
      std::iota(by_mass.begin(), by_mass.end(), 0);
      std::stable_sort(by_mass.begin(), by_mass.end(), [&](int a, int b) {
        return masses[a] > masses[b];
      });
      int chosen = -1;
      for (int q : by_mass)
        if (count[q] > 0 && budget >= count[q] / 2 + 1) {
          chosen = q;
          break;
        }
      std::vector<int> plan;
      if (chosen >= 0) plan.push_back(chosen);
      for (int q : by_mass)
        if (q != chosen) plan.push_back(q);
      long long left = budget;
      for (int q : plan) {
        if (left == 0) break;
        for (long long i = 0; i < n && left > 0; ++i) {
          auto& s = sample.draws[i];
          if (s.query != q || s.corrupted) continue;
          s.label = flip(s.label);
          s.corrupted = true;
          --left;
          ++flipped;
        }
      }
    }
  }

  const LearnerOutput out = erm(cls, sample, Exec::Serial);
  const auto& row = cls.row(out.hypothesis);
  double err = 0.0;
  for (int q = 0; q < d; ++q)
    if (row[q] != target[q]) err += masses[q];
  const double eps = 2.0 * params.eta + params.gap;

  ErmTrialOutcome outcome;
  outcome.success = err <= eps;

  // Recount: mistakes against the corrupted sample vs against the clean
  // labels; they can differ by at most the modified count.
  const double thr = (params.eta + params.gap / 4.0) * static_cast<double>(n);
  long long clean_mistakes = 0;
  for (long long i = 0; i < n; ++i)
    if (row[sample.draws[i].query] != clean[i]) ++clean_mistakes;
  if (out.disagreements <= thr && flipped <= thr)
    outcome.doubling_violation = clean_mistakes > 2.0 * thr;
  return outcome;
}

std::vector<double> erm_masses(const ErmCurveParams& params) {
  if (params.d < 1) throw parameter_gate_error("erm curve: d >= 1");
  if (params.dist == ErmDistribution::Uniform)
    return std::vector<double>(params.d, 1.0 / params.d);
  const auto dist = VcAdversaryDistribution::make(params.d, params.eta, params.gap);
  return dist.masses;
}

}  // namespace

std::vector<ErmCurvePoint> run_erm_curve(const ErmCurveParams& params,
                                         std::ostream* csv, Exec exec) {
  if (!(params.eta >= 0.0 && params.eta < 0.5))
    throw parameter_gate_error("erm curve: eta in [0, 1/2)");
  if (!(params.gap > 0.0 && 2.0 * params.eta + params.gap <= 1.0))
    throw parameter_gate_error("erm curve: need gap > 0 and 2*eta+gap <= 1");
  if (!(params.delta > 0.0 && params.delta < 1.0))
    throw parameter_gate_error("erm curve: delta in (0,1)");
  if (params.trials < 1 || params.n_grid.empty())
    throw parameter_gate_error("erm curve: need trials and an n grid");
  const auto masses = erm_masses(params);
  const FiniteHypothesisClass cls = FiniteHypothesisClass::power_set(params.d);

  if (csv) *csv << "experiment,n,trials,successes,fraction,doubling_violations,seed\n";
  std::vector<ErmCurvePoint> curve;
  const bool par = exec == Exec::OpenMP;
  for (std::size_t gi = 0; gi < params.n_grid.size(); ++gi) {
    const long long n = params.n_grid[gi];
    if (n < 1 || n > 10'000'000)
      throw parameter_gate_error("erm curve: grid n must be in [1, 1e7]");
    long long successes = 0, violations = 0;
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : successes, violations) if (par)
    for (long long t = 0; t < params.trials; ++t) {
      const auto outcome = run_erm_trial(
          params, cls, masses, n,
          substream(params.seed, gi * 1000003ULL + static_cast<std::uint64_t>(t)));
      successes += outcome.success ? 1 : 0;
      violations += outcome.doubling_violation ? 1 : 0;
    }
    ErmCurvePoint point;
    point.n = n;
    point.trials = params.trials;
    point.successes = successes;
    point.fraction = static_cast<double>(successes) / params.trials;
    point.doubling_violations = violations;
    curve.push_back(point);
    if (csv)
      *csv << "erm-curve," << n << ',' << params.trials << ',' << successes << ','
           << format_double(point.fraction) << ',' << violations << ','
           << params.seed << "\n";
  }
  return curve;
}

std::optional<double> calibrate_erm_constant(const ErmCurveParams& base,
                                             std::span<const double> c_grid,
                                             Exec exec) {
  std::vector<double> grid(c_grid.begin(), c_grid.end());
  std::sort(grid.begin(), grid.end());
  for (double c : grid) {
    ErmCurveParams p = base;
    p.n_grid = {erm_sample_size(c, base.gap, base.delta, base.d)};
    const auto curve = run_erm_curve(p, nullptr, exec);
    if (curve.front().fraction >= 1.0 - base.delta) return c;
  }
  return std::nullopt;
}

BayesLowerBoundSummary run_bayes_lower_bound(const BayesLowerBoundParams& params,
                                             std::ostream* csv, Exec exec) {
  if (!(params.eta > 0.0 && params.eta < 0.5))
    throw parameter_gate_error("bayes-lb: eta in (0, 1/2)");
  if (!(params.gap > 0.0 && params.gap < params.eta / 12.0))
    throw parameter_gate_error("bayes-lb: requires 0 < gap < eta/12");
  if (!(params.delta > 0.0 && params.delta < 1.0 / 342.0))
    throw parameter_gate_error("bayes-lb: requires delta < 1/342");
  if (params.trials < 1 || params.n_scale < 1)
    throw parameter_gate_error("bayes-lb: trials and n_scale >= 1");

  BayesLowerBoundSummary summary;
  summary.threshold =
      17.0 * params.eta * (1.0 - params.eta) / (37.0 * params.gap * params.gap);
  const long long n_base =
      std::max<long long>(1, static_cast<long long>(std::ceil(summary.threshold)) - 1);
  summary.n = n_base * params.n_scale;
  summary.trials = params.trials;
  const double regime_cap = 36.0 * params.eta * (params.eta + params.gap) /
                            (37.0 * params.gap * params.gap);

  std::vector<char> wrong(params.trials), bad1(params.trials), in_regime(params.trials);
  std::vector<long long> s2_count(params.trials), corrupt_count(params.trials);
  const bool par = exec == Exec::OpenMP;
#pragma omp parallel for schedule(dynamic, 16) if (par)
  for (long long t = 0; t < params.trials; ++t) {
    AdversaryConfig config;
    config.eta = params.eta;
    config.gap = params.gap;
    config.n = static_cast<int>(summary.n);
    config.seed = substream(params.seed, t);
    config.strategy = AdversaryStrategy::Gap;
    const SampleSet sample = gap_adversary(config, TwoPointTarget::H1);
    long long M = 0, m = 0;
    for (const auto& s : sample.draws) {
      if (s.query != 1) continue;
      ++M;
      m += s.corrupted ? 1 : 0;
    }
    const bool majority_corrupt = m >= (M + 1) / 2 + 1;
    wrong[t] = bayes_majority(sample) != TwoPointTarget::H1;
    bad1[t] = majority_corrupt;
    in_regime[t] = majority_corrupt && static_cast<double>(M) <= regime_cap;
    s2_count[t] = M;
    corrupt_count[t] = m;
  }

  long long n_wrong = 0, n_bad1 = 0, n_regime = 0;
  if (csv) *csv << "trial,seed,n,s2_draws,corrupted,wrong,majority_corrupt,in_regime\n";
  for (long long t = 0; t < params.trials; ++t) {
    n_wrong += wrong[t];
    n_bad1 += bad1[t];
    n_regime += in_regime[t];
    if (csv)
      *csv << t << ',' << substream(params.seed, t) << ',' << summary.n << ','
           << s2_count[t] << ',' << corrupt_count[t] << ',' << int(wrong[t]) << ','
           << int(bad1[t]) << ',' << int(in_regime[t]) << "\n";
  }
  summary.freq_wrong = static_cast<double>(n_wrong) / params.trials;
  summary.freq_majority_corrupt = static_cast<double>(n_bad1) / params.trials;
  summary.freq_in_regime = static_cast<double>(n_regime) / params.trials;
  summary.std_error = mc_se(summary.freq_wrong, params.trials);
  summary.bound_holds =
      summary.freq_wrong > 1.0 / 342.0 - 3.0 * summary.std_error;
  return summary;
}

VcLowerBoundSummary run_vc_lower_bound(const VcLowerBoundParams& params,
                                       std::ostream* csv, Exec exec) {
  const double eps = 2.0 * params.eta + params.gap;
  if (params.d < 3) throw parameter_gate_error("vc-lb: requires d >= 3");
  if (!(eps > 0.0 && eps <= 0.125))
    throw parameter_gate_error("vc-lb: requires eps = 2*eta+gap <= 1/8");
  if (!(params.delta > 0.0 && params.delta < 1.0 / 12.0))
    throw parameter_gate_error("vc-lb: requires delta < 1/12");
  if (!(params.gap > 0.0 && 2.0 * params.eta + 8.0 * params.gap <= 1.0))
    throw parameter_gate_error("vc-lb: requires gap > 0 and 2*eta+8*gap <= 1");
  if (params.trials < 1 || params.n_scale < 1)
    throw parameter_gate_error("vc-lb: trials and n_scale >= 1");

  VcLowerBoundSummary summary;
  summary.n = static_cast<long long>((params.d - 2) / (32.0 * params.gap)) *
              params.n_scale;
  if (summary.n < 1) throw parameter_gate_error("vc-lb: sample size vanished");
  summary.trials = params.trials;
  const auto dist = VcAdversaryDistribution::make(params.d, params.eta, params.gap);
  const FiniteHypothesisClass cls = FiniteHypothesisClass::power_set(params.d);

  std::vector<char> failure(params.trials);
  std::vector<double> errors(params.trials);
  const bool par = exec == Exec::OpenMP;
#pragma omp parallel for schedule(dynamic, 8) if (par)
  for (long long t = 0; t < params.trials; ++t) {
    const VcAdversaryDraw draw =
        vc_adversary(params.d, params.eta, params.gap,
                     static_cast<int>(summary.n), substream(params.seed, t));
    const LearnerOutput out = erm(cls, draw.samples, Exec::Serial);
    const auto& row = cls.row(out.hypothesis);
    const auto& target = draw.target.reveal_for_evaluation();
    double err = 0.0;
    for (int q = 0; q < params.d; ++q)
      if (row[q] != target[q]) err += dist.masses[q];
    errors[t] = err;
    failure[t] = err >= eps;
  }

  long long n_fail = 0;
  if (csv) *csv << "trial,seed,n,true_error,failure\n";
  for (long long t = 0; t < params.trials; ++t) {
    n_fail += failure[t];
    if (csv)
      *csv << t << ',' << substream(params.seed, t) << ',' << summary.n << ','
           << format_double(errors[t]) << ',' << int(failure[t]) << "\n";
  }
  summary.freq_failure = static_cast<double>(n_fail) / params.trials;
  summary.std_error = mc_se(summary.freq_failure, params.trials);
  summary.bound_holds =
      summary.freq_failure > 1.0 / 12.0 - 3.0 * summary.std_error;
  return summary;
}

IndistinguishabilityReport run_indistinguishability(
    const IndistinguishabilityParams& params, std::ostream* csv) {
  if (!(params.eta >= 0.0 && params.eta < 0.5))
    throw parameter_gate_error("indistinguishability: eta in [0, 1/2)");
  if (params.n < 1) throw parameter_gate_error("indistinguishability: n >= 1");

  IndistinguishabilityReport report;
  report.n = params.n;
  report.expected[0] = 1.0 - 2.0 * params.eta;
  report.expected[1] = params.eta;
  report.expected[2] = params.eta;
  if (params.eta == 0.0) {
    // The adversary never acts and the distinguishing query has zero mass;
    // the comparison is vacuous.
    report.applicable = false;
    report.freq_h1[0] = report.freq_h2[0] = 1.0;
    report.verdict = true;
    return report;
  }

  AdversaryConfig config;
  config.eta = params.eta;
  config.n = static_cast<int>(params.n);
  config.seed = params.seed;
  config.strategy = AdversaryStrategy::Indistinguishable;
  const auto histogram = [&](TwoPointTarget target, double out[3]) {
    const SampleSet set = indistinguishable_adversary(config, target);
    long long counts[3] = {0, 0, 0};
    for (const auto& s : set.draws) {
      if (s.query == 0)
        ++counts[0];
      else
        ++counts[s.label == Label::CloserFirst ? 1 : 2];
    }
    for (int i = 0; i < 3; ++i)
      out[i] = static_cast<double>(counts[i]) / params.n;
  };
  histogram(TwoPointTarget::H1, report.freq_h1);
  histogram(TwoPointTarget::H2, report.freq_h2);

  if (csv) *csv << "outcome,freq_h1,freq_h2,expected,diff_sigmas,dev_sigmas\n";
  static const char* names[3] = {"s1-first", "s2-first", "s2-second"};
  for (int i = 0; i < 3; ++i) {
    const double pooled = 0.5 * (report.freq_h1[i] + report.freq_h2[i]);
    const double se_pair =
        std::sqrt(std::max(2.0 * pooled * (1.0 - pooled), 1e-12) / params.n);
    const double se_one =
        std::sqrt(std::max(report.expected[i] * (1.0 - report.expected[i]), 1e-12) /
                  params.n);
    const double diff_sig =
        std::fabs(report.freq_h1[i] - report.freq_h2[i]) / se_pair;
    const double dev_sig =
        std::max(std::fabs(report.freq_h1[i] - report.expected[i]),
                 std::fabs(report.freq_h2[i] - report.expected[i])) /
        se_one;
    report.max_diff_sigmas = std::max(report.max_diff_sigmas, diff_sig);
    report.max_dev_sigmas = std::max(report.max_dev_sigmas, dev_sig);
    if (csv)
      *csv << names[i] << ',' << format_double(report.freq_h1[i]) << ','
           << format_double(report.freq_h2[i]) << ','
           << format_double(report.expected[i]) << ',' << format_double(diff_sig)
           << ',' << format_double(dev_sig) << "\n";
  }
  report.verdict = report.max_diff_sigmas < 4.0 && report.max_dev_sigmas < 4.0;
  return report;
}

}  // namespace paclab
