// Acceptance suite: runs every gate criterion at its stated tolerance and
// prints one PASS/FAIL line per criterion. Exit code 0 iff all pass.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "order_oracle.hpp"
#include "paclab/adversary.hpp"
#include "paclab/binomial.hpp"
#include "paclab/claims.hpp"
#include "paclab/experiments.hpp"
#include "paclab/learners.hpp"
#include "paclab/rademacher.hpp"
#include "paclab/rng.hpp"
#include "paclab/shattering.hpp"

using namespace paclab;

namespace {

int failures = 0;

void report(int id, bool pass, const std::string& what,
            const std::string& detail) {
  std::printf("[%2d] %s  %s (%s)\n", id, pass ? "PASS" : "FAIL", what.c_str(),
              detail.c_str());
  std::fflush(stdout);
  if (!pass) ++failures;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

// 1. Exact VC agreement with the independent order-enumeration oracle.
void criterion_1() {
  const auto start = std::chrono::steady_clock::now();
  const Dataset d3(3), d4(4);
  const int vc3 = brute_force_vcdim(d3, metric_realizability_oracle(d3)).vc;
  const int vc4 = brute_force_vcdim(d4, metric_realizability_oracle(d4)).vc;
  const int ind3 = paclab::testing::vc_by_orders(3);
  const int ind4 = paclab::testing::vc_by_orders(4);
  const double elapsed = seconds_since(start);
  const bool pass =
      vc3 == 2 && vc4 == 5 && ind3 == vc3 && ind4 == vc4 && elapsed < 10.0;
  report(1, pass, "exact VC agreement (N=3 -> 2, N=4 -> 5)",
         fmt("digraph %d/%d, order-enumeration %d/%d, %.2fs", vc3, vc4, ind3,
             ind4, elapsed));
}

// 2. Metric-construction certificates for the consecutive-pair family.
void criterion_2() {
  long long checked = 0, bad = 0;
  for (int N = 4; N <= 8; ++N) {
    const Dataset dataset(N);
    const auto family = consecutive_pair_family(N);
    CounterRng rng(20250'001, N);
    for (int t = 0; t < 1000; ++t) {
      std::vector<LabeledSample> samples;
      for (const auto& q : family)
        samples.push_back(
            {q, rng.bernoulli(0.5) ? Label::CloserSecond : Label::CloserFirst,
             false});
      ++checked;
      const auto result = is_realizable_metric(dataset, samples);
      if (!result.realizable || !result.certificate.has_value()) {
        ++bad;
        continue;
      }
      const auto& table = *result.certificate;
      if (!validate_metric(table).valid()) ++bad;
      double lo = 1e300, hi = -1e300;
      for (int i = 0; i < N; ++i)
        for (int j = i + 1; j < N; ++j) {
          lo = std::min(lo, table.at(i, j));
          hi = std::max(hi, table.at(i, j));
        }
      if (lo < N || hi > 2.0 * N + 1e-9) ++bad;
      for (const auto& s : samples) {
        const auto ev = evaluate_metric_hypothesis(table, s.query);
        if (ev.tie || ev.label != s.label) {
          ++bad;
          break;
        }
      }
    }
  }
  report(2, bad == 0, "metric construction certificate suite (N=4..8)",
         fmt("%lld labelings, %lld failures", checked, bad));
}

// 3. Embedding-construction certificates with exact +-1 power gaps.
void criterion_3() {
  long long checked = 0, bad = 0;
  for (int d = 2; d <= 5; ++d)
    for (int N = d + 1; N <= 10; ++N)
      for (double p : {1.0, 2.0, 3.0}) {
        const auto queries = shattering_embedding_queries(N, d);
        const int n_bits = (N - d) * (d - 1);
        CounterRng rng(20250'002, (d * 100 + N) * 10 + static_cast<int>(p));
        for (int t = 0; t < 1000; ++t) {
          std::vector<std::uint8_t> bits(n_bits);
          for (auto& b : bits) b = rng.bernoulli(0.5) ? 1 : 0;
          const auto e = construct_shattering_embedding(N, d, p, bits);
          ++checked;
          for (int i = 0; i < n_bits; ++i) {
            const auto ev = evaluate_embedding_hypothesis(e, queries[i]);
            const Label want = bits[i] ? Label::CloserSecond : Label::CloserFirst;
            const double gap = lp_power_gap(e, queries[i]);
            if (ev.tie || ev.label != want ||
                std::fabs(gap - (2.0 * bits[i] - 1.0)) > 1e-12) {
              ++bad;
              break;
            }
          }
        }
      }
  report(3, bad == 0, "embedding construction certificate suite (N<=10)",
         fmt("%lld assignments, %lld failures", checked, bad));
}

// 4. Forcing cycles are refuted by the oracle and by descent.
void criterion_4() {
  bool pass = true;
  std::string detail;
  int instances = 0;
  for (int t = 3; t <= 6; ++t) {
    const int N = t + 1;
    std::vector<TripletQuery> queries;
    for (int i = 0; i < t; ++i)
      queries.push_back({0, 1 + i, 1 + (i + 1) % t});
    const auto cycle = find_forcing_cycle(queries, N);
    if (!cycle.has_value()) {
      pass = false;
      detail = fmt("ring of %d candidates not detected", t);
      break;
    }
    ++instances;
    const Dataset dataset(N);
    if (is_realizable_metric(dataset, cycle->labeling).realizable) {
      pass = false;
      detail = "oracle accepted a forced cycle";
      break;
    }
    OptimizerConfig config;
    config.seed = 20250'003 + t;
    config.restarts = 20;
    const auto best =
        train_embedding_restarts(cycle->labeling, N, 2, 2.0, config);
    if (!(best.loss > config.margin / 2.0)) {
      pass = false;
      detail = fmt("descent dipped to %.3g on a forced cycle", best.loss);
      break;
    }
  }
  if (pass) detail = fmt("%d cyclic instances refuted both ways", instances);
  report(4, pass, "forcing-cycle refutation (oracle + 20-restart descent)", detail);
}

// 5. Paired-target indistinguishability at eta = 0.1, n = 1e6.
void criterion_5() {
  IndistinguishabilityParams params;
  params.eta = 0.1;
  params.n = 1000000;
  params.seed = 20250'005;
  const auto r = run_indistinguishability(params);
  report(5, r.applicable && r.verdict,
         "indistinguishability histograms at eta=0.1, n=1e6",
         fmt("max target gap %.2f sigma, max deviation from (0.8,0.1,0.1) "
             "%.2f sigma",
             r.max_diff_sigmas, r.max_dev_sigmas));
}

// 6. Two-point lower-bound regime and its collapse at 10x the threshold.
void criterion_6() {
  BayesLowerBoundParams params;
  params.eta = 0.12;
  params.gap = 0.009;
  params.delta = 1e-3;
  params.trials = 100000;
  params.seed = 20250'006;
  const auto base = run_bayes_lower_bound(params);
  params.n_scale = 10;
  const auto scaled = run_bayes_lower_bound(params);
  const bool pass = base.freq_wrong > 1.0 / 342.0 &&
                    scaled.freq_in_regime < 1.0 / 342.0;
  report(6, pass, "majority-learner failure regime (n=598 vs 10x)",
         fmt("wrong-choice %.4f > 1/342 at n=%lld; in-regime failure %.2g < "
             "1/342 at n=%lld (raw wrong-choice there: %.4f)",
             base.freq_wrong, base.n, scaled.freq_in_regime, scaled.n,
             scaled.freq_wrong));
}

// 7. VC-mass lower-bound regime at d = 12.
void criterion_7() {
  VcLowerBoundParams params;
  params.d = 12;
  params.eta = 0.05;
  params.gap = 0.01;
  params.delta = 0.05;
  params.trials = 10000;
  params.seed = 20250'007;
  const auto r = run_vc_lower_bound(params);
  report(7, r.bound_holds && r.n == 31,
         "ERM failure regime at d=12, n=(d-2)/(32*gap)",
         fmt("failure %.4f > 1/12 - 3se (se %.4f), n=%lld", r.freq_failure,
             r.std_error, r.n));
}

// 8. ERM upper bound at a calibrated constant, plus budget concentration.
void criterion_8() {
  ErmCurveParams base;
  base.eta = 0.05;
  base.gap = 0.2;
  base.delta = 0.05;
  base.d = 8;
  base.trials = 200;
  base.seed = 20250'008;
  const double grid[] = {0.5, 1.0, 2.0, 4.0};
  const auto c = calibrate_erm_constant(base, grid);
  bool pass = c.has_value();
  std::string detail = "no constant on the grid calibrates";
  if (pass) {
    ErmCurveParams verify = base;
    verify.seed = 20250'009;
    const long long n = erm_sample_size(*c, base.gap, base.delta, base.d);
    verify.n_grid = {n};
    const auto curve = run_erm_curve(verify);
    const double fraction = curve[0].fraction;
    const auto budget =
        verify_budget_concentration(n, base.eta, base.gap, 200000, 20250'010);
    pass = fraction >= 1.0 - base.delta && curve[0].doubling_violations == 0 &&
           budget.pass;
    detail = fmt("c=%.2f, n=%lld, success %.3f >= 0.95; exact budget tail "
                 "%.3g <= %.3g",
                 *c, n, fraction, budget.exact, budget.claimed_bound);
  }
  report(8, pass, "ERM upper bound with calibrated constant", detail);
}

// 9. Tail-claim verifiers across parameterizations.
void criterion_9() {
  int run = 0, passed = 0;
  const long long trials = 200000;
  const struct { long long N; double p; } central[] = {
      {1000, 0.5}, {500, 0.3}, {450, 0.1}, {2000, 0.25}, {800, 0.7}};
  for (const auto& c : central) {
    for (const auto& r :
         verify_binomial_central_tails(c.N, c.p, trials, 20250'011 + run)) {
      ++run;
      passed += r.pass ? 1 : 0;
    }
  }
  int mean_run = 0, mean_passed = 0;
  const auto mean_case = [&](double alpha, double beta, BoundedDistribution dist) {
    ++mean_run;
    mean_passed +=
        verify_mean_tail_bound(alpha, beta, dist, trials, 20250'020 + mean_run)
            .pass
            ? 1
            : 0;
  };
  mean_case(0.5, 0.25, {BoundedDistribution::Kind::Binomial, 100, 0.5, 0.0});
  mean_case(0.5, 0.25, {BoundedDistribution::Kind::Binomial, 64, 0.5, 0.0});
  mean_case(0.3, 0.15, {BoundedDistribution::Kind::Binomial, 400, 0.3, 0.0});
  mean_case(0.6, 0.3, {BoundedDistribution::Kind::PointMass, 100, 0.0, 60.0});
  mean_case(0.55, 0.2, {BoundedDistribution::Kind::TwoPointEnds, 50, 0.55, 0.0});
  const bool pass = passed == run && mean_passed == mean_run;
  report(9, pass, "tail-claim verifiers (central tails + mean tail)",
         fmt("central %d/%d, mean-tail %d/%d", passed, run, mean_passed,
             mean_run));
}

// 10. VC algebra on random classes.
void criterion_10() {
  const auto summary = vc_algebra_trials(8, 100, 20250'012);
  report(10, summary.violations == 0,
         "VC algebra (negation equality, union/intersection bound)",
         fmt("%d random class pairs, %d violations", summary.trials,
             summary.violations));
}

// 11. Data-dependent suite: Lipschitz maxima, tiny-instance oracle, and the
// generalization-bound surrogate over 200 splits.
void criterion_11() {
  const auto start = std::chrono::steady_clock::now();
  const auto dist_report = lipschitz_check_distance(100000, 8, 20250'013);
  const auto bin_report = lipschitz_check_binary(100000, 8, 20250'014);

  ContrastiveBatch tiny;
  tiny.n = 1;
  tiny.k = 0;
  tiny.input_dim = 1;
  tiny.anchors = {1.0};
  tiny.comparisons = {1.0};
  const LinearEmbeddingClass tiny_cls{1, 1, 1.0};
  const double exact = rademacher_exhaustive(tiny, tiny_cls);
  const auto mc = rademacher_estimate(tiny, tiny_cls, 4000, 20250'015);
  const bool oracle_ok = std::fabs(mc.value - exact) < 3.0 * mc.std_error;

  // Generalization-bound surrogate: 200 synthetic train/heldout splits with
  // the linear class and the clamped pair-comparison loss.
  const int splits = 200, n_train = 40, n_test = 400, D = 6, d = 4;
  const double delta = 0.1;
  const LossSpec loss = pair_margin_loss();
  const LinearEmbeddingClass cls{D, d, 1.0};
  int violations = 0;
  std::vector<double> w(static_cast<std::size_t>(d) * D);
  {
    CounterRng wrng(20250'016, 0);
    double norm = 0.0;
    for (auto& x : w) {
      x = wrng.normal();
      norm += x * x;
    }
    norm = std::sqrt(norm);
    for (auto& x : w) x = x / norm * 0.8;
  }
  for (int s = 0; s < splits; ++s) {
    CounterRng rng(20250'017, s);
    const auto draw_batch = [&](int count) {
      ContrastiveBatch b;
      b.n = count;
      b.k = 1;
      b.input_dim = D;
      b.anchors.resize(static_cast<std::size_t>(count) * D);
      b.comparisons.resize(static_cast<std::size_t>(count) * 2 * D);
      const auto unit_row = [&](double* row) {
        double norm = 0.0;
        for (int c = 0; c < D; ++c) {
          row[c] = rng.normal();
          norm += row[c] * row[c];
        }
        norm = std::sqrt(norm);
        for (int c = 0; c < D; ++c) row[c] /= norm;
      };
      for (int j = 0; j < count; ++j) {
        unit_row(b.anchors.data() + static_cast<std::size_t>(j) * D);
        unit_row(b.comparisons.data() + static_cast<std::size_t>(j) * 2 * D);
        unit_row(b.comparisons.data() + (static_cast<std::size_t>(j) * 2 + 1) * D);
      }
      return b;
    };
    const auto train = draw_batch(n_train);
    const auto heldout = draw_batch(n_test);
    const double risk = empirical_risk(train, cls, w, loss);
    const auto rad = rademacher_estimate(train, cls, 200, substream(20250'018, s));
    const double bound =
        generalization_bound(risk, rad.value, loss.lipschitz, n_train, delta);
    const double population = empirical_risk(heldout, cls, w, loss);
    if (population > bound) ++violations;
  }
  const double allowed =
      delta * splits + 3.0 * std::sqrt(splits * delta * (1.0 - delta));
  const double elapsed = seconds_since(start);
  const bool pass = dist_report.max_ratio <= 1.0 + 1e-12 &&
                    bin_report.max_ratio <= 2.0 + 1e-12 && oracle_ok &&
                    violations <= allowed && elapsed < 300.0;
  report(11, pass, "data-dependent suite (Lipschitz, sigma oracle, bound)",
         fmt("dist max %.6f <= 1, binary max %.6f <= 2, oracle gap %.3f se, "
             "violations %d/%d (allowed %.1f), %.1fs",
             dist_report.max_ratio, bin_report.max_ratio,
             std::fabs(mc.value - exact) / mc.std_error, violations, splits,
             allowed, elapsed));
}

// 12. Byte-identical reruns.
void criterion_12() {
  BayesLowerBoundParams params;
  params.trials = 500;
  params.seed = 20250'019;
  std::ostringstream a, b;
  run_bayes_lower_bound(params, &a);
  run_bayes_lower_bound(params, &b);

  AdversaryConfig config;
  config.eta = 0.15;
  config.gap = 0.01;
  config.n = 2000;
  config.seed = 20250'020;
  std::ostringstream c, d;
  gap_adversary(config, TwoPointTarget::H1).write_csv(c, true);
  gap_adversary(config, TwoPointTarget::H1).write_csv(d, true);

  const bool pass = a.str() == b.str() && c.str() == d.str() && !a.str().empty();
  report(12, pass, "determinism: reruns produce byte-identical CSV",
         fmt("experiment CSV %zu bytes, sample CSV %zu bytes", a.str().size(),
             c.str().size()));
}

}  // namespace

int main() {
  const auto start = std::chrono::steady_clock::now();
  criterion_1();
  criterion_2();
  criterion_3();
  criterion_4();
  criterion_5();
  criterion_6();
  criterion_7();
  criterion_8();
  criterion_9();
  criterion_10();
  criterion_11();
  criterion_12();
  std::printf("acceptance: %s (%d failed) in %.1fs\n",
              failures == 0 ? "ALL PASS" : "FAILURES", failures,
              seconds_since(start));
  return failures == 0 ? 0 : 1;
}
