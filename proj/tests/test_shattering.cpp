#include <algorithm>
#include <numeric>
#include <set>

#include "doctest.h"
#include "order_oracle.hpp"
#include "paclab/rng.hpp"
#include "paclab/shattering.hpp"

using namespace paclab;

namespace {

std::vector<LabeledSample> with_labels(const std::vector<TripletQuery>& queries,
                                       std::uint64_t bits) {
  std::vector<LabeledSample> samples;
  for (std::size_t i = 0; i < queries.size(); ++i)
    samples.push_back({queries[i],
                       (bits >> i) & 1 ? Label::CloserSecond : Label::CloserFirst,
                       false});
  return samples;
}

bool labels_reproduced(const MetricTable& table,
                       const std::vector<LabeledSample>& samples) {
  for (const auto& s : samples) {
    const auto ev = evaluate_metric_hypothesis(table, s.query);
    if (ev.tie || ev.label != s.label) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("consecutive-pair family: every labeling of the N=4 family is realizable") {
  const Dataset dataset(4);
  const auto family = consecutive_pair_family(4);
  REQUIRE(family.size() == 3);
  for (std::uint64_t bits = 0; bits < 8; ++bits) {
    const auto samples = with_labels(family, bits);
    const auto result = is_realizable_metric(dataset, samples);
    CHECK(result.realizable);
    REQUIRE(result.certificate.has_value());
    CHECK(validate_metric(*result.certificate).valid());
    CHECK(labels_reproduced(*result.certificate, samples));
  }
}

TEST_CASE("consecutive-pair family: exhaustive labelings up to N=7") {
  for (int N = 3; N <= 7; ++N) {
    const Dataset dataset(N);
    const auto family = consecutive_pair_family(N);
    CHECK(family.size() == static_cast<std::size_t>((N - 1) * (N - 2) / 2));
    const std::uint64_t total = std::uint64_t{1} << family.size();
    for (std::uint64_t bits = 0; bits < total; ++bits)
      CHECK(is_realizable_metric(dataset, with_labels(family, bits)).realizable);
  }
}

TEST_CASE("consecutive-pair family: random labelings at N=8") {
  const Dataset dataset(8);
  const auto family = consecutive_pair_family(8);
  CounterRng rng(23, 0);
  for (int t = 0; t < 20000; ++t) {
    const std::uint64_t bits = rng.next_u64() & ((std::uint64_t{1} << family.size()) - 1);
    CHECK(is_realizable_metric(dataset, with_labels(family, bits)).realizable);
  }
}

TEST_CASE("anchored comparison cycle is rejected with a cycle witness") {
  const Dataset dataset(4);
  // rho(0,1) < rho(0,2) < rho(0,3) < rho(0,1): unrealizable 3-cycle.
  const std::vector<LabeledSample> samples{{{0, 1, 2}, Label::CloserFirst, false},
                                           {{0, 2, 3}, Label::CloserFirst, false},
                                           {{0, 3, 1}, Label::CloserFirst, false}};
  const auto result = is_realizable_metric(dataset, samples);
  CHECK_FALSE(result.realizable);
  CHECK(result.cycle.size() >= 4);  // closed walk repeats the first node
  CHECK(result.cycle.front() == result.cycle.back());
  for (const auto& [a, b] : result.cycle) {
    CHECK(a == 0);  // every constrained pair contains the anchor
    CHECK(b >= 1);
    CHECK(b <= 3);
  }

  SUBCASE("any superset stays unrealizable") {
    auto more = samples;
    more.push_back({{1, 0, 2}, Label::CloserSecond, false});
    CHECK_FALSE(is_realizable_metric(dataset, more).realizable);
  }
}

TEST_CASE("a single query is always realizable") {
  const Dataset dataset(3);
  for (Label l : {Label::CloserFirst, Label::CloserSecond}) {
    const std::vector<LabeledSample> s{{{0, 1, 2}, l, false}};
    CHECK(is_realizable_metric(dataset, s).realizable);
  }
}

TEST_CASE("conflicting duplicate labels raise a contradiction") {
  const Dataset dataset(3);
  const std::vector<LabeledSample> conflict{{{0, 1, 2}, Label::CloserFirst, false},
                                            {{0, 2, 1}, Label::CloserFirst, false}};
  CHECK_THROWS_AS(is_realizable_metric(dataset, conflict), contradiction_error);
  // The swapped view with the flipped label is the same constraint.
  const std::vector<LabeledSample> dup{{{0, 1, 2}, Label::CloserFirst, false},
                                       {{0, 2, 1}, Label::CloserSecond, false}};
  const auto graph = build_pair_digraph(dataset, dup);
  CHECK(graph.n_edges() == 1);
}

TEST_CASE("constructed metrics stay inside [N,2N] and reproduce labels") {
  CounterRng rng(29, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int N = 4 + static_cast<int>(rng.below(4));
    const Dataset dataset(N);
    // Label random queries consistently with a random strict pair order, so
    // the constraint set is realizable by construction.
    const int n_pairs = N * (N - 1) / 2;
    std::vector<int> rank(n_pairs);
    std::iota(rank.begin(), rank.end(), 0);
    for (int i = n_pairs - 1; i > 0; --i)
      std::swap(rank[i], rank[rng.below(i + 1)]);
    const auto universe = query_universe(N);
    std::vector<LabeledSample> samples;
    for (const auto& q : universe) {
      if (rng.bernoulli(0.5)) continue;
      const int a = pair_index(N, q.anchor, q.first);
      const int b = pair_index(N, q.anchor, q.second);
      samples.push_back(
          {q, rank[a] < rank[b] ? Label::CloserFirst : Label::CloserSecond, false});
    }
    const auto table = construct_metric_for_labeling(dataset, samples);
    CHECK(validate_metric(table).valid());
    CHECK(labels_reproduced(table, samples));
    double lo = 1e300, hi = -1e300;
    for (int i = 0; i < N; ++i)
      for (int j = i + 1; j < N; ++j) {
        lo = std::min(lo, table.at(i, j));
        hi = std::max(hi, table.at(i, j));
      }
    CHECK(lo >= N);
    CHECK(hi <= 2.0 * N + 1e-9);
  }
}

TEST_CASE("construct_metric_for_labeling edge cases") {
  const Dataset two(2);
  const auto table = construct_metric_for_labeling(two, {});
  CHECK(table.at(0, 1) >= 2.0);
  CHECK(table.at(0, 1) <= 4.0);
  CHECK(validate_metric(table).valid());

  const Dataset four(4);
  const std::vector<LabeledSample> cyclic{{{0, 1, 2}, Label::CloserFirst, false},
                                          {{0, 2, 3}, Label::CloserFirst, false},
                                          {{0, 3, 1}, Label::CloserFirst, false}};
  CHECK_THROWS_AS(construct_metric_for_labeling(four, cyclic), std::invalid_argument);
}

TEST_CASE("digraph oracle agrees with exhaustive order enumeration") {
  CounterRng rng(31, 0);
  SUBCASE("N=4, random query subsets, all labelings") {
    const int N = 4;
    const Dataset dataset(N);
    const auto universe = query_universe(N);
    for (int trial = 0; trial < 25; ++trial) {
      std::vector<int> ids(universe.size());
      std::iota(ids.begin(), ids.end(), 0);
      for (std::size_t i = 0; i < ids.size(); ++i)
        std::swap(ids[i], ids[i + rng.below(static_cast<std::uint32_t>(ids.size() - i))]);
      const int k = 2 + static_cast<int>(rng.below(5));
      std::vector<TripletQuery> queries;
      for (int i = 0; i < k; ++i) queries.push_back(universe[ids[i]]);
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
        const auto samples = with_labels(queries, bits);
        CHECK(is_realizable_metric(dataset, samples).realizable ==
              paclab::testing::realizable_by_orders(N, samples));
      }
    }
  }
  SUBCASE("N=5, random subsets via the achievable-vector table") {
    const int N = 5;
    const Dataset dataset(N);
    const auto universe = query_universe(N);
    const auto vectors = paclab::testing::achievable_sign_vectors(N);
    for (int trial = 0; trial < 12; ++trial) {
      const int k = 3 + static_cast<int>(rng.below(6));
      std::vector<int> ids(universe.size());
      std::iota(ids.begin(), ids.end(), 0);
      for (int i = 0; i < k; ++i)
        std::swap(ids[i], ids[i + rng.below(static_cast<std::uint32_t>(ids.size() - i))]);
      // One pass over the achievable vectors marks every realizable labeling
      // of this subset.
      std::vector<char> realizable(std::size_t{1} << k, 0);
      for (std::uint64_t v : vectors) {
        std::uint32_t key = 0;
        for (int i = 0; i < k; ++i) key |= ((v >> ids[i]) & 1) << i;
        realizable[key] = 1;
      }
      std::vector<TripletQuery> queries;
      for (int i = 0; i < k; ++i) queries.push_back(universe[ids[i]]);
      for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << k); ++bits) {
        const auto samples = with_labels(queries, bits);
        CHECK(is_realizable_metric(dataset, samples).realizable ==
              static_cast<bool>(realizable[bits]));
      }
    }
  }
}

TEST_CASE("basis-vector shattering embedding satisfies every bit assignment") {
  CounterRng rng(37, 0);
  for (int d = 2; d <= 5; ++d)
    for (int N = d + 1; N <= 9; N += 2)
      for (double p : {1.0, 2.0, 3.0}) {
        const auto queries = shattering_embedding_queries(N, d);
        const int n_bits = (N - d) * (d - 1);
        REQUIRE(queries.size() == static_cast<std::size_t>(n_bits));
        for (int trial = 0; trial < 40; ++trial) {
          std::vector<std::uint8_t> bits(n_bits);
          for (auto& b : bits) b = rng.bernoulli(0.5) ? 1 : 0;
          const auto e = construct_shattering_embedding(N, d, p, bits);
          for (int i = 0; i < n_bits; ++i) {
            const auto ev = evaluate_embedding_hypothesis(e, queries[i]);
            CHECK_FALSE(ev.tie);
            CHECK(ev.label ==
                  (bits[i] ? Label::CloserSecond : Label::CloserFirst));
            // The p-th power gap is exactly -1 for bit 0 and +1 for bit 1.
            const double gap = lp_power_gap(e, queries[i]);
            CHECK(std::fabs(gap - (2.0 * bits[i] - 1.0)) < 1e-12);
          }
        }
      }
  CHECK_THROWS_AS(construct_shattering_embedding(4, 4, 2.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(construct_shattering_embedding(4, 1, 2.0, {}), std::invalid_argument);
}

TEST_CASE("brute-force VC dimension on small datasets") {
  SUBCASE("N=3 gives 2") {
    const Dataset dataset(3);
    const auto report =
        brute_force_vcdim(dataset, metric_realizability_oracle(dataset));
    CHECK(report.vc == 2);
    CHECK(report.universe_size == 3);
    CHECK(report.max_shattered_set.size() == 2);
  }
  SUBCASE("N=4 gives 5 and the witness is shattered") {
    const Dataset dataset(4);
    const auto oracle = metric_realizability_oracle(dataset);
    const auto report = brute_force_vcdim(dataset, oracle);
    CHECK(report.vc == 5);
    CHECK(report.universe_size == 12);
    const auto check = check_shattered(report.max_shattered_set, oracle);
    CHECK(check.shattered);
  }
  SUBCASE("N=2 has no queries") {
    const Dataset dataset(2);
    const auto report =
        brute_force_vcdim(dataset, metric_realizability_oracle(dataset));
    CHECK(report.vc == 0);
    CHECK(report.universe_size == 0);
  }
  SUBCASE("budget refusal") {
    const Dataset dataset(4);
    CHECK_THROWS_AS(
        brute_force_vcdim(dataset, metric_realizability_oracle(dataset), 10),
        refusal_error);
  }
  SUBCASE("serial and parallel agree") {
    const Dataset dataset(4);
    const auto oracle = metric_realizability_oracle(dataset);
    const auto a = brute_force_vcdim(dataset, oracle, 1 << 22, Exec::Serial);
    const auto b = brute_force_vcdim(dataset, oracle, 1 << 22, Exec::OpenMP);
    CHECK(a.vc == b.vc);
    CHECK(a.oracle_calls == b.oracle_calls);
    REQUIRE(a.max_shattered_set.size() == b.max_shattered_set.size());
    for (std::size_t i = 0; i < a.max_shattered_set.size(); ++i)
      CHECK(a.max_shattered_set[i] == b.max_shattered_set[i]);
  }
}

TEST_CASE("check_shattered reports the lowest failing labeling") {
  const Dataset dataset(4);
  const auto oracle = metric_realizability_oracle(dataset);
  const std::vector<TripletQuery> triangle{{0, 1, 2}, {0, 2, 3}, {0, 3, 1}};
  const auto report = check_shattered(triangle, oracle, Exec::Serial);
  CHECK_FALSE(report.shattered);
  REQUIRE(report.witness_labeling.has_value());
  // Recompute: the reported labeling must indeed be rejected.
  std::vector<LabeledSample> samples;
  for (std::size_t i = 0; i < triangle.size(); ++i)
    samples.push_back({triangle[i], (*report.witness_labeling)[i], false});
  CHECK_FALSE(is_realizable_metric(dataset, samples).realizable);
  const auto par = check_shattered(triangle, oracle, Exec::OpenMP);
  CHECK(par.shattered == report.shattered);
  REQUIRE(par.witness_labeling.has_value());
  CHECK(*par.witness_labeling == *report.witness_labeling);
}

TEST_CASE("forcing cycles") {
  SUBCASE("explicit triangle") {
    const std::vector<TripletQuery> queries{{0, 1, 2}, {0, 2, 3}, {0, 3, 1}};
    const auto cycle = find_forcing_cycle(queries, 4);
    REQUIRE(cycle.has_value());
    CHECK(cycle->anchor == 0);
    CHECK(cycle->ring.size() == 3);
    CHECK(cycle->labeling.size() == cycle->ring.size());
    const Dataset dataset(4);
    CHECK_FALSE(is_realizable_metric(dataset, cycle->labeling).realizable);
  }
  SUBCASE("stars and forests have none") {
    const std::vector<TripletQuery> star{{0, 1, 2}, {0, 2, 3}, {0, 3, 4}};
    CHECK_FALSE(find_forcing_cycle(star, 5).has_value());
  }
  SUBCASE("pigeonhole: any 25 distinct queries on 5 points force a cycle") {
    const int N = 5;
    const auto universe = query_universe(N);
    REQUIRE(universe.size() == 30);
    CounterRng rng(41, 0);
    const Dataset dataset(N);
    for (int trial = 0; trial < 20; ++trial) {
      std::vector<int> ids(universe.size());
      std::iota(ids.begin(), ids.end(), 0);
      for (int i = 0; i < 25; ++i)
        std::swap(ids[i], ids[i + rng.below(static_cast<std::uint32_t>(ids.size() - i))]);
      std::vector<TripletQuery> queries;
      for (int i = 0; i < 25; ++i) queries.push_back(universe[ids[i]]);
      const auto cycle = find_forcing_cycle(queries, N);
      REQUIRE(cycle.has_value());
      CHECK(cycle->ring.size() >= 3);
      CHECK_FALSE(is_realizable_metric(dataset, cycle->labeling).realizable);
      // Every ring edge must be one of the input queries at that anchor.
      const int t = static_cast<int>(cycle->ring.size());
      for (int i = 0; i < t; ++i) {
        const PointId a = std::min(cycle->ring[i], cycle->ring[(i + 1) % t]);
        const PointId b = std::max(cycle->ring[i], cycle->ring[(i + 1) % t]);
        bool found = false;
        for (const auto& q : queries)
          if (q.anchor == cycle->anchor && std::min(q.first, q.second) == a &&
              std::max(q.first, q.second) == b)
            found = true;
        CHECK(found);
      }
    }
  }
}

TEST_CASE("finite-class VC algebra") {
  SUBCASE("singletons over five points") {
    LabelClass singletons{5, {1, 2, 4, 8, 16}};
    CHECK(exact_vc(singletons) == 1);
    const auto report = vc_algebra_check(singletons, singletons);
    CHECK(report.vc_neg_a == 1);
    CHECK(report.pass());
  }
  SUBCASE("intervals on a six-point line") {
    LabelClass intervals{6, {}};
    intervals.sets.push_back(0);
    for (int a = 0; a < 6; ++a)
      for (int b = a; b < 6; ++b) {
        std::uint32_t mask = 0;
        for (int i = a; i <= b; ++i) mask |= 1u << i;
        intervals.sets.push_back(mask);
      }
    CHECK(exact_vc(intervals) == 2);
    const auto report = vc_algebra_check(intervals, intervals);
    CHECK(report.vc_union <= 5);
    CHECK(report.pass());
  }
  SUBCASE("the power set of three points shatters everything") {
    LabelClass power{3, {0, 1, 2, 3, 4, 5, 6, 7}};
    CHECK(exact_vc(power) == 3);
  }
  SUBCASE("universe refusal") {
    LabelClass big{21, {1}};
    CHECK_THROWS_AS(exact_vc(big), refusal_error);
  }
  SUBCASE("random classes satisfy the algebra bounds") {
    const auto summary = vc_algebra_trials(8, 100, 101);
    CHECK(summary.trials == 100);
    CHECK(summary.violations == 0);
  }
}

TEST_CASE("unrealizability is monotone under supersets") {
  CounterRng rng(47, 0);
  const int N = 6;
  const Dataset dataset(N);
  const auto universe = query_universe(N);
  for (int trial = 0; trial < 40; ++trial) {
    // Seed with a forced 3-cycle at a random anchor, then add random
    // consistent extras; the superset must stay unrealizable.
    const PointId anchor = static_cast<PointId>(rng.below(N));
    std::vector<PointId> others;
    for (PointId v = 0; v < N; ++v)
      if (v != anchor) others.push_back(v);
    for (std::size_t i = 0; i < 3; ++i)
      std::swap(others[i], others[i + rng.below(static_cast<std::uint32_t>(
                               others.size() - i))]);
    std::vector<LabeledSample> samples;
    for (int i = 0; i < 3; ++i)
      samples.push_back(
          {{anchor, others[i], others[(i + 1) % 3]}, Label::CloserFirst, false});
    REQUIRE_FALSE(is_realizable_metric(dataset, samples).realizable);
    for (int extra = 0; extra < 6; ++extra) {
      const auto& q = universe[rng.below(static_cast<std::uint32_t>(universe.size()))];
      std::vector<LabeledSample> grown = samples;
      grown.push_back(
          {q, rng.bernoulli(0.5) ? Label::CloserSecond : Label::CloserFirst, false});
      bool realizable = false, contradiction = false;
      try {
        realizable = is_realizable_metric(dataset, grown).realizable;
      } catch (const contradiction_error&) {
        contradiction = true;  // the extra conflicted with an existing label
      }
      if (contradiction) continue;
      CHECK_FALSE(realizable);
      samples = grown;
    }
  }
}

TEST_CASE("vc dimension via orders matches the digraph route") {
  CHECK(paclab::testing::vc_by_orders(3) == 2);
  const Dataset d3(3);
  CHECK(brute_force_vcdim(d3, metric_realizability_oracle(d3)).vc == 2);
}
