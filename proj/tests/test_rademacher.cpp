#include <cmath>
#include <sstream>

#include "doctest.h"
#include "paclab/rademacher.hpp"
#include "paclab/rng.hpp"
#include "paclab/shattering.hpp"

using namespace paclab;

namespace {

ContrastiveBatch random_batch(int n, int k, int D, std::uint64_t seed,
                              double scale = 1.0) {
  ContrastiveBatch b;
  b.n = n;
  b.k = k;
  b.input_dim = D;
  b.anchors.resize(static_cast<std::size_t>(n) * D);
  b.comparisons.resize(static_cast<std::size_t>(n) * (k + 1) * D);
  CounterRng rng(seed, 0);
  const auto fill = [&](std::vector<double>& v) {
    for (std::size_t i = 0; i < v.size(); i += D) {
      double norm = 0.0;
      for (int c = 0; c < D; ++c) {
        v[i + c] = rng.normal();
        norm += v[i + c] * v[i + c];
      }
      norm = std::sqrt(norm);
      for (int c = 0; c < D; ++c) v[i + c] = v[i + c] / norm * scale;
    }
  };
  fill(b.anchors);
  fill(b.comparisons);
  return b;
}

}  // namespace

TEST_CASE("empirical risk basics") {
  const LinearEmbeddingClass cls{3, 2, 1.0};
  auto batch = random_batch(6, 1, 3, 21);
  const std::vector<double> zero(6, 0.0);
  // All distances vanish, so the pair-margin loss sits at its midpoint.
  CHECK(empirical_risk(batch, cls, zero, pair_margin_loss()) ==
        doctest::Approx(0.5));

  SUBCASE("single tuple equals its own loss") {
    auto one = random_batch(1, 1, 3, 22);
    std::vector<double> w(6);
    CounterRng rng(23, 0);
    for (auto& x : w) x = rng.uniform(-0.3, 0.3);
    const double risk = empirical_risk(one, cls, w, pair_margin_loss());
    CHECK(risk >= 0.0);
    CHECK(risk <= 1.0);
  }
  SUBCASE("tuple order does not matter") {
    std::vector<double> w(6);
    CounterRng rng(24, 0);
    for (auto& x : w) x = rng.uniform(-0.5, 0.5);
    const double before = empirical_risk(batch, cls, w, pair_margin_loss());
    // Swap two tuples wholesale.
    for (int c = 0; c < 3; ++c) {
      std::swap(batch.anchors[c], batch.anchors[3 + c]);
      for (int i = 0; i < 2; ++i)
        std::swap(batch.comparisons[i * 3 + c], batch.comparisons[(2 + i) * 3 + c]);
    }
    CHECK(empirical_risk(batch, cls, w, pair_margin_loss()) ==
          doctest::Approx(before).epsilon(1e-12));
  }
  SUBCASE("arity mismatch") {
    CHECK_THROWS_AS(empirical_risk(batch, cls, zero, identity_first_loss()),
                    std::invalid_argument);
  }
}

TEST_CASE("tiny-instance Rademacher estimate matches exhaustive enumeration") {
  // One tuple, one comparison, 1-d output and input, x = x' = 1, R = 1:
  // the four sign patterns give |s1 + s2| in {2,0,0,2}, mean exactly 1.
  ContrastiveBatch b;
  b.n = 1;
  b.k = 0;
  b.input_dim = 1;
  b.anchors = {1.0};
  b.comparisons = {1.0};
  const LinearEmbeddingClass cls{1, 1, 1.0};
  const double exact = rademacher_exhaustive(b, cls);
  CHECK(exact == doctest::Approx(1.0).epsilon(1e-12));
  const auto mc = rademacher_estimate(b, cls, 4000, 31);
  CHECK(std::fabs(mc.value - exact) < 3.0 * mc.std_error);

  SUBCASE("a second, irregular instance") {
    auto batch = random_batch(2, 1, 2, 32);
    const LinearEmbeddingClass cls2{2, 1, 1.5};
    const double ex = rademacher_exhaustive(batch, cls2);  // 8 sign bits
    const auto est = rademacher_estimate(batch, cls2, 6000, 33);
    CHECK(std::fabs(est.value - ex) < 4.0 * est.std_error);
  }
  SUBCASE("enumeration refuses large instances") {
    auto batch = random_batch(8, 3, 2, 34);
    CHECK_THROWS_AS(rademacher_exhaustive(batch, {2, 2, 1.0}), refusal_error);
  }
}

TEST_CASE("degenerate and scaling behaviour of the estimate") {
  SUBCASE("all-zero inputs give zero") {
    ContrastiveBatch b;
    b.n = 3;
    b.k = 1;
    b.input_dim = 2;
    b.anchors.assign(6, 0.0);
    b.comparisons.assign(12, 0.0);
    const auto est = rademacher_estimate(b, {2, 2, 1.0}, 100, 35);
    CHECK(est.value == 0.0);
  }
  SUBCASE("doubling the norm cap doubles every draw exactly") {
    const auto batch = random_batch(5, 2, 3, 36);
    const auto one = rademacher_estimate(batch, {3, 2, 1.0}, 500, 37);
    const auto two = rademacher_estimate(batch, {3, 2, 2.0}, 500, 37);
    CHECK(two.value == 2.0 * one.value);
  }
  SUBCASE("estimate is stable under tuple permutation in distribution") {
    auto batch = random_batch(10, 1, 3, 38);
    const auto base = rademacher_estimate(batch, {3, 2, 1.0}, 2000, 39);
    // Move the last tuple to the front.
    ContrastiveBatch rotated = batch;
    for (int c = 0; c < 3; ++c) {
      rotated.anchors[c] = batch.anchors[9 * 3 + c];
      for (int j = 1; j < 10; ++j)
        rotated.anchors[j * 3 + c] = batch.anchors[(j - 1) * 3 + c];
    }
    for (int c = 0; c < 6; ++c) {
      rotated.comparisons[c] = batch.comparisons[9 * 6 + c];
      for (int j = 1; j < 10; ++j)
        rotated.comparisons[j * 6 + c] = batch.comparisons[(j - 1) * 6 + c];
    }
    const auto moved = rademacher_estimate(rotated, {3, 2, 1.0}, 2000, 40);
    CHECK(std::fabs(base.value - moved.value) <
          5.0 * (base.std_error + moved.std_error));
  }
  SUBCASE("growth in k and d stays at most linear") {
    const LinearEmbeddingClass d2{4, 2, 1.0};
    const auto k1 = rademacher_estimate(random_batch(16, 1, 4, 41), d2, 1500, 42);
    const auto k3 = rademacher_estimate(random_batch(16, 3, 4, 41), d2, 1500, 43);
    CHECK(k3.value <= (4.0 / 2.0) * k1.value *
                          (1.0 + 5.0 * (k1.std_error + k3.std_error)));
    const auto batch = random_batch(16, 1, 4, 44);
    const auto dim2 = rademacher_estimate(batch, {4, 2, 1.0}, 1500, 45);
    const auto dim4 = rademacher_estimate(batch, {4, 4, 1.0}, 1500, 46);
    CHECK(dim4.value <= 2.0 * dim2.value *
                            (1.0 + 5.0 * (dim2.std_error + dim4.std_error)));
  }
  SUBCASE("serial and parallel estimates are identical") {
    const auto batch = random_batch(6, 1, 3, 47);
    const auto a = rademacher_estimate(batch, {3, 2, 1.0}, 400, 48, Exec::Serial);
    const auto b = rademacher_estimate(batch, {3, 2, 1.0}, 400, 48, Exec::OpenMP);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
  }
}

TEST_CASE("generalization bound assembly") {
  CHECK(generalization_bound(0.5, 10.0, 1.0, 100, 0.05) ==
        doctest::Approx(1.3440621561902395).epsilon(1e-12));
  SUBCASE("shrinks to the empirical risk as n grows") {
    CHECK(generalization_bound(0.5, 10.0, 1.0, 1000000000, 0.05) ==
          doctest::Approx(0.5).epsilon(1e-3));
  }
  SUBCASE("monotone in delta") {
    CHECK(generalization_bound(0.5, 10.0, 1.0, 100, 0.01) >
          generalization_bound(0.5, 10.0, 1.0, 100, 0.05));
  }
  CHECK_THROWS_AS(generalization_bound(0.5, 10.0, 1.0, 100, 0.0),
                  std::invalid_argument);
}

TEST_CASE("distance map is 1-Lipschitz in its difference argument") {
  const auto report = lipschitz_check_distance(100000, 8, 51);
  CHECK(report.max_ratio <= 1.0 + 1e-12);
  CHECK(report.max_ratio > 0.5);  // random probes do approach the bound

  SUBCASE("colinear translation approaches ratio 1") {
    // w2 = w1 + t*unit(w1): numerator and denominator both equal t.
    const double w1[2] = {3.0, 4.0};
    const double t = 1e-3;
    const double w2[2] = {w1[0] * (1 + t / 5.0), w1[1] * (1 + t / 5.0)};
    const double num = std::fabs(std::hypot(w1[0], w1[1]) - std::hypot(w2[0], w2[1]));
    const double den = std::hypot(w2[0] - w1[0], w2[1] - w1[1]);
    CHECK(num / den == doctest::Approx(1.0).epsilon(1e-9));
  }
  SUBCASE("equal-magnitude block moves split the ratio to 1/sqrt(2)") {
    // Anchor block moves along w, the other block orthogonally: the
    // difference vector changes by t*sqrt(2) while the norm changes by t.
    const int d = 2;
    const double t = 1e-4;
    const double u1[d] = {5.0, 0.0}, v1[d] = {1.0, 0.0};
    const double u2[d] = {5.0 + t, 0.0}, v2[d] = {1.0, t};
    const double w1n = std::hypot(u1[0] - v1[0], u1[1] - v1[1]);
    const double w2n = std::hypot(u2[0] - v2[0], u2[1] - v2[1]);
    const double den = std::hypot((u1[0] - v1[0]) - (u2[0] - v2[0]),
                                  (u1[1] - v1[1]) - (u2[1] - v2[1]));
    CHECK(std::fabs(w1n - w2n) / den ==
          doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-3));
  }
}

TEST_CASE("unsigned comparison map obeys the factor-2 bound on random probes") {
  const auto report = lipschitz_check_binary(100000, 8, 52);
  CHECK(report.max_ratio <= 2.0 + 1e-12);
  CHECK(report.max_ratio > 0.5);

  SUBCASE("moving only the anchor between opposed comparisons approaches 2") {
    const double t = 1e-4;
    // v and w sit on opposite sides of the anchor along one axis.
    const double h1 = std::fabs(-0.5 - (-1.0)) - std::fabs(-0.5 - 1.0);  // u=-0.5
    const double u2 = -0.5 + t;
    const double h2 = std::fabs(u2 - (-1.0)) - std::fabs(u2 - 1.0);
    CHECK(std::fabs(h1 - h2) / t == doctest::Approx(2.0).epsilon(1e-9));
  }
}

TEST_CASE("vector contraction inequality at batch scale") {
  const auto batch = random_batch(12, 1, 3, 61);
  SUBCASE("identity loss on 1-d outputs") {
    const LinearEmbeddingClass cls{3, 1, 1.0};
    const auto report =
        contraction_check(batch, cls, identity_first_loss(), 1500, 24, 62);
    CHECK(report.holds);
    CHECK(report.lipschitz == 1.0);
  }
  SUBCASE("pair-margin loss on 2-d outputs") {
    const LinearEmbeddingClass cls{3, 2, 1.0};
    const auto report =
        contraction_check(batch, cls, pair_margin_loss(), 1500, 24, 63);
    CHECK(report.holds);
  }
  SUBCASE("zero inputs vanish on both sides") {
    ContrastiveBatch zero;
    zero.n = 4;
    zero.k = 0;
    zero.input_dim = 2;
    zero.anchors.assign(8, 0.0);
    zero.comparisons.assign(8, 0.0);
    const auto report =
        contraction_check(zero, {2, 1, 1.0}, identity_first_loss(), 200, 8, 64);
    CHECK(report.left == 0.0);
    CHECK(report.right == 0.0);
    CHECK(report.holds);
  }
  SUBCASE("doubling the declared constant doubles the right-hand side") {
    const LinearEmbeddingClass cls{3, 1, 1.0};
    LossSpec doubled = identity_first_loss();
    doubled.lipschitz = 2.0;
    const auto a = contraction_check(batch, cls, identity_first_loss(), 400, 8, 65);
    const auto b = contraction_check(batch, cls, doubled, 400, 8, 65);
    CHECK(a.right == b.right);
    CHECK(b.lipschitz == 2.0 * a.lipschitz);
  }
}

TEST_CASE("batch serialization round trip") {
  const auto batch = random_batch(3, 2, 4, 71);
  std::stringstream ss;
  batch.write(ss);
  const auto parsed = ContrastiveBatch::read(ss);
  CHECK(parsed.n == batch.n);
  CHECK(parsed.k == batch.k);
  CHECK(parsed.input_dim == batch.input_dim);
  CHECK(parsed.anchors == batch.anchors);
  CHECK(parsed.comparisons == batch.comparisons);
}
