#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "paclab/exec.hpp"

namespace paclab {

/// n contrastive tuples of raw feature vectors in dimension D: one anchor and
/// k+1 comparison points each.
struct ContrastiveBatch {
  int n = 0, k = 0, input_dim = 0;
  std::vector<double> anchors;      // n x D, row-major
  std::vector<double> comparisons;  // n x (k+1) x D

  std::span<const double> anchor(int j) const;
  std::span<const double> comparison(int j, int i) const;
  void validate() const;
  /// Requires every vector to have l2 norm <= 1 (the linear class contract).
  void check_unit_norms() const;

  /// Text format: header "batch n k D", then per tuple the anchor row
  /// followed by k+1 comparison rows.
  static ContrastiveBatch read(std::istream& is);
  void write(std::ostream& os) const;
};

/// Linear transforms W: R^D -> R^d under a Frobenius norm cap R, evaluated on
/// unit-norm inputs. For this class the inner supremum of the Rademacher
/// objective is exact: the objective is linear in W, so the sup over the ball
/// is R times the Frobenius norm of the accumulated coefficient matrix.
struct LinearEmbeddingClass {
  int input_dim = 0;
  int output_dim = 0;
  double norm_cap = 1.0;
};

/// A loss with a declared Lipschitz constant (w.r.t. the l2 norm on its
/// argument vector) and output clamped into [0,1].
struct LossSpec {
  std::string name;
  double lipschitz = 1.0;
  int arity = 1;
  std::function<double(std::span<const double>)> fn;
};

/// clamp01(first argument); 1-Lipschitz.
LossSpec identity_first_loss();
/// clamp01((1 + rho_1 - rho_2)/2); Lipschitz 1/sqrt(2), arity 2.
LossSpec pair_margin_loss();

/// Mean clamped loss of the tuple distances ||W x_j - W x_ji||_2 under the
/// transform W (row-major d x D, inside the class ball).
double empirical_risk(const ContrastiveBatch& batch,
                      const LinearEmbeddingClass& cls,
                      std::span<const double> transform, const LossSpec& loss);

struct McEstimate {
  double value = 0.0;
  double std_error = 0.0;
  long long draws = 0;
};

/// Monte Carlo Rademacher complexity of the contrastive objective
/// sup_W sum_{j,i,t} (s_jit1 (Wx_j)_t + s_jit2 (Wx_ji)_t) over the class
/// ball; the per-sigma supremum is computed exactly.
McEstimate rademacher_estimate(const ContrastiveBatch& batch,
                               const LinearEmbeddingClass& cls,
                               long long num_sigma_draws, std::uint64_t seed,
                               Exec exec = Exec::OpenMP);

/// Exact value by enumerating all sign assignments; refuses instances with
/// more than 24 sign bits.
double rademacher_exhaustive(const ContrastiveBatch& batch,
                             const LinearEmbeddingClass& cls);

/// risk + 4 L rad / n + 3 sqrt(ln(4/delta) / (2n)).
double generalization_bound(double empirical_risk, double rademacher_value,
                            double lipschitz, long long n, double delta);

struct LipschitzReport {
  double max_ratio = 0.0;
  long long trials = 0;
};

/// Samples pairs of difference vectors and checks the distance map
/// w -> ||w||_2 is 1-Lipschitz: | ||w1|| - ||w2|| | <= ||w1 - w2||.
LipschitzReport lipschitz_check_distance(long long trials, int dim,
                                         std::uint64_t seed,
                                         Exec exec = Exec::OpenMP);

/// Samples pairs of (u,v,w) triples and checks the unsigned comparison map
/// h(u,v,w) = ||u-v|| - ||u-w|| against the factor-2 bound
/// |h(t1)-h(t2)| <= 2 ||t1-t2||_2 on concatenated coordinates.
LipschitzReport lipschitz_check_binary(long long trials, int dim,
                                       std::uint64_t seed,
                                       Exec exec = Exec::OpenMP);

struct ContractionReport {
  double left = 0.0, left_se = 0.0;
  double right = 0.0, right_se = 0.0;
  double lipschitz = 0.0;
  bool holds = false;
};

/// Checks the vector-contraction inequality
///   E_s sup_f sum_j s_j loss(f(x_j)) <= sqrt(2) L E_s sup_f sum_{j,t} s_jt f_t(x_j)
/// over a finite sampled subclass of transforms (both sides use the same
/// subclass, for which the inequality must also hold). The loss reads the
/// first arity coordinates of the embedded anchor.
ContractionReport contraction_check(const ContrastiveBatch& batch,
                                    const LinearEmbeddingClass& cls,
                                    const LossSpec& loss,
                                    long long num_sigma_draws,
                                    int num_class_samples, std::uint64_t seed,
                                    Exec exec = Exec::OpenMP);

}  // namespace paclab
