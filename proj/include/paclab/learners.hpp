#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "paclab/adversary.hpp"
#include "paclab/exec.hpp"
#include "paclab/triplet.hpp"

namespace paclab {

/// Explicit finite hypothesis class: one label vector per hypothesis over a
/// shared query universe. Rows must be distinct.
class FiniteHypothesisClass {
 public:
  FiniteHypothesisClass(int universe, std::vector<std::vector<Label>> rows);

  /// All 2^d labelings of d queries; hypothesis h labels query q CloserSecond
  /// iff bit q of h is set, so index 0 is the all-CloserFirst row.
  static FiniteHypothesisClass power_set(int d);

  int universe() const { return universe_; }
  int size() const { return static_cast<int>(rows_.size()); }
  const std::vector<Label>& row(int h) const { return rows_[h]; }

 private:
  int universe_;
  std::vector<std::vector<Label>> rows_;
};

struct LearnerOutput {
  int hypothesis = 0;
  long long disagreements = 0;
  /// Filled in by the evaluation harness from the generating distribution;
  /// learners never compute it.
  double true_error = 0.0;
  bool empty_sample = false;
};

/// Exhaustive empirical risk minimization: returns the hypothesis with the
/// fewest disagreements on the sample, ties broken by lowest index. An empty
/// sample returns index 0 with the empty_sample diagnostic set.
LearnerOutput erm(const FiniteHypothesisClass& cls, const SampleSet& sample,
                  Exec exec = Exec::OpenMP);

/// Majority vote over the observed labels of the distinguishing query (id 1)
/// of a two-point sample: majority CloserFirst picks H1, and an exact tie
/// (including zero occurrences) also picks H1.
TwoPointTarget bayes_majority(const SampleSet& sample);

// ---- gradient-descent embedding probe ----

struct OptimizerConfig {
  int steps = 2000;
  double learning_rate = 0.3;
  /// Learning rate at step t is learning_rate / (1 + decay * t).
  double decay = 0.01;
  double margin = 1e-3;
  int restarts = 20;
  std::uint64_t seed = 0;
};

struct TrainResult {
  Embedding embedding;
  double loss = 0.0;
  int steps_run = 0;
  int restarts_run = 1;
};

struct optimizer_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Sum of hinge terms max(0, margin - sign(label) * (rho(x,second) -
/// rho(x,first)))... concretely max(0, margin - s*g) with g = rho(x,first) -
/// rho(x,second) and s the label sign; zero iff every label holds with the
/// margin to spare.
double hinge_loss(const Embedding& e, std::span<const LabeledSample> samples,
                  double margin);

/// Loss and its (sub)gradient with respect to every coordinate, laid out like
/// the embedding rows.
double hinge_loss_grad(const Embedding& e, std::span<const LabeledSample> samples,
                       double margin, std::vector<double>& grad);

/// Subgradient descent from a seeded uniform [-1,1] initialization. Stops
/// early at loss zero; throws optimizer_error with a step trace when the loss
/// turns non-finite. Requires p >= 1.
TrainResult train_embedding(std::span<const LabeledSample> samples, int N, int d,
                            double p, const OptimizerConfig& config);

/// Best run over config.restarts seeded restarts.
TrainResult train_embedding_restarts(std::span<const LabeledSample> samples,
                                     int N, int d, double p,
                                     const OptimizerConfig& config);

}  // namespace paclab
