#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "paclab/rng.hpp"
#include "paclab/triplet.hpp"

namespace paclab {

/// One draw handed to a learner: an index into the scenario's query universe
/// plus the (possibly corrupted) label. The corrupted flag is metadata the
/// evaluation harness keeps for itself.
struct DrawnSample {
  int query = 0;
  Label label = Label::CloserFirst;
  bool corrupted = false;
};

struct SampleSet {
  /// Synthetic triplet per abstract query id, for serialization only.
  std::vector<TripletQuery> universe;
  std::vector<DrawnSample> draws;

  int corrupted_count() const;
  /// Columns query_id,anchor,first,second,label[,corrupted]. The corrupted
  /// column is the harness-only variant.
  void write_csv(std::ostream& os, bool with_corrupted = false) const;
};

enum class AdversaryStrategy { Indistinguishable, Gap, VcMass };

struct AdversaryConfig {
  double eta = 0.0;    // noise rate, in [0,1)
  double gap = 0.0;    // the Delta margin, where the strategy uses one
  int n = 0;           // requested sample size
  std::uint64_t seed = 0;
  AdversaryStrategy strategy = AdversaryStrategy::Indistinguishable;
};

/// The two candidate targets of the two-point constructions. Both label the
/// heavy query s1 the same way; they disagree on s2.
enum class TwoPointTarget { H1, H2 };

/// Two-point sample space: s1 (query 0) with mass1, s2 (query 1) with mass2.
/// h1 labels both CloserFirst; h2 flips s2.
struct TwoPointDistribution {
  double mass1 = 0.0, mass2 = 0.0;
  TwoPointTarget target = TwoPointTarget::H1;

  Label target_label(int query) const {
    if (query == 0) return Label::CloserFirst;
    return target == TwoPointTarget::H1 ? Label::CloserFirst : Label::CloserSecond;
  }
};

/// m ~ Bin(n, eta), drawn as a Bernoulli count from the given stream.
long long sample_budget(long long n, double eta, CounterRng& rng);

/// Label-flip adversary that makes the two targets produce identically
/// distributed samples: masses (1-2eta, 2eta), each s2 occurrence flipped
/// with probability 1/2. Requires eta < 1/2. Output label frequencies
/// converge to (1-2eta, eta, eta) regardless of the target.
SampleSet indistinguishable_adversary(const AdversaryConfig& config,
                                      TwoPointTarget target);

/// Two-point adversary at accuracy eps = 2eta + gap: masses (1-eps, eps),
/// each s2 occurrence flipped with probability eta/eps, so observed s2
/// frequencies are (eta+gap, eta) and the expected corrupted count is n*eta.
SampleSet gap_adversary(const AdversaryConfig& config, TwoPointTarget target);

/// Sample space of the VC-based lower bound: d shattered queries with masses
/// (1-2eta-8gap, 8gap/(d-2) x (d-2), 2eta). Requires d >= 3, 2eta+8gap <= 1.
struct VcAdversaryDistribution {
  int d = 0;
  double eta = 0.0, gap = 0.0;
  std::vector<double> masses;

  static VcAdversaryDistribution make(int d, double eta, double gap);
};

/// Hidden target labels, wrapped so they can only flow to the evaluation
/// harness, never to a learner.
class SealedTarget {
 public:
  explicit SealedTarget(std::vector<Label> labels) : labels_(std::move(labels)) {}
  /// Evaluation-harness access point; learners must not call this.
  const std::vector<Label>& reveal_for_evaluation() const { return labels_; }

 private:
  std::vector<Label> labels_;
};

struct VcAdversaryDraw {
  SampleSet samples;
  SealedTarget target;
};

/// Picks a target uniformly from all 2^d labelings, draws n samples from the
/// VC mass distribution, and flips each occurrence of the last query with
/// probability 1/2.
VcAdversaryDraw vc_adversary(int d, double eta, double gap, int n,
                             std::uint64_t seed);

}  // namespace paclab
