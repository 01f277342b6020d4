#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "paclab/exec.hpp"
#include "paclab/pair_order.hpp"
#include "paclab/triplet.hpp"

namespace paclab {

/// Raised instead of silently approximating when an exhaustive search would
/// exceed its configured budget, or when a brute-force universe is too large.
struct refusal_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RealizabilityResult {
  bool realizable = false;
  /// Certificate metric when realizable: reproduces every input label and
  /// passes validate_metric.
  std::optional<MetricTable> certificate;
  /// Closed walk of point pairs forming a directed comparison cycle when not.
  std::vector<std::pair<PointId, PointId>> cycle;
};

/// Decides whether any distance function can reproduce the labels: builds the
/// global pair digraph and tests acyclicity. An acyclic order is always
/// realizable by a true metric because the construction places every distance
/// in [N,2N], where all triangle inequalities hold.
RealizabilityResult is_realizable_metric(const Dataset& dataset,
                                         std::span<const LabeledSample> samples);

/// Topologically sorts the global pair digraph and maps ranks affinely onto
/// [N,2N]. Precondition: the digraph is acyclic (std::invalid_argument
/// otherwise).
MetricTable construct_metric_for_labeling(const Dataset& dataset,
                                          std::span<const LabeledSample> samples);

/// Anchored query family (v_i, v_j, v_{j+1}) for i < j < N-1. Its pair
/// digraph is a disjoint union of paths, so every labeling is realizable;
/// the family has (N-1)(N-2)/2 queries.
std::vector<TripletQuery> consecutive_pair_family(int N);

/// Queries (x_i, y_1, y_j) of the basis-vector embedding construction, in the
/// same order as its label bits.
std::vector<TripletQuery> shattering_embedding_queries(int N, int d);

/// Builds the embedding that satisfies any labeling of the
/// shattering_embedding_queries family: f(y_j) = e_j, f(x_i) has first
/// coordinate 1/2 and j-th coordinate bits[(i-1)(d-1)+(j-2)]. The p-th power
/// gap of query (x_i, y_1, y_j) is exactly 2*bit - 1.
Embedding construct_shattering_embedding(int N, int d, double p,
                                         std::span<const std::uint8_t> bits);

struct ForcingCycle {
  PointId anchor = 0;
  std::vector<PointId> ring;  // candidate points along the cycle
  /// Labeling rho(x,ring[0]) < rho(x,ring[1]) < ... < rho(x,ring[0]),
  /// which no distance function satisfies.
  std::vector<LabeledSample> labeling;
};

/// Scans every anchor's undirected candidate graph for a cycle. Any anchor
/// with >= N queries must contain one (more edges than vertices); returns
/// nullopt when every anchor graph is a forest.
std::optional<ForcingCycle> find_forcing_cycle(std::span<const TripletQuery> queries,
                                               int N);

/// All deduplicated queries on N points: anchor a with candidate pair {b,c},
/// b < c. Size N*C(N-1,2).
std::vector<TripletQuery> query_universe(int N);

/// Answers whether a fully labeled query set is realizable in the class.
using RealizabilityOracle =
    std::function<bool(const std::vector<LabeledSample>&)>;

/// Oracle for the arbitrary-metric class, bound to a dataset.
RealizabilityOracle metric_realizability_oracle(const Dataset& dataset);

struct ShatteringReport {
  std::vector<TripletQuery> queries;
  bool shattered = false;
  /// Lowest-index unrealizable labeling when not shattered.
  std::optional<std::vector<Label>> witness_labeling;
  /// Its digraph cycle when the arbitrary-metric oracle was in use.
  std::vector<std::pair<PointId, PointId>> witness_cycle;
  std::uint64_t oracle_calls = 0;
};

/// Tries all 2^k labelings of a query set against the oracle.
ShatteringReport check_shattered(std::vector<TripletQuery> queries,
                                 const RealizabilityOracle& oracle,
                                 Exec exec = Exec::OpenMP);

struct VcReport {
  int vc = 0;
  std::vector<TripletQuery> max_shattered_set;
  int universe_size = 0;
  std::uint64_t oracle_calls = 0;
};

/// Exact VC dimension by exhaustive search over query subsets and labelings.
/// Refuses (refusal_error) if any level would exceed C(universe,k)*2^k >
/// budget oracle calls.
VcReport brute_force_vcdim(const Dataset& dataset,
                           const RealizabilityOracle& oracle,
                           std::uint64_t budget = std::uint64_t{1} << 22,
                           Exec exec = Exec::OpenMP);

// ---- finite-class VC algebra ----

/// A hypothesis class over a universe of at most 20 elements, one bitmask per
/// hypothesis.
struct LabelClass {
  int universe = 0;
  std::vector<std::uint32_t> sets;
};

/// Exact VC dimension of an explicit class; refuses universes above 20.
int exact_vc(const LabelClass& cls);

struct VcAlgebraReport {
  int vc_a = 0, vc_b = 0;
  int vc_neg_a = 0, vc_union = 0, vc_intersection = 0;
  bool negation_ok = false, union_ok = false, intersection_ok = false;
  bool pass() const { return negation_ok && union_ok && intersection_ok; }
};

/// Checks VC(neg A) = VC(A) and VC(A v B), VC(A ^ B) <= VC(A)+VC(B)+1 by
/// brute force.
VcAlgebraReport vc_algebra_check(const LabelClass& a, const LabelClass& b);

struct VcAlgebraTrialSummary {
  int trials = 0;
  int violations = 0;
};

/// Runs vc_algebra_check on random class pairs over the given universe.
VcAlgebraTrialSummary vc_algebra_trials(int universe, int trials,
                                        std::uint64_t seed);

}  // namespace paclab
