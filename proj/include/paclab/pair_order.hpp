#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "paclab/triplet.hpp"

namespace paclab {

/// Raised when two copies of the same query (up to the first/second swap)
/// carry incompatible labels.
struct contradiction_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Canonical index of the unordered pair {i,j} among the C(n,2) pairs.
inline int pair_index(int n, PointId i, PointId j) {
  if (i == j) throw std::invalid_argument("pair_index: ids must differ");
  if (i > j) std::swap(i, j);
  return i * (2 * n - i - 1) / 2 + (j - i - 1);
}

/// Directed comparison graph over unordered point pairs: an edge a -> b
/// records the constraint rho(pair a) < rho(pair b). Each labeled query
/// contributes one edge between the two pairs sharing its anchor; the graph is
/// global, so queries with different anchors that touch the same pair couple
/// through it.
class PairOrderDigraph {
 public:
  explicit PairOrderDigraph(int n_points);

  int n_points() const { return n_points_; }
  int n_pairs() const { return n_pairs_; }
  int n_edges() const { return n_edges_; }
  std::pair<PointId, PointId> pair_of(int node) const { return pairs_[node]; }

  /// Adds the edge induced by a labeled query; no-op for an exact duplicate,
  /// contradiction_error for a conflicting duplicate.
  void add_constraint(const LabeledSample& sample);

  /// Node ranks of a topological order, or nullopt if the graph has a cycle.
  std::optional<std::vector<int>> topological_ranks() const;

  /// Some directed cycle as a closed walk of pair nodes (first node repeated
  /// at the end); empty when acyclic.
  std::vector<int> find_cycle() const;

 private:
  int n_points_, n_pairs_, n_edges_ = 0;
  std::vector<std::pair<PointId, PointId>> pairs_;
  // Adjacency lists; duplicate/conflict detection scans them linearly, which
  // is fine at desk scale.
  std::vector<std::vector<int>> out_;
};

/// Builds the digraph from a sample set, deduplicating queries by their
/// unordered identity.
PairOrderDigraph build_pair_digraph(const Dataset& dataset,
                                    std::span<const LabeledSample> samples);

}  // namespace paclab
