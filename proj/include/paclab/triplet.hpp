#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "paclab/exec.hpp"

namespace paclab {

using PointId = int;

/// A ground set of N abstract points with identifiers 0..N-1.
struct Dataset {
  int size = 0;

  explicit Dataset(int n) : size(n) {
    if (n < 2) throw std::invalid_argument("Dataset: need at least 2 points");
  }
};

/// Ordered triplet comparison query (anchor, first, second). Swapping
/// first/second gives the label-flipped view of the same query, so the
/// deduplication key is (anchor, {first, second}).
struct TripletQuery {
  PointId anchor = 0;
  PointId first = 0;
  PointId second = 0;

  bool operator==(const TripletQuery&) const = default;
};

/// CloserFirst (-1) encodes "first is strictly closer to the anchor";
/// CloserSecond (+1) the reverse.
enum class Label : int { CloserFirst = -1, CloserSecond = +1 };

inline int sign_of(Label l) { return static_cast<int>(l); }
inline Label flip(Label l) {
  return l == Label::CloserFirst ? Label::CloserSecond : Label::CloserFirst;
}
inline Label label_from_sign(int s) {
  if (s != -1 && s != 1) throw std::invalid_argument("label sign must be +-1");
  return static_cast<Label>(s);
}

/// A drawn query with its (possibly corrupted) label. The corrupted flag is
/// evaluation-harness metadata; learners never see it.
struct LabeledSample {
  TripletQuery query;
  Label label = Label::CloserFirst;
  bool corrupted = false;
};

/// Result of a hypothesis evaluation. Exact ties resolve to CloserSecond and
/// set the tie flag, so a silent tie cannot occur.
struct Evaluation {
  Label label = Label::CloserSecond;
  bool tie = false;
};

/// Symmetric table of pairwise distances with a zero diagonal. Whether the
/// entries satisfy the triangle inequality is checked by validate_metric,
/// never assumed.
class MetricTable {
 public:
  explicit MetricTable(int n, double fill = 0.0);

  int size() const { return n_; }
  double at(PointId i, PointId j) const { return d_[idx(i, j)]; }
  /// Sets both (i,j) and (j,i).
  void set(PointId i, PointId j, double value);

 private:
  std::size_t idx(PointId i, PointId j) const;
  int n_;
  std::vector<double> d_;
};

struct TriangleViolation {
  PointId i, j, k;  // d(i,k) > d(i,j) + d(j,k)
  double lhs, rhs;
};

struct MetricReport {
  std::vector<std::pair<PointId, PointId>> asymmetric_pairs;
  std::vector<PointId> nonzero_diagonal;
  std::vector<std::pair<PointId, PointId>> negative_entries;
  std::vector<TriangleViolation> triangle_violations;

  bool valid() const {
    return asymmetric_pairs.empty() && nonzero_diagonal.empty() &&
           negative_entries.empty() && triangle_violations.empty();
  }
};

/// Lists every metric-axiom violation; an empty report certifies a metric.
MetricReport validate_metric(const MetricTable& table, Exec exec = Exec::OpenMP);

/// N points embedded as rows of an N x d matrix, compared under the l_p
/// quasinorm (p > 0). An optional cap R bounds every row's l2 norm.
class Embedding {
 public:
  Embedding(int n, int dim, double p,
            std::optional<double> norm_cap = std::nullopt);
  Embedding(int n, int dim, double p, std::vector<double> rows,
            std::optional<double> norm_cap = std::nullopt);

  int size() const { return n_; }
  int dim() const { return dim_; }
  double exponent() const { return p_; }
  std::optional<double> norm_cap() const { return norm_cap_; }

  std::span<const double> row(PointId v) const;
  double coord(PointId v, int t) const { return x_[static_cast<std::size_t>(v) * dim_ + t]; }
  void set_coord(PointId v, int t, double value);

  /// Throws if a capped row exceeds the cap.
  void check_norm_cap() const;

 private:
  int n_, dim_;
  double p_;
  std::optional<double> norm_cap_;
  std::vector<double> x_;
};

/// (sum_t |f(a)_t - f(b)_t|^p)^(1/p).
double lp_distance(const Embedding& e, PointId a, PointId b);

/// sum_t |f(a)_t - f(b)_t|^p, without the final root. Comparisons of p-th
/// powers order the same way as the distances and stay exact on the integer
/// and half-integer coordinates the constructions use.
double lp_power_sum(const Embedding& e, PointId a, PointId b);

/// ||f(x)-f(first)||_p^p - ||f(x)-f(second)||_p^p for a query.
double lp_power_gap(const Embedding& e, const TripletQuery& q);

/// sign(d(x,first) - d(x,second)) with the tie-to-CloserSecond policy.
Evaluation evaluate_metric_hypothesis(const MetricTable& table,
                                      const TripletQuery& q);
Evaluation evaluate_embedding_hypothesis(const Embedding& e,
                                         const TripletQuery& q);

/// Materializes all pairwise l_p distances of an embedding.
MetricTable pairwise_table(const Embedding& e);

void check_query(int n_points, const TripletQuery& q);

// ---- line-oriented plain-text serialization ----

void write_metric(std::ostream& os, const MetricTable& table);
MetricTable read_metric(std::istream& is);
void write_embedding(std::ostream& os, const Embedding& e);
Embedding read_embedding(std::istream& is);
/// Format: header "triplets N", then one "anchor first second label" line per
/// sample ('#' starts a comment). Returns the dataset size and the samples.
void write_labeled_queries(std::ostream& os, int n_points,
                           std::span<const LabeledSample> samples);
std::pair<int, std::vector<LabeledSample>> read_labeled_queries(std::istream& is);

/// Shortest round-trippable decimal form (17 significant digits).
std::string format_double(double v);

}  // namespace paclab
