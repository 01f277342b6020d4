#include "paclab/triplet.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace paclab {

MetricTable::MetricTable(int n, double fill) : n_(n) {
  if (n < 1) throw std::invalid_argument("MetricTable: size must be positive");
  d_.assign(static_cast<std::size_t>(n) * n, fill);
  for (int i = 0; i < n; ++i) d_[static_cast<std::size_t>(i) * n + i] = 0.0;
}

std::size_t MetricTable::idx(PointId i, PointId j) const {
  if (i < 0 || j < 0 || i >= n_ || j >= n_)
    throw std::invalid_argument("MetricTable: point id out of range");
  return static_cast<std::size_t>(i) * n_ + j;
}

void MetricTable::set(PointId i, PointId j, double value) {
  d_[idx(i, j)] = value;
  d_[idx(j, i)] = value;
}

MetricReport validate_metric(const MetricTable& table, Exec exec) {
  MetricReport report;
  const int n = table.size();
  for (int i = 0; i < n; ++i) {
    if (table.at(i, i) != 0.0) report.nonzero_diagonal.push_back(i);
    for (int j = i + 1; j < n; ++j) {
      if (table.at(i, j) != table.at(j, i)) report.asymmetric_pairs.push_back({i, j});
      if (table.at(i, j) < 0.0) report.negative_entries.push_back({i, j});
    }
  }
  // Triangle scan d(i,k) <= d(i,j) + d(j,k), collected per i so the parallel
  // and serial paths produce the same ordering.
  std::vector<std::vector<TriangleViolation>> per_i(n);
  const bool par = exec == Exec::OpenMP;
#pragma omp parallel for schedule(static) if (par)
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (j == i) continue;
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        const double lhs = table.at(i, k);
        const double rhs = table.at(i, j) + table.at(j, k);
        if (lhs > rhs) per_i[i].push_back({i, j, k, lhs, rhs});
      }
    }
  }
  for (auto& v : per_i)
    report.triangle_violations.insert(report.triangle_violations.end(),
                                      v.begin(), v.end());
  return report;
}

Embedding::Embedding(int n, int dim, double p, std::optional<double> norm_cap)
    : n_(n), dim_(dim), p_(p), norm_cap_(norm_cap) {
  if (n < 1) throw std::invalid_argument("Embedding: size must be positive");
  if (dim < 1) throw std::invalid_argument("Embedding: dimension must be >= 1");
  if (!(p > 0.0)) throw std::invalid_argument("Embedding: exponent must be > 0");
  if (norm_cap_ && !(*norm_cap_ > 0.0))
    throw std::invalid_argument("Embedding: norm cap must be > 0");
  x_.assign(static_cast<std::size_t>(n) * dim, 0.0);
}

Embedding::Embedding(int n, int dim, double p, std::vector<double> rows,
                     std::optional<double> norm_cap)
    : Embedding(n, dim, p, norm_cap) {
  if (rows.size() != x_.size())
    throw std::invalid_argument("Embedding: row data has wrong size");
  x_ = std::move(rows);
  check_norm_cap();
}

std::span<const double> Embedding::row(PointId v) const {
  if (v < 0 || v >= n_) throw std::invalid_argument("Embedding: point id out of range");
  return {x_.data() + static_cast<std::size_t>(v) * dim_, static_cast<std::size_t>(dim_)};
}

void Embedding::set_coord(PointId v, int t, double value) {
  if (v < 0 || v >= n_ || t < 0 || t >= dim_)
    throw std::invalid_argument("Embedding: coordinate out of range");
  x_[static_cast<std::size_t>(v) * dim_ + t] = value;
}

void Embedding::check_norm_cap() const {
  if (!norm_cap_) return;
  for (int v = 0; v < n_; ++v) {
    double s = 0.0;
    for (double c : row(v)) s += c * c;
    if (std::sqrt(s) > *norm_cap_ + 1e-12)
      throw std::invalid_argument("Embedding: row exceeds the l2 norm cap");
  }
}

void check_query(int n_points, const TripletQuery& q) {
  const auto ok = [n_points](PointId v) { return v >= 0 && v < n_points; };
  if (!ok(q.anchor) || !ok(q.first) || !ok(q.second))
    throw std::invalid_argument("TripletQuery: point id out of range");
  if (q.anchor == q.first || q.anchor == q.second || q.first == q.second)
    throw std::invalid_argument("TripletQuery: ids must be distinct");
}

double lp_power_sum(const Embedding& e, PointId a, PointId b) {
  auto ra = e.row(a), rb = e.row(b);
  const double p = e.exponent();
  double s = 0.0;
  for (int t = 0; t < e.dim(); ++t) s += std::pow(std::fabs(ra[t] - rb[t]), p);
  return s;
}

double lp_distance(const Embedding& e, PointId a, PointId b) {
  return std::pow(lp_power_sum(e, a, b), 1.0 / e.exponent());
}

double lp_power_gap(const Embedding& e, const TripletQuery& q) {
  check_query(e.size(), q);
  return lp_power_sum(e, q.anchor, q.first) - lp_power_sum(e, q.anchor, q.second);
}

namespace {
Evaluation sign_evaluation(double gap) {
  if (gap < 0.0) return {Label::CloserFirst, false};
  if (gap > 0.0) return {Label::CloserSecond, false};
  return {Label::CloserSecond, true};
}
}  // namespace

Evaluation evaluate_metric_hypothesis(const MetricTable& table,
                                      const TripletQuery& q) {
  check_query(table.size(), q);
  return sign_evaluation(table.at(q.anchor, q.first) - table.at(q.anchor, q.second));
}

Evaluation evaluate_embedding_hypothesis(const Embedding& e,
                                         const TripletQuery& q) {
  check_query(e.size(), q);
  return sign_evaluation(lp_power_gap(e, q));
}

MetricTable pairwise_table(const Embedding& e) {
  MetricTable table(e.size());
  for (int i = 0; i < e.size(); ++i)
    for (int j = i + 1; j < e.size(); ++j) table.set(i, j, lp_distance(e, i, j));
  return table;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_metric(std::ostream& os, const MetricTable& table) {
  os << "metric " << table.size() << "\n";
  for (int i = 0; i < table.size(); ++i) {
    for (int j = 0; j < table.size(); ++j) {
      if (j) os << ' ';
      os << format_double(table.at(i, j));
    }
    os << "\n";
  }
}

MetricTable read_metric(std::istream& is) {
  std::string tag;
  int n = 0;
  if (!(is >> tag >> n) || tag != "metric")
    throw std::runtime_error("read_metric: expected 'metric N' header");
  MetricTable table(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double v;
      if (!(is >> v)) throw std::runtime_error("read_metric: truncated table");
      if (i != j) table.set(i, j, v);
    }
  return table;
}

void write_embedding(std::ostream& os, const Embedding& e) {
  os << "embedding " << e.size() << ' ' << e.dim() << ' '
     << format_double(e.exponent());
  if (e.norm_cap()) os << ' ' << format_double(*e.norm_cap());
  os << "\n";
  for (int v = 0; v < e.size(); ++v) {
    auto r = e.row(v);
    for (int t = 0; t < e.dim(); ++t) {
      if (t) os << ' ';
      os << format_double(r[t]);
    }
    os << "\n";
  }
}

Embedding read_embedding(std::istream& is) {
  std::string tag, header;
  if (!std::getline(is, header)) throw std::runtime_error("read_embedding: empty input");
  std::istringstream hs(header);
  int n = 0, dim = 0;
  double p = 0.0, cap = 0.0;
  hs >> tag >> n >> dim >> p;
  if (tag != "embedding" || hs.fail())
    throw std::runtime_error("read_embedding: expected 'embedding N d p [R]' header");
  std::optional<double> norm_cap;
  if (hs >> cap) norm_cap = cap;
  std::vector<double> rows(static_cast<std::size_t>(n) * dim);
  for (auto& v : rows)
    if (!(is >> v)) throw std::runtime_error("read_embedding: truncated rows");
  return Embedding(n, dim, p, std::move(rows), norm_cap);
}

void write_labeled_queries(std::ostream& os, int n_points,
                           std::span<const LabeledSample> samples) {
  os << "triplets " << n_points << "\n";
  for (const auto& s : samples)
    os << s.query.anchor << ' ' << s.query.first << ' ' << s.query.second << ' '
       << sign_of(s.label) << "\n";
}

std::pair<int, std::vector<LabeledSample>> read_labeled_queries(std::istream& is) {
  std::string line;
  int n_points = -1;
  std::vector<LabeledSample> samples;
  while (std::getline(is, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    if (n_points < 0) {
      std::string tag;
      if (!(ls >> tag)) continue;  // blank leading line
      if (tag != "triplets" || !(ls >> n_points))
        throw std::runtime_error("read_labeled_queries: expected 'triplets N' header");
      continue;
    }
    TripletQuery q;
    int sign;
    if (!(ls >> q.anchor >> q.first >> q.second >> sign)) continue;
    check_query(n_points, q);
    samples.push_back({q, label_from_sign(sign), false});
  }
  if (n_points < 0)
    throw std::runtime_error("read_labeled_queries: missing 'triplets N' header");
  return {n_points, std::move(samples)};
}

}  // namespace paclab
