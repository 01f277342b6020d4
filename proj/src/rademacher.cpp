#include "paclab/rademacher.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include "paclab/rng.hpp"
#include "paclab/shattering.hpp"  // refusal_error
#include "paclab/triplet.hpp"     // format_double

namespace paclab {

namespace {

double clamp01(double v) { return std::min(1.0, std::max(0.0, v)); }

double norm2(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

void apply_transform(std::span<const double> w, int out_dim, int in_dim,
                     std::span<const double> x, std::vector<double>& out) {
  out.assign(out_dim, 0.0);
  for (int t = 0; t < out_dim; ++t) {
    double s = 0.0;
    const double* row = w.data() + static_cast<std::size_t>(t) * in_dim;
    for (int c = 0; c < in_dim; ++c) s += row[c] * x[c];
    out[t] = s;
  }
}

}  // namespace

std::span<const double> ContrastiveBatch::anchor(int j) const {
  return {anchors.data() + static_cast<std::size_t>(j) * input_dim,
          static_cast<std::size_t>(input_dim)};
}

std::span<const double> ContrastiveBatch::comparison(int j, int i) const {
  return {comparisons.data() +
              (static_cast<std::size_t>(j) * (k + 1) + i) * input_dim,
          static_cast<std::size_t>(input_dim)};
}

void ContrastiveBatch::validate() const {
  if (n < 1 || k < 0 || input_dim < 1)
    throw std::invalid_argument("ContrastiveBatch: need n >= 1, k >= 0, D >= 1");
  if (anchors.size() != static_cast<std::size_t>(n) * input_dim ||
      comparisons.size() != static_cast<std::size_t>(n) * (k + 1) * input_dim)
    throw std::invalid_argument("ContrastiveBatch: data size mismatch");
}

void ContrastiveBatch::check_unit_norms() const {
  validate();
  for (int j = 0; j < n; ++j) {
    if (norm2(anchor(j)) > 1.0 + 1e-9)
      throw std::invalid_argument("ContrastiveBatch: anchor norm exceeds 1");
    for (int i = 0; i <= k; ++i)
      if (norm2(comparison(j, i)) > 1.0 + 1e-9)
        throw std::invalid_argument("ContrastiveBatch: comparison norm exceeds 1");
  }
}

ContrastiveBatch ContrastiveBatch::read(std::istream& is) {
  std::string tag;
  ContrastiveBatch b;
  if (!(is >> tag >> b.n >> b.k >> b.input_dim) || tag != "batch")
    throw std::runtime_error("ContrastiveBatch::read: expected 'batch n k D' header");
  b.anchors.resize(static_cast<std::size_t>(b.n) * b.input_dim);
  b.comparisons.resize(static_cast<std::size_t>(b.n) * (b.k + 1) * b.input_dim);
  for (int j = 0; j < b.n; ++j) {
    for (int c = 0; c < b.input_dim; ++c)
      if (!(is >> b.anchors[static_cast<std::size_t>(j) * b.input_dim + c]))
        throw std::runtime_error("ContrastiveBatch::read: truncated anchors");
    for (int i = 0; i <= b.k; ++i)
      for (int c = 0; c < b.input_dim; ++c)
        if (!(is >> b.comparisons[(static_cast<std::size_t>(j) * (b.k + 1) + i) *
                                      b.input_dim +
                                  c]))
          throw std::runtime_error("ContrastiveBatch::read: truncated comparisons");
  }
  b.validate();
  return b;
}

void ContrastiveBatch::write(std::ostream& os) const {
  validate();
  os << "batch " << n << ' ' << k << ' ' << input_dim << "\n";
  const auto row = [&](std::span<const double> r) {
    for (int c = 0; c < input_dim; ++c) {
      if (c) os << ' ';
      os << format_double(r[c]);
    }
    os << "\n";
  };
  for (int j = 0; j < n; ++j) {
    row(anchor(j));
    for (int i = 0; i <= k; ++i) row(comparison(j, i));
  }
}

LossSpec identity_first_loss() {
  return {"identity-first", 1.0, 1,
          [](std::span<const double> a) { return clamp01(a[0]); }};
}

LossSpec pair_margin_loss() {
  return {"pair-margin", std::sqrt(0.5), 2, [](std::span<const double> a) {
            return clamp01(0.5 * (1.0 + a[0] - a[1]));
          }};
}

double empirical_risk(const ContrastiveBatch& batch,
                      const LinearEmbeddingClass& cls,
                      std::span<const double> transform, const LossSpec& loss) {
  batch.validate();
  if (batch.input_dim != cls.input_dim)
    throw std::invalid_argument("empirical_risk: batch/class dimension mismatch");
  if (loss.arity != batch.k + 1)
    throw std::invalid_argument("empirical_risk: loss arity must equal k+1");
  if (transform.size() !=
      static_cast<std::size_t>(cls.output_dim) * cls.input_dim)
    throw std::invalid_argument("empirical_risk: transform shape mismatch");

  std::vector<double> embedded_anchor, embedded_cmp, distances(batch.k + 1);
  std::vector<double> diff(batch.input_dim);
  double total = 0.0;
  for (int j = 0; j < batch.n; ++j) {
    const auto x = batch.anchor(j);
    for (int i = 0; i <= batch.k; ++i) {
      const auto y = batch.comparison(j, i);
      for (int c = 0; c < batch.input_dim; ++c) diff[c] = x[c] - y[c];
      apply_transform(transform, cls.output_dim, cls.input_dim, diff,
                      embedded_cmp);
      distances[i] = norm2(embedded_cmp);
    }
    total += clamp01(loss.fn(distances));
  }
  return total / batch.n;
}

namespace {

/// Per-sigma supremum: with the objective linear in W, sup over the Frobenius
/// ball is R * ||A||_F where A[t] = sum_{j,i} (s1 x_j + s2 x_ji).
double sigma_supremum(const ContrastiveBatch& batch, const LinearEmbeddingClass& cls,
                      CounterRng& rng) {
  std::vector<double> acc(static_cast<std::size_t>(cls.output_dim) *
                              cls.input_dim,
                          0.0);
  std::uint64_t bits = 0;
  int bits_left = 0;
  const auto sign = [&] {
    if (bits_left == 0) {
      bits = rng.next_u64();
      bits_left = 64;
    }
    const double s = (bits & 1) ? 1.0 : -1.0;
    bits >>= 1;
    --bits_left;
    return s;
  };
  for (int j = 0; j < batch.n; ++j) {
    const auto x = batch.anchor(j);
    for (int i = 0; i <= batch.k; ++i) {
      const auto y = batch.comparison(j, i);
      for (int t = 0; t < cls.output_dim; ++t) {
        const double s1 = sign();
        const double s2 = sign();
        double* row = acc.data() + static_cast<std::size_t>(t) * cls.input_dim;
        for (int c = 0; c < cls.input_dim; ++c)
          row[c] += s1 * x[c] + s2 * y[c];
      }
    }
  }
  return cls.norm_cap * norm2(acc);
}

}  // namespace

McEstimate rademacher_estimate(const ContrastiveBatch& batch,
                               const LinearEmbeddingClass& cls,
                               long long num_sigma_draws, std::uint64_t seed,
                               Exec exec) {
  batch.validate();
  batch.check_unit_norms();
  if (batch.input_dim != cls.input_dim)
    throw std::invalid_argument("rademacher_estimate: dimension mismatch");
  if (num_sigma_draws < 2)
    throw std::invalid_argument("rademacher_estimate: need >= 2 draws");
  std::vector<double> values(num_sigma_draws);
  const bool par = exec == Exec::OpenMP;
#pragma omp parallel for schedule(static) if (par)
  for (long long s = 0; s < num_sigma_draws; ++s) {
    CounterRng rng(seed, s);
    values[s] = sigma_supremum(batch, cls, rng);
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= num_sigma_draws;
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= (num_sigma_draws - 1);
  return {mean, std::sqrt(var / num_sigma_draws), num_sigma_draws};
}

double rademacher_exhaustive(const ContrastiveBatch& batch,
                             const LinearEmbeddingClass& cls) {
  batch.validate();
  const long long bits =
      2LL * batch.n * (batch.k + 1) * cls.output_dim;
  if (bits > 24)
    throw refusal_error("rademacher_exhaustive: more than 24 sign bits");
  const long long total = 1LL << bits;
  double sum = 0.0;
  std::vector<double> acc(static_cast<std::size_t>(cls.output_dim) *
                          cls.input_dim);
  for (long long mask = 0; mask < total; ++mask) {
    std::fill(acc.begin(), acc.end(), 0.0);
    int b = 0;
    for (int j = 0; j < batch.n; ++j) {
      const auto x = batch.anchor(j);
      for (int i = 0; i <= batch.k; ++i) {
        const auto y = batch.comparison(j, i);
        for (int t = 0; t < cls.output_dim; ++t) {
          const double s1 = (mask >> b++) & 1 ? 1.0 : -1.0;
          const double s2 = (mask >> b++) & 1 ? 1.0 : -1.0;
          double* row = acc.data() + static_cast<std::size_t>(t) * cls.input_dim;
          for (int c = 0; c < cls.input_dim; ++c) row[c] += s1 * x[c] + s2 * y[c];
        }
      }
    }
    sum += cls.norm_cap * norm2(acc);
  }
  return sum / total;
}

double generalization_bound(double empirical_risk, double rademacher_value,
                            double lipschitz, long long n, double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("generalization_bound: delta in (0,1)");
  if (n < 1) throw std::invalid_argument("generalization_bound: n >= 1");
  if (lipschitz < 0.0 || rademacher_value < 0.0)
    throw std::invalid_argument("generalization_bound: nonnegative L and complexity");
  return empirical_risk + 4.0 * lipschitz * rademacher_value / n +
         3.0 * std::sqrt(std::log(4.0 / delta) / (2.0 * n));
}

LipschitzReport lipschitz_check_distance(long long trials, int dim,
                                         std::uint64_t seed, Exec exec) {
  if (trials < 1 || dim < 1)
    throw std::invalid_argument("lipschitz_check_distance: trials, dim >= 1");
  double max_ratio = 0.0;
  const bool par = exec == Exec::OpenMP;
#pragma omp parallel if (par)
  {
    double local_max = 0.0;
    std::vector<double> u1(dim), v1(dim), u2(dim), v2(dim);
#pragma omp for schedule(static) nowait
    for (long long t = 0; t < trials; ++t) {
      CounterRng rng(seed, t);
      for (auto* vec : {&u1, &v1, &u2, &v2})
        for (double& c : *vec) c = rng.normal();
      double n1 = 0.0, n2 = 0.0, dd = 0.0;
      for (int c = 0; c < dim; ++c) {
        const double w1 = u1[c] - v1[c];
        const double w2 = u2[c] - v2[c];
        n1 += w1 * w1;
        n2 += w2 * w2;
        dd += (w1 - w2) * (w1 - w2);
      }
      if (dd <= 0.0) continue;
      const double ratio =
          std::fabs(std::sqrt(n1) - std::sqrt(n2)) / std::sqrt(dd);
      local_max = std::max(local_max, ratio);
    }
#pragma omp critical
    max_ratio = std::max(max_ratio, local_max);
  }
  return {max_ratio, trials};
}

LipschitzReport lipschitz_check_binary(long long trials, int dim,
                                       std::uint64_t seed, Exec exec) {
  if (trials < 1 || dim < 1)
    throw std::invalid_argument("lipschitz_check_binary: trials, dim >= 1");
  double max_ratio = 0.0;
  const bool par = exec == Exec::OpenMP;
#pragma omp parallel if (par)
  {
    double local_max = 0.0;
    std::vector<double> x(6 * dim);
#pragma omp for schedule(static) nowait
    for (long long t = 0; t < trials; ++t) {
      CounterRng rng(seed, t);
      for (double& c : x) c = rng.normal();
      const double* u1 = x.data();
      const double* v1 = u1 + dim;
      const double* w1 = v1 + dim;
      const double* u2 = w1 + dim;
      const double* v2 = u2 + dim;
      const double* w2 = v2 + dim;
      double uv1 = 0, uw1 = 0, uv2 = 0, uw2 = 0, dd = 0;
      for (int c = 0; c < dim; ++c) {
        uv1 += (u1[c] - v1[c]) * (u1[c] - v1[c]);
        uw1 += (u1[c] - w1[c]) * (u1[c] - w1[c]);
        uv2 += (u2[c] - v2[c]) * (u2[c] - v2[c]);
        uw2 += (u2[c] - w2[c]) * (u2[c] - w2[c]);
        dd += (u1[c] - u2[c]) * (u1[c] - u2[c]) +
              (v1[c] - v2[c]) * (v1[c] - v2[c]) +
              (w1[c] - w2[c]) * (w1[c] - w2[c]);
      }
      if (dd <= 0.0) continue;
      const double h1 = std::sqrt(uv1) - std::sqrt(uw1);
      const double h2 = std::sqrt(uv2) - std::sqrt(uw2);
      local_max = std::max(local_max, std::fabs(h1 - h2) / std::sqrt(dd));
    }
#pragma omp critical
    max_ratio = std::max(max_ratio, local_max);
  }
  return {max_ratio, trials};
}

ContractionReport contraction_check(const ContrastiveBatch& batch,
                                    const LinearEmbeddingClass& cls,
                                    const LossSpec& loss,
                                    long long num_sigma_draws,
                                    int num_class_samples, std::uint64_t seed,
                                    Exec exec) {
  batch.validate();
  if (loss.arity > cls.output_dim)
    throw std::invalid_argument(
        "contraction_check: loss arity exceeds the embedding dimension");
  if (num_class_samples < 1 || num_sigma_draws < 2)
    throw std::invalid_argument("contraction_check: need draws and class samples");

  // Finite subclass: random transforms on the Frobenius sphere of radius R.
  const std::size_t w_size =
      static_cast<std::size_t>(cls.output_dim) * cls.input_dim;
  std::vector<std::vector<double>> transforms(num_class_samples,
                                              std::vector<double>(w_size));
  for (int s = 0; s < num_class_samples; ++s) {
    CounterRng rng(substream(seed, 0xC1A55), s);
    double norm = 0.0;
    for (auto& w : transforms[s]) {
      w = rng.normal();
      norm += w * w;
    }
    norm = std::sqrt(norm);
    for (auto& w : transforms[s]) w = w / norm * cls.norm_cap;
  }

  // Embedded anchors per transform, flattened n x d.
  std::vector<std::vector<double>> embedded(num_class_samples);
  std::vector<double> tmp;
  for (int s = 0; s < num_class_samples; ++s) {
    embedded[s].resize(static_cast<std::size_t>(batch.n) * cls.output_dim);
    for (int j = 0; j < batch.n; ++j) {
      apply_transform(transforms[s], cls.output_dim, cls.input_dim,
                      batch.anchor(j), tmp);
      std::copy(tmp.begin(), tmp.end(),
                embedded[s].begin() + static_cast<std::size_t>(j) * cls.output_dim);
    }
  }

  std::vector<double> left_vals(num_sigma_draws), right_vals(num_sigma_draws);
  const bool par = exec == Exec::OpenMP;
#pragma omp parallel for schedule(static) if (par)
  for (long long t = 0; t < num_sigma_draws; ++t) {
    CounterRng rng(seed, t);
    std::vector<double> sj(batch.n);
    for (auto& s : sj) s = rng.bernoulli(0.5) ? 1.0 : -1.0;
    std::vector<double> sjt(static_cast<std::size_t>(batch.n) * cls.output_dim);
    for (auto& s : sjt) s = rng.bernoulli(0.5) ? 1.0 : -1.0;

    double left_best = -1e300, right_best = -1e300;
    for (int s = 0; s < num_class_samples; ++s) {
      double left = 0.0, right = 0.0;
      for (int j = 0; j < batch.n; ++j) {
        const double* f =
            embedded[s].data() + static_cast<std::size_t>(j) * cls.output_dim;
        left += sj[j] * loss.fn({f, static_cast<std::size_t>(loss.arity)});
        for (int d2 = 0; d2 < cls.output_dim; ++d2)
          right += sjt[static_cast<std::size_t>(j) * cls.output_dim + d2] * f[d2];
      }
      left_best = std::max(left_best, left);
      right_best = std::max(right_best, right);
    }
    left_vals[t] = left_best;
    right_vals[t] = right_best;
  }

  const auto mean_se = [&](const std::vector<double>& vals) {
    double mean = 0.0;
    for (double v : vals) mean += v;
    mean /= vals.size();
    double var = 0.0;
    for (double v : vals) var += (v - mean) * (v - mean);
    var /= (vals.size() - 1);
    return std::pair<double, double>{mean, std::sqrt(var / vals.size())};
  };
  ContractionReport report;
  const auto [lm, lse] = mean_se(left_vals);
  const auto [rm, rse] = mean_se(right_vals);
  report.left = lm;
  report.left_se = lse;
  report.right = rm;
  report.right_se = rse;
  report.lipschitz = loss.lipschitz;
  const double rhs = std::sqrt(2.0) * loss.lipschitz * rm;
  const double slack = 4.0 * (lse + std::sqrt(2.0) * loss.lipschitz * rse);
  report.holds = lm <= rhs + slack;
  return report;
}

}  // namespace paclab
