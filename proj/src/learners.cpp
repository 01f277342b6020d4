#include "paclab/learners.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "paclab/rng.hpp"

namespace paclab {

FiniteHypothesisClass::FiniteHypothesisClass(int universe,
                                             std::vector<std::vector<Label>> rows)
    : universe_(universe), rows_(std::move(rows)) {
  if (universe < 1)
    throw std::invalid_argument("FiniteHypothesisClass: universe must be >= 1");
  if (rows_.empty())
    throw std::invalid_argument("FiniteHypothesisClass: class must be nonempty");
  std::set<std::vector<Label>> distinct;
  for (const auto& r : rows_) {
    if (static_cast<int>(r.size()) != universe)
      throw std::invalid_argument("FiniteHypothesisClass: row arity mismatch");
    if (!distinct.insert(r).second)
      throw std::invalid_argument("FiniteHypothesisClass: duplicate row");
  }
}

FiniteHypothesisClass FiniteHypothesisClass::power_set(int d) {
  if (d < 1 || d > 22)
    throw std::invalid_argument("FiniteHypothesisClass::power_set: d in 1..22");
  std::vector<std::vector<Label>> rows;
  rows.reserve(std::size_t{1} << d);
  for (std::uint32_t h = 0; h < (std::uint32_t{1} << d); ++h) {
    std::vector<Label> row(d);
    for (int q = 0; q < d; ++q)
      row[q] = (h >> q) & 1 ? Label::CloserSecond : Label::CloserFirst;
    rows.push_back(std::move(row));
  }
  return FiniteHypothesisClass(d, std::move(rows));
}

LearnerOutput erm(const FiniteHypothesisClass& cls, const SampleSet& sample,
                  Exec exec) {
  LearnerOutput out;
  if (sample.draws.empty()) {
    out.empty_sample = true;
    return out;
  }
  // Per-query label counts make each hypothesis an O(universe) lookup; the
  // scan over the class stays exhaustive.
  std::vector<long long> closer_first(cls.universe(), 0);
  std::vector<long long> closer_second(cls.universe(), 0);
  for (const auto& s : sample.draws) {
    if (s.query < 0 || s.query >= cls.universe())
      throw std::invalid_argument("erm: sample query outside the class universe");
    (s.label == Label::CloserFirst ? closer_first : closer_second)[s.query]++;
  }
  const int m = cls.size();
  std::vector<long long> cost(m, 0);
  const bool par = exec == Exec::OpenMP;
#pragma omp parallel for schedule(static) if (par)
  for (int h = 0; h < m; ++h) {
    const auto& row = cls.row(h);
    long long c = 0;
    for (int q = 0; q < cls.universe(); ++q)
      c += row[q] == Label::CloserFirst ? closer_second[q] : closer_first[q];
    cost[h] = c;
  }
  out.hypothesis = static_cast<int>(
      std::min_element(cost.begin(), cost.end()) - cost.begin());
  out.disagreements = cost[out.hypothesis];
  return out;
}

TwoPointTarget bayes_majority(const SampleSet& sample) {
  long long first = 0, second = 0;
  for (const auto& s : sample.draws) {
    if (s.query != 1) continue;
    (s.label == Label::CloserFirst ? first : second)++;
  }
  return first >= second ? TwoPointTarget::H1 : TwoPointTarget::H2;
}

namespace {

double lp_norm(std::span<const double> diff, double p) {
  double s = 0.0;
  for (double v : diff) s += std::pow(std::fabs(v), p);
  return std::pow(s, 1.0 / p);
}

/// d||v||_p / dv_t = sign(v_t) |v_t|^{p-1} / ||v||_p^{p-1}; zero vector gets a
/// zero subgradient.
void lp_norm_grad(std::span<const double> diff, double p, double norm,
                  std::vector<double>& out) {
  out.assign(diff.size(), 0.0);
  if (norm <= 1e-300) return;
  for (std::size_t t = 0; t < diff.size(); ++t) {
    const double a = std::fabs(diff[t]);
    if (a == 0.0) continue;
    const double mag = p == 2.0 ? a / norm
                                : std::pow(a, p - 1.0) / std::pow(norm, p - 1.0);
    out[t] = diff[t] > 0 ? mag : -mag;
  }
}

}  // namespace

double hinge_loss(const Embedding& e, std::span<const LabeledSample> samples,
                  double margin) {
  double loss = 0.0;
  for (const auto& s : samples) {
    check_query(e.size(), s.query);
    const double g = lp_distance(e, s.query.anchor, s.query.first) -
                     lp_distance(e, s.query.anchor, s.query.second);
    if (!std::isfinite(g)) return std::numeric_limits<double>::quiet_NaN();
    loss += std::max(0.0, margin - sign_of(s.label) * g);
  }
  return loss;
}

double hinge_loss_grad(const Embedding& e, std::span<const LabeledSample> samples,
                       double margin, std::vector<double>& grad) {
  const int d = e.dim();
  const double p = e.exponent();
  grad.assign(static_cast<std::size_t>(e.size()) * d, 0.0);
  double loss = 0.0;
  std::vector<double> diff(d), gnorm(d);
  for (const auto& s : samples) {
    check_query(e.size(), s.query);
    const auto ax = e.row(s.query.anchor);
    const auto fx = e.row(s.query.first);
    const auto sx = e.row(s.query.second);
    for (int t = 0; t < d; ++t) diff[t] = ax[t] - fx[t];
    const double na = lp_norm(diff, p);
    std::vector<double> ga(d);
    lp_norm_grad(diff, p, na, ga);
    for (int t = 0; t < d; ++t) diff[t] = ax[t] - sx[t];
    const double nb = lp_norm(diff, p);
    std::vector<double> gb(d);
    lp_norm_grad(diff, p, nb, gb);

    const int sgn = sign_of(s.label);
    if (!std::isfinite(na - nb)) return std::numeric_limits<double>::quiet_NaN();
    const double h = margin - sgn * (na - nb);
    if (h <= 0.0) continue;
    loss += h;
    // d h / d coords: -sgn * (d na - d nb) routed through the three points.
    for (int t = 0; t < d; ++t) {
      const double da = -sgn * ga[t];
      const double db = sgn * gb[t];
      grad[static_cast<std::size_t>(s.query.anchor) * d + t] += da + db;
      grad[static_cast<std::size_t>(s.query.first) * d + t] -= da;
      grad[static_cast<std::size_t>(s.query.second) * d + t] -= db;
    }
  }
  return loss;
}

TrainResult train_embedding(std::span<const LabeledSample> samples, int N, int d,
                            double p, const OptimizerConfig& config) {
  if (!(p >= 1.0))
    throw std::invalid_argument("train_embedding: need p >= 1 for subgradients");
  CounterRng rng(config.seed, 0);
  std::vector<double> coords(static_cast<std::size_t>(N) * d);
  for (auto& c : coords) c = rng.uniform(-1.0, 1.0);
  Embedding e(N, d, p, coords);
  std::vector<double> grad;
  double loss = hinge_loss(e, samples, config.margin);
  int step = 0;
  for (; step < config.steps && loss > 0.0; ++step) {
    loss = hinge_loss_grad(e, samples, config.margin, grad);
    if (loss == 0.0) break;
    const double lr = config.learning_rate / (1.0 + config.decay * step);
    for (int v = 0; v < N; ++v)
      for (int t = 0; t < d; ++t)
        e.set_coord(v, t, e.coord(v, t) - lr * grad[static_cast<std::size_t>(v) * d + t]);
    loss = hinge_loss(e, samples, config.margin);
    if (!std::isfinite(loss))
      throw optimizer_error("train_embedding: loss diverged at step " +
                            std::to_string(step) + " (seed " +
                            std::to_string(config.seed) + ", lr " +
                            std::to_string(lr) + ")");
  }
  return {std::move(e), loss, step, 1};
}

TrainResult train_embedding_restarts(std::span<const LabeledSample> samples,
                                     int N, int d, double p,
                                     const OptimizerConfig& config) {
  if (config.restarts < 1)
    throw std::invalid_argument("train_embedding_restarts: need >= 1 restart");
  TrainResult best{Embedding(N, d, p), 0.0, 0, 0};
  bool have = false;
  int ran = 0;
  for (int r = 0; r < config.restarts; ++r) {
    OptimizerConfig c = config;
    c.seed = substream(config.seed, r);
    TrainResult run = train_embedding(samples, N, d, p, c);
    ran = r + 1;
    if (!have || run.loss < best.loss) {
      best = std::move(run);
      have = true;
    }
    if (best.loss == 0.0) break;
  }
  best.restarts_run = ran;
  return best;
}

}  // namespace paclab
