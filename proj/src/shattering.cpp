#include "paclab/shattering.hpp"

#include <algorithm>
#include <bit>

#include "paclab/rng.hpp"

namespace paclab {

namespace {

constexpr std::uint64_t kSaturated = ~std::uint64_t{0};

std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  return (kSaturated - a < b) ? kSaturated : a + b;
}

constexpr int kMaxUniverse = 512;

/// Pascal triangle with saturating entries; row n holds C(n, k).
const std::vector<std::vector<std::uint64_t>>& pascal_table() {
  static const auto table = [] {
    std::vector<std::vector<std::uint64_t>> t(kMaxUniverse + 1);
    for (int n = 0; n <= kMaxUniverse; ++n) {
      t[n].assign(n + 1, 1);
      for (int k = 1; k < n; ++k) t[n][k] = sat_add(t[n - 1][k - 1], t[n - 1][k]);
    }
    return t;
  }();
  return table;
}

std::uint64_t choose(int n, int k) {
  if (k < 0 || k > n) return 0;
  return pascal_table()[n][k];
}

/// Lexicographic unranking of the index-th k-combination of {0..n-1}.
void nth_combination(int n, int k, std::uint64_t index, std::vector<int>& out) {
  out.clear();
  int x = 0;
  for (int slot = k; slot > 0; --slot) {
    while (true) {
      const std::uint64_t block = choose(n - 1 - x, slot - 1);
      if (index < block) break;
      index -= block;
      ++x;
    }
    out.push_back(x++);
  }
}

}  // namespace

RealizabilityResult is_realizable_metric(const Dataset& dataset,
                                         std::span<const LabeledSample> samples) {
  const PairOrderDigraph graph = build_pair_digraph(dataset, samples);
  RealizabilityResult result;
  if (graph.topological_ranks().has_value()) {
    result.realizable = true;
    result.certificate = construct_metric_for_labeling(dataset, samples);
    return result;
  }
  result.realizable = false;
  for (int node : graph.find_cycle()) result.cycle.push_back(graph.pair_of(node));
  return result;
}

MetricTable construct_metric_for_labeling(const Dataset& dataset,
                                          std::span<const LabeledSample> samples) {
  const PairOrderDigraph graph = build_pair_digraph(dataset, samples);
  const auto ranks = graph.topological_ranks();
  if (!ranks)
    throw std::invalid_argument(
        "construct_metric_for_labeling: comparison digraph has a cycle");
  const int n = dataset.size;
  const int n_pairs = graph.n_pairs();
  // Rank r of C(N,2) maps to N + r * N/(P-1): strictly increasing, all values
  // inside [N,2N], where every triangle inequality holds automatically.
  const double step = n_pairs > 1 ? static_cast<double>(n) / (n_pairs - 1) : 0.0;
  MetricTable table(n);
  for (int node = 0; node < n_pairs; ++node) {
    const auto [i, j] = graph.pair_of(node);
    table.set(i, j, n + (*ranks)[node] * step);
  }
  return table;
}

std::vector<TripletQuery> consecutive_pair_family(int N) {
  if (N < 3) throw std::invalid_argument("consecutive_pair_family: need N >= 3");
  std::vector<TripletQuery> family;
  for (PointId i = 0; i + 2 < N; ++i)
    for (PointId j = i + 1; j + 1 < N; ++j) family.push_back({i, j, j + 1});
  return family;
}

std::vector<TripletQuery> shattering_embedding_queries(int N, int d) {
  if (d < 2 || d >= N)
    throw std::invalid_argument("shattering_embedding_queries: need 2 <= d < N");
  std::vector<TripletQuery> family;
  const int anchors = N - d;
  const PointId y1 = N - d;  // y_j sits at id N-d+j-1
  for (int i = 0; i < anchors; ++i)
    for (int j = 2; j <= d; ++j) family.push_back({i, y1, N - d + j - 1});
  return family;
}

Embedding construct_shattering_embedding(int N, int d, double p,
                                         std::span<const std::uint8_t> bits) {
  if (d < 2 || d >= N)
    throw std::invalid_argument("construct_shattering_embedding: need 2 <= d < N");
  if (!(p > 0.0))
    throw std::invalid_argument("construct_shattering_embedding: need p > 0");
  const int anchors = N - d;
  if (bits.size() != static_cast<std::size_t>(anchors) * (d - 1))
    throw std::invalid_argument(
        "construct_shattering_embedding: need (N-d)*(d-1) label bits");
  Embedding e(N, d, p);
  for (int i = 0; i < anchors; ++i) {
    e.set_coord(i, 0, 0.5);
    for (int j = 2; j <= d; ++j) {
      const std::uint8_t b = bits[static_cast<std::size_t>(i) * (d - 1) + (j - 2)];
      if (b > 1)
        throw std::invalid_argument("construct_shattering_embedding: bits must be 0/1");
      e.set_coord(i, j - 1, b);
    }
  }
  for (int j = 1; j <= d; ++j) e.set_coord(N - d + j - 1, j - 1, 1.0);
  return e;
}

std::optional<ForcingCycle> find_forcing_cycle(std::span<const TripletQuery> queries,
                                               int N) {
  // Per-anchor undirected graph on candidate points; any cycle forces the
  // unrealizable circular ordering.
  std::vector<std::vector<std::pair<PointId, PointId>>> edges_of(N);
  for (const auto& q : queries) {
    check_query(N, q);
    const PointId a = std::min(q.first, q.second);
    const PointId b = std::max(q.first, q.second);
    auto& edges = edges_of[q.anchor];
    if (std::find(edges.begin(), edges.end(), std::make_pair(a, b)) == edges.end())
      edges.push_back({a, b});
  }
  for (PointId anchor = 0; anchor < N; ++anchor) {
    const auto& edges = edges_of[anchor];
    if (edges.empty()) continue;
    std::vector<std::vector<PointId>> adj(N);
    for (auto [a, b] : edges) {
      adj[a].push_back(b);
      adj[b].push_back(a);
    }
    std::vector<int> parent(N, -2);  // -2 unvisited, -1 root
    for (PointId root = 0; root < N; ++root) {
      if (parent[root] != -2 || adj[root].empty()) continue;
      parent[root] = -1;
      std::vector<PointId> stack{root};
      while (!stack.empty()) {
        const PointId v = stack.back();
        stack.pop_back();
        for (PointId w : adj[v]) {
          if (w == parent[v]) continue;
          if (parent[w] == -2) {
            parent[w] = v;
            stack.push_back(w);
          } else {
            // Back edge v-w: walk both tails up to their meeting point.
            std::vector<PointId> pv{v}, pw{w};
            for (PointId u = v; u != root && parent[u] >= 0;) pv.push_back(u = parent[u]);
            for (PointId u = w; u != root && parent[u] >= 0;) pw.push_back(u = parent[u]);
            // Trim the common suffix to the lowest common ancestor.
            while (pv.size() > 1 && pw.size() > 1 &&
                   pv[pv.size() - 2] == pw[pw.size() - 2]) {
              pv.pop_back();
              pw.pop_back();
            }
            // Ring: v .. lca (tree path), then back down lca .. w, closed by
            // the non-tree edge w-v.
            std::vector<PointId> ring(pv.begin(), pv.end());
            ring.insert(ring.end(), pw.rbegin() + 1, pw.rend());
            ForcingCycle cycle;
            cycle.anchor = anchor;
            cycle.ring = ring;
            const int t = static_cast<int>(ring.size());
            for (int i = 0; i < t; ++i)
              cycle.labeling.push_back(
                  {{anchor, ring[i], ring[(i + 1) % t]}, Label::CloserFirst, false});
            return cycle;
          }
        }
      }
    }
  }
  return std::nullopt;
}

std::vector<TripletQuery> query_universe(int N) {
  std::vector<TripletQuery> universe;
  for (PointId a = 0; a < N; ++a)
    for (PointId b = 0; b < N; ++b) {
      if (b == a) continue;
      for (PointId c = b + 1; c < N; ++c) {
        if (c == a) continue;
        universe.push_back({a, b, c});
      }
    }
  return universe;
}

RealizabilityOracle metric_realizability_oracle(const Dataset& dataset) {
  const int n = dataset.size;
  return [n](const std::vector<LabeledSample>& samples) {
    PairOrderDigraph graph(n);
    for (const auto& s : samples) graph.add_constraint(s);
    return graph.topological_ranks().has_value();
  };
}

ShatteringReport check_shattered(std::vector<TripletQuery> queries,
                                 const RealizabilityOracle& oracle, Exec exec) {
  const int k = static_cast<int>(queries.size());
  if (k > 62) throw refusal_error("check_shattered: too many queries to enumerate");
  ShatteringReport report;
  report.queries = queries;
  const std::uint64_t total = std::uint64_t{1} << k;
  std::uint64_t first_fail = total;
  const bool par = exec == Exec::OpenMP;
#pragma omp parallel if (par)
  {
    std::vector<LabeledSample> samples(k);
    std::uint64_t local_fail = total;
#pragma omp for schedule(static) nowait
    for (long long m = 0; m < static_cast<long long>(total); ++m) {
      for (int i = 0; i < k; ++i)
        samples[i] = {queries[i],
                      (m >> i) & 1 ? Label::CloserSecond : Label::CloserFirst,
                      false};
      if (!oracle(samples)) local_fail = std::min(local_fail, static_cast<std::uint64_t>(m));
    }
#pragma omp critical
    first_fail = std::min(first_fail, local_fail);
  }
  report.oracle_calls = total;
  report.shattered = first_fail == total;
  if (!report.shattered) {
    std::vector<Label> witness(k);
    for (int i = 0; i < k; ++i)
      witness[i] = (first_fail >> i) & 1 ? Label::CloserSecond : Label::CloserFirst;
    report.witness_labeling = witness;
  }
  return report;
}

VcReport brute_force_vcdim(const Dataset& dataset, const RealizabilityOracle& oracle,
                           std::uint64_t budget, Exec exec) {
  const auto universe = query_universe(dataset.size);
  const int u = static_cast<int>(universe.size());
  if (u > kMaxUniverse)
    throw refusal_error("brute_force_vcdim: query universe too large");
  VcReport report;
  report.universe_size = u;
  std::vector<int> best_combo;
  const bool par = exec == Exec::OpenMP;
  for (int k = 1; k <= u; ++k) {
    if (k > 62) throw refusal_error("brute_force_vcdim: level too deep to enumerate");
    const std::uint64_t n_combos = choose(u, k);
    const std::uint64_t labelings = std::uint64_t{1} << k;
    if (n_combos == kSaturated || n_combos > budget / labelings)
      throw refusal_error("brute_force_vcdim: level " + std::to_string(k) +
                          " exceeds the oracle-call budget");
    std::vector<char> shattered(n_combos, 0);
    std::uint64_t calls = 0;
#pragma omp parallel if (par)
    {
      std::vector<int> combo;
      std::vector<LabeledSample> samples(k);
      std::uint64_t local_calls = 0;
#pragma omp for schedule(dynamic, 64) nowait
      for (long long ci = 0; ci < static_cast<long long>(n_combos); ++ci) {
        nth_combination(u, k, ci, combo);
        bool all_ok = true;
        for (std::uint64_t m = 0; m < labelings && all_ok; ++m) {
          for (int i = 0; i < k; ++i)
            samples[i] = {universe[combo[i]],
                          (m >> i) & 1 ? Label::CloserSecond : Label::CloserFirst,
                          false};
          ++local_calls;
          all_ok = oracle(samples);
        }
        shattered[ci] = all_ok;
      }
#pragma omp atomic
      calls += local_calls;
    }
    report.oracle_calls += calls;
    const auto hit = std::find(shattered.begin(), shattered.end(), char{1});
    if (hit == shattered.end()) break;  // no k-set shatters => VC = k-1
    report.vc = k;
    std::vector<int> combo;
    nth_combination(u, k, static_cast<std::uint64_t>(hit - shattered.begin()), combo);
    best_combo = combo;
  }
  for (int qi : best_combo) report.max_shattered_set.push_back(universe[qi]);
  return report;
}

// ---- finite-class VC algebra ----

namespace {

std::vector<std::uint32_t> normalized_sets(const LabelClass& cls) {
  auto sets = cls.sets;
  std::sort(sets.begin(), sets.end());
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  return sets;
}

bool subset_shattered(const std::vector<std::uint32_t>& sets,
                      const std::vector<int>& positions,
                      std::vector<std::uint32_t>& seen, std::uint32_t stamp) {
  const int k = static_cast<int>(positions.size());
  const std::uint32_t want = std::uint32_t{1} << k;
  std::uint32_t found = 0;
  for (std::uint32_t s : sets) {
    std::uint32_t key = 0;
    for (int i = 0; i < k; ++i) key |= ((s >> positions[i]) & 1u) << i;
    if (seen[key] != stamp) {
      seen[key] = stamp;
      if (++found == want) return true;
    }
  }
  return false;
}

}  // namespace

int exact_vc(const LabelClass& cls) {
  if (cls.universe < 1 || cls.universe > 20)
    throw refusal_error("exact_vc: universe must have 1..20 elements");
  if (cls.sets.empty()) throw std::invalid_argument("exact_vc: empty class");
  const auto sets = normalized_sets(cls);
  const int u = cls.universe;
  std::vector<std::uint32_t> seen;
  std::uint32_t stamp = 0;
  std::vector<int> positions;
  int vc = 0;
  for (int k = 1; k <= u; ++k) {
    if ((std::uint64_t{1} << k) > sets.size()) break;  // cannot shatter k points
    seen.assign(std::size_t{1} << k, 0);
    stamp = 0;
    bool any = false;
    // Gosper's hack over all k-subsets of the universe.
    for (std::uint32_t mask = (std::uint32_t{1} << k) - 1;
         mask < (std::uint32_t{1} << u);) {
      positions.clear();
      for (int b = 0; b < u; ++b)
        if ((mask >> b) & 1) positions.push_back(b);
      if (subset_shattered(sets, positions, seen, ++stamp)) {
        any = true;
        break;
      }
      const std::uint32_t c = mask & -mask;
      const std::uint32_t r = mask + c;
      mask = (((r ^ mask) >> 2) / c) | r;
    }
    if (!any) break;
    vc = k;
  }
  return vc;
}

VcAlgebraReport vc_algebra_check(const LabelClass& a, const LabelClass& b) {
  if (a.universe != b.universe)
    throw std::invalid_argument("vc_algebra_check: classes share one universe");
  const std::uint32_t full = a.universe == 32
                                 ? ~std::uint32_t{0}
                                 : (std::uint32_t{1} << a.universe) - 1;
  VcAlgebraReport report;
  report.vc_a = exact_vc(a);
  report.vc_b = exact_vc(b);

  LabelClass neg{a.universe, {}};
  for (std::uint32_t s : a.sets) neg.sets.push_back(s ^ full);
  report.vc_neg_a = exact_vc(neg);

  LabelClass uni{a.universe, {}}, inter{a.universe, {}};
  for (std::uint32_t s : a.sets)
    for (std::uint32_t t : b.sets) {
      uni.sets.push_back(s | t);
      inter.sets.push_back(s & t);
    }
  report.vc_union = exact_vc(uni);
  report.vc_intersection = exact_vc(inter);

  report.negation_ok = report.vc_neg_a == report.vc_a;
  report.union_ok = report.vc_union <= report.vc_a + report.vc_b + 1;
  report.intersection_ok = report.vc_intersection <= report.vc_a + report.vc_b + 1;
  return report;
}

VcAlgebraTrialSummary vc_algebra_trials(int universe, int trials,
                                        std::uint64_t seed) {
  if (universe < 1 || universe > 20)
    throw refusal_error("vc_algebra_trials: universe must have 1..20 elements");
  VcAlgebraTrialSummary summary;
  summary.trials = trials;
  const std::uint32_t space = std::uint32_t{1} << universe;
  for (int t = 0; t < trials; ++t) {
    CounterRng rng(seed, t);
    const auto random_class = [&] {
      LabelClass cls{universe, {}};
      const int size = 1 + static_cast<int>(rng.below(15));
      for (int i = 0; i < size; ++i) cls.sets.push_back(rng.below(space));
      return cls;
    };
    if (!vc_algebra_check(random_class(), random_class()).pass())
      ++summary.violations;
  }
  return summary;
}

}  // namespace paclab
