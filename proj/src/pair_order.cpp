#include "paclab/pair_order.hpp"

#include <algorithm>
#include <deque>

namespace paclab {

PairOrderDigraph::PairOrderDigraph(int n_points) : n_points_(n_points) {
  if (n_points < 2)
    throw std::invalid_argument("PairOrderDigraph: need at least 2 points");
  n_pairs_ = n_points * (n_points - 1) / 2;
  pairs_.reserve(n_pairs_);
  for (PointId i = 0; i < n_points; ++i)
    for (PointId j = i + 1; j < n_points; ++j) pairs_.push_back({i, j});
  out_.assign(n_pairs_, {});
}

void PairOrderDigraph::add_constraint(const LabeledSample& sample) {
  check_query(n_points_, sample.query);
  const int a = pair_index(n_points_, sample.query.anchor, sample.query.first);
  const int b = pair_index(n_points_, sample.query.anchor, sample.query.second);
  // Label CloserFirst means rho(anchor,first) < rho(anchor,second).
  const int from = sample.label == Label::CloserFirst ? a : b;
  const int to = sample.label == Label::CloserFirst ? b : a;
  const auto& fwd = out_[from];
  if (std::find(fwd.begin(), fwd.end(), to) != fwd.end()) return;  // duplicate
  const auto& rev = out_[to];
  if (std::find(rev.begin(), rev.end(), from) != rev.end())
    throw contradiction_error("conflicting labels for one query");
  out_[from].push_back(to);
  ++n_edges_;
}

std::optional<std::vector<int>> PairOrderDigraph::topological_ranks() const {
  std::vector<int> indeg(n_pairs_, 0);
  for (const auto& adj : out_)
    for (int v : adj) ++indeg[v];
  std::deque<int> queue;
  for (int v = 0; v < n_pairs_; ++v)
    if (indeg[v] == 0) queue.push_back(v);
  std::vector<int> rank(n_pairs_, -1);
  int next = 0;
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    rank[v] = next++;
    for (int w : out_[v])
      if (--indeg[w] == 0) queue.push_back(w);
  }
  if (next != n_pairs_) return std::nullopt;
  return rank;
}

std::vector<int> PairOrderDigraph::find_cycle() const {
  enum : char { White, Gray, Black };
  std::vector<char> color(n_pairs_, White);
  std::vector<int> parent(n_pairs_, -1);
  // Iterative DFS; a gray->gray edge closes a cycle.
  for (int root = 0; root < n_pairs_; ++root) {
    if (color[root] != White) continue;
    std::vector<std::pair<int, std::size_t>> stack{{root, 0}};
    color[root] = Gray;
    while (!stack.empty()) {
      auto& [v, next_child] = stack.back();
      if (next_child < out_[v].size()) {
        const int w = out_[v][next_child++];
        if (color[w] == White) {
          color[w] = Gray;
          parent[w] = v;
          stack.push_back({w, 0});
        } else if (color[w] == Gray) {
          std::vector<int> cycle{w};
          for (int u = v; u != w; u = parent[u]) cycle.push_back(u);
          std::reverse(cycle.begin() + 1, cycle.end());
          cycle.push_back(w);
          return cycle;
        }
      } else {
        color[v] = Black;
        stack.pop_back();
      }
    }
  }
  return {};
}

PairOrderDigraph build_pair_digraph(const Dataset& dataset,
                                    std::span<const LabeledSample> samples) {
  PairOrderDigraph graph(dataset.size);
  for (const auto& s : samples) graph.add_constraint(s);
  return graph;
}

}  // namespace paclab
