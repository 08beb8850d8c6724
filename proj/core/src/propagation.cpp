#include "ripple/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>

#include "ripple/errors.hpp"
#include "ripple/util.hpp"

namespace ripple {

UndirectedGraph UndirectedGraph::from_edges(int n_nodes,
                                            const std::vector<std::pair<int, int>>& edges) {
  UndirectedGraph g;
  g.n_nodes = n_nodes;
  g.adj.resize(static_cast<std::size_t>(n_nodes));
  for (const auto& [a, b] : edges) {
    if (a < 0 || b < 0 || a >= n_nodes || b >= n_nodes) {
      throw ValidationError("edge endpoint out of range");
    }
    if (a == b) continue;
    g.adj[static_cast<std::size_t>(a)].push_back(b);
    g.adj[static_cast<std::size_t>(b)].push_back(a);
  }
  for (auto& list : g.adj) {
    std::sort(list.begin(), list.end());
    list.erase(std::unique(list.begin(), list.end()), list.end());
  }
  return g;
}

namespace {

// Nodes at shortest-path distance exactly `order` (Within: in [1, order])
// from `src`, ascending.
std::vector<int> neighbors_at(const UndirectedGraph& g, int src, int order,
                              NeighborMode mode, std::vector<int>& dist_scratch) {
  std::vector<int>& dist = dist_scratch;
  std::fill(dist.begin(), dist.end(), -1);
  dist[static_cast<std::size_t>(src)] = 0;
  std::vector<int> frontier{src};
  std::vector<int> out;
  for (int d = 1; d <= order && !frontier.empty(); ++d) {
    std::vector<int> next;
    for (int u : frontier) {
      for (int v : g.adj[static_cast<std::size_t>(u)]) {
        if (dist[static_cast<std::size_t>(v)] == -1) {
          dist[static_cast<std::size_t>(v)] = d;
          next.push_back(v);
          if (mode == NeighborMode::Within || d == order) out.push_back(v);
        }
      }
    }
    frontier = std::move(next);
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

NormalizedAdjacency order_adjacency(const UndirectedGraph& graph, int order,
                                    NeighborMode mode, int threads) {
  if (order < 1 || order > 3) throw ValidationError("order must be in [1, 3]");
  std::size_t n = static_cast<std::size_t>(graph.n_nodes);
  NormalizedAdjacency s;
  s.order = order;
  s.rows.resize(n);

  std::vector<std::vector<int>> neighbor_sets(n);
  parallel_for(n, threads, [&](std::size_t u) {
    thread_local std::vector<int> dist;
    if (dist.size() != n) dist.assign(n, -1);
    neighbor_sets[u] =
        neighbors_at(graph, static_cast<int>(u), order, mode, dist);
  });

  std::vector<double> inv_sqrt_deg(n, 0.0);
  for (std::size_t u = 0; u < n; ++u) {
    std::size_t deg = neighbor_sets[u].size();
    if (deg > 0) inv_sqrt_deg[u] = 1.0 / std::sqrt(static_cast<double>(deg));
  }
  for (std::size_t u = 0; u < n; ++u) {
    s.rows[u].reserve(neighbor_sets[u].size());
    for (int v : neighbor_sets[u]) {
      s.rows[u].emplace_back(v, inv_sqrt_deg[u] * inv_sqrt_deg[static_cast<std::size_t>(v)]);
    }
  }
  return s;
}

EmbeddingMatrix propagate(const EmbeddingMatrix& m, const UndirectedGraph& graph,
                          const PropagationConfig& config, int threads) {
  if (m.n_rows() != static_cast<std::size_t>(graph.n_nodes)) {
    throw ValidationError("embedding rows do not match graph nodes");
  }
  if (config.max_order < 1 || config.max_order > 3) {
    throw ValidationError("max_order must be in [1, 3]");
  }
  if (config.w < 0.0) throw ValidationError("w must be non-negative");

  std::vector<NormalizedAdjacency> orders;
  orders.reserve(static_cast<std::size_t>(config.max_order));
  for (int i = 1; i <= config.max_order; ++i) {
    orders.push_back(order_adjacency(graph, i, config.neighbor_mode, threads));
  }

  std::size_t n = m.n_rows();
  if (m.is_sparse()) {
    EmbeddingMatrix out = EmbeddingMatrix::sparse(n, m.dim(), m.provider());
    parallel_for(n, threads, [&](std::size_t u) {
      std::map<std::size_t, double> acc;
      for (const auto& [col, v] : m.sparse_row(u)) acc[col] = v;
      for (const NormalizedAdjacency& s : orders) {
        for (const auto& [nbr, weight] : s.rows[u]) {
          for (const auto& [col, v] : m.sparse_row(static_cast<std::size_t>(nbr))) {
            acc[col] += config.w * weight * v;
          }
        }
      }
      std::vector<std::pair<std::size_t, double>> row(acc.begin(), acc.end());
      out.set_sparse_row(u, std::move(row));
    });
    return out;
  }

  EmbeddingMatrix out = EmbeddingMatrix::dense(n, m.dim(), m.provider());
  std::size_t dim = m.dim();
  const std::vector<double>& src = m.dense_values();
  parallel_for(n, threads, [&](std::size_t u) {
    std::vector<double> row(src.begin() + static_cast<std::ptrdiff_t>(u * dim),
                            src.begin() + static_cast<std::ptrdiff_t>((u + 1) * dim));
    for (const NormalizedAdjacency& s : orders) {
      for (const auto& [nbr, weight] : s.rows[u]) {
        const double* p = src.data() + static_cast<std::size_t>(nbr) * dim;
        double scale = config.w * weight;
        for (std::size_t k = 0; k < dim; ++k) row[k] += scale * p[k];
      }
    }
    out.set_dense_row(u, row);
  });
  return out;
}

std::vector<double> similarity_weighting(int query_id, const UndirectedGraph& graph,
                                         const std::vector<double>& base_similarities) {
  if (query_id < 0 || query_id >= graph.n_nodes) {
    throw ValidationError("query_id out of range");
  }
  std::vector<double> adjusted = base_similarities;
  for (int j : graph.adj[static_cast<std::size_t>(query_id)]) {
    if (static_cast<std::size_t>(j) < adjusted.size()) {
      adjusted[static_cast<std::size_t>(j)] = 1.0 - 0.5 * (1.0 - adjusted[static_cast<std::size_t>(j)]);
    }
  }
  return adjusted;
}

}  // namespace ripple
