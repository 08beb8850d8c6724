#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ripple/callgraph.hpp"
#include "ripple/embedding.hpp"

namespace ripple {

/// Neighbor set per order: exact shortest-path distance (default) or the
/// cumulative within-distance closure.
enum class NeighborMode { Exact, Within };

struct PropagationConfig {
  double w = 0.5;
  int max_order = 2;  // 1..3
  GraphKind graph_kind = GraphKind::Call;
  NeighborMode neighbor_mode = NeighborMode::Exact;
};

/// Undirected view of a call or class graph: sorted, deduplicated
/// adjacency lists without self-loops.
struct UndirectedGraph {
  int n_nodes = 0;
  std::vector<std::vector<int>> adj;

  static UndirectedGraph from_edges(int n_nodes,
                                    const std::vector<std::pair<int, int>>& edges);
};

/// Sparse symmetric D_i^{-1/2} A_i D_i^{-1/2} with zero diagonal; rows of
/// isolated nodes are empty (their D^{-1/2} entry is taken as 0).
struct NormalizedAdjacency {
  int order = 1;
  std::vector<std::vector<std::pair<int, double>>> rows;  // sorted by column
};

/// A_i over node pairs at undirected shortest-path distance exactly i
/// (Within mode: distance in [1, i]), symmetric-normalized by the A_i
/// degree matrix.
NormalizedAdjacency order_adjacency(const UndirectedGraph& graph, int order,
                                    NeighborMode mode = NeighborMode::Exact,
                                    int threads = 0);

/// M' = M + w * sum_{i=1..max_order} S_i M. Isolated nodes keep their
/// original rows. Preserves the input's storage kind and provider tag.
EmbeddingMatrix propagate(const EmbeddingMatrix& m, const UndirectedGraph& graph,
                          const PropagationConfig& config, int threads = 0);

/// Halves the cosine distance between the query and each of its order-1
/// neighbors: adjusted[j] = 1 - 0.5 * (1 - base[j]); other entries (and
/// the query's own slot) pass through.
std::vector<double> similarity_weighting(int query_id, const UndirectedGraph& graph,
                                         const std::vector<double>& base_similarities);

}  // namespace ripple
