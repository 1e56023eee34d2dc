#pragma once

#include <cstdint>
#include <vector>

namespace hhqec {

struct WeightedEdge {
    int u;
    int v;
    std::int64_t weight;
};

/// Maximum-weight matching in a general graph (Edmonds' blossom algorithm with
/// primal-dual updates, O(n^3)). With `max_cardinality`, only maximum-cardinality
/// matchings are considered. Returns mate[v] (or -1) for every vertex.
std::vector<int> max_weight_matching(int num_vertices, const std::vector<WeightedEdge>& edges,
                                     bool max_cardinality);

/// Minimum-weight perfect matching. Throws std::runtime_error if no perfect matching exists.
std::vector<int> min_weight_perfect_matching(int num_vertices, const std::vector<WeightedEdge>& edges);

}  // namespace hhqec
