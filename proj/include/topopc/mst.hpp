#pragma once

#include <cstddef>
#include <vector>

#include "topopc/point_cloud.hpp"

namespace topopc {

struct MstEdge {
    std::size_t i;  // i < j
    std::size_t j;
    double weight;  // Euclidean distance
};

/// Exact Euclidean MST of the complete graph, Prim O(n^2). Deterministic under
/// ties: the frontier vertex with the smallest (key, index) is taken, and each
/// key remembers the smallest-index tree vertex attaining it. Edges are
/// returned sorted by (weight, i, j).
std::vector<MstEdge> euclidean_mst(const PointCloud& pc);

/// Union-find with path halving; union by size, ties keep the smaller root.
class DisjointSets {
public:
    explicit DisjointSets(std::size_t n);
    std::size_t find(std::size_t x);
    bool unite(std::size_t a, std::size_t b);  // false if already joined
    std::size_t component_count() const { return components_; }

private:
    std::vector<std::size_t> parent_;
    std::vector<std::size_t> size_;
    std::size_t components_;
};

}  // namespace topopc
