#include "topopc/mst.hpp"

#include <algorithm>
#include <limits>

namespace topopc {

std::vector<MstEdge> euclidean_mst(const PointCloud& pc) {
    require_nonempty(pc, "euclidean_mst");
    const std::size_t n = pc.size();
    std::vector<MstEdge> edges;
    if (n < 2) return edges;
    edges.reserve(n - 1);

    std::vector<bool> in_tree(n, false);
    std::vector<double> key(n, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> via(n, 0);  // tree vertex attaining the key

    in_tree[0] = true;
    for (std::size_t v = 1; v < n; ++v) {
        key[v] = (pc[v] - pc[0]).norm();
        via[v] = 0;
    }

    for (std::size_t step = 1; step < n; ++step) {
        std::size_t best = static_cast<std::size_t>(-1);
        for (std::size_t v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            if (best == static_cast<std::size_t>(-1) || key[v] < key[best]) best = v;
        }
        in_tree[best] = true;
        const std::size_t a = std::min(best, via[best]);
        const std::size_t b = std::max(best, via[best]);
        edges.push_back({a, b, key[best]});

        for (std::size_t v = 0; v < n; ++v) {
            if (in_tree[v]) continue;
            const double d = (pc[v] - pc[best]).norm();
            // Strict comparison keeps the smallest-index tree vertex on ties.
            if (d < key[v] || (d == key[v] && best < via[v])) {
                key[v] = d;
                via[v] = best;
            }
        }
    }

    std::sort(edges.begin(), edges.end(), [](const MstEdge& a, const MstEdge& b) {
        return std::tie(a.weight, a.i, a.j) < std::tie(b.weight, b.i, b.j);
    });
    return edges;
}

DisjointSets::DisjointSets(std::size_t n) : parent_(n), size_(n, 1), components_(n) {
    for (std::size_t i = 0; i < n; ++i) parent_[i] = i;
}

std::size_t DisjointSets::find(std::size_t x) {
    while (parent_[x] != x) {
        parent_[x] = parent_[parent_[x]];
        x = parent_[x];
    }
    return x;
}

bool DisjointSets::unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b] || (size_[a] == size_[b] && b < a)) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    --components_;
    return true;
}

}  // namespace topopc
