// Independent brute-force oracles used only by tests. These deliberately share
// no code path with the library implementations they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <vector>

#include "topopc/persistence.hpp"
#include "topopc/point_cloud.hpp"
#include "topopc/rng.hpp"

namespace oracle {

using topopc::PersistencePair;
using topopc::Point3;
using topopc::PointCloud;

inline double brute_chamfer(const PointCloud& x, const PointCloud& y, bool squared,
                            bool mean) {
    auto dir = [&](const PointCloud& a, const PointCloud& b) {
        double s = 0.0;
        for (const auto& p : a.points) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& q : b.points) best = std::min(best, (p - q).norm());
            s += squared ? best * best : best;
        }
        return mean ? s / static_cast<double>(a.size()) : s;
    };
    return dir(x, y) + dir(y, x);
}

inline double brute_hausdorff_one_sided(const PointCloud& s, const PointCloud& s2) {
    double m = 0.0;
    for (const auto& p : s.points) {
        double best = std::numeric_limits<double>::infinity();
        for (const auto& q : s2.points) best = std::min(best, (p - q).norm());
        m = std::max(m, best);
    }
    return m;
}

inline std::vector<std::pair<std::size_t, double>> brute_knn(const PointCloud& pc,
                                                             const Point3& query,
                                                             std::size_t k,
                                                             std::size_t exclude) {
    std::vector<std::pair<double, std::size_t>> all;
    for (std::size_t i = 0; i < pc.size(); ++i) {
        if (i == exclude) continue;
        all.emplace_back((pc[i] - query).norm(), i);
    }
    std::sort(all.begin(), all.end());
    all.resize(std::min(k, all.size()));
    std::vector<std::pair<std::size_t, double>> out;
    for (auto& [d, i] : all) out.emplace_back(i, d);
    return out;
}

/// Dim-0 persistence by incremental union-find over all pairwise edges sorted
/// ascending; each merging edge emits a (0, value) pair.
inline std::vector<double> ph0_deaths_union_find(const PointCloud& pc, double scale) {
    const std::size_t n = pc.size();
    struct E {
        double v;
        std::size_t a, b;
    };
    std::vector<E> edges;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            edges.push_back({(pc[a] - pc[b]).norm() * scale, a, b});
    std::sort(edges.begin(), edges.end(),
              [](const E& x, const E& y) { return std::tie(x.v, x.a, x.b) < std::tie(y.v, y.a, y.b); });

    std::vector<std::size_t> parent(n);
    for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    std::function<std::size_t(std::size_t)> find = [&](std::size_t x) {
        return parent[x] == x ? x : parent[x] = find(parent[x]);
    };
    std::vector<double> deaths;
    for (const auto& e : edges) {
        auto ra = find(e.a), rb = find(e.b);
        if (ra == rb) continue;
        parent[ra] = rb;
        deaths.push_back(e.v);
    }
    std::sort(deaths.begin(), deaths.end());
    return deaths;
}

/// Plain left-to-right reduction of the full boundary matrix (vertices, edges,
/// triangles in filtration order). Returns (birth, death) pairs per dimension
/// with zero-persistence pairs dropped, plus essential births.
struct FullReductionResult {
    std::vector<std::pair<double, double>> dim0;  // finite
    std::vector<std::pair<double, double>> dim1;  // finite
    std::vector<double> essential_dim1_births;
    std::size_t essential_dim0 = 0;
};

inline FullReductionResult full_boundary_reduction(const topopc::VRComplex& cx) {
    const auto& simplices = cx.simplices;
    const std::size_t m = simplices.size();

    // face lookup: sorted vertex tuple -> column index
    std::map<std::vector<std::uint32_t>, std::size_t> index_of;
    for (std::size_t i = 0; i < m; ++i) {
        std::vector<std::uint32_t> key;
        for (int v = 0; v <= simplices[i].dim; ++v) key.push_back(simplices[i].vertices[v]);
        index_of[key] = i;
    }

    std::vector<std::vector<std::size_t>> cols(m);
    for (std::size_t i = 0; i < m; ++i) {
        const auto& s = simplices[i];
        if (s.dim == 0) continue;
        std::vector<std::uint32_t> verts;
        for (int v = 0; v <= s.dim; ++v) verts.push_back(s.vertices[v]);
        for (std::size_t drop = 0; drop < verts.size(); ++drop) {
            std::vector<std::uint32_t> face;
            for (std::size_t v = 0; v < verts.size(); ++v)
                if (v != drop) face.push_back(verts[v]);
            cols[i].push_back(index_of.at(face));
        }
        std::sort(cols[i].begin(), cols[i].end());
    }

    std::vector<std::ptrdiff_t> pivot_owner(m, -1);
    std::vector<bool> is_death(m, false);
    FullReductionResult res;
    for (std::size_t j = 0; j < m; ++j) {
        auto& col = cols[j];
        while (!col.empty()) {
            const std::size_t low = col.back();
            if (pivot_owner[low] < 0) break;
            const auto& other = cols[static_cast<std::size_t>(pivot_owner[low])];
            std::vector<std::size_t> merged;
            std::set_symmetric_difference(col.begin(), col.end(), other.begin(),
                                          other.end(), std::back_inserter(merged));
            col.swap(merged);
        }
        if (col.empty()) continue;
        const std::size_t low = col.back();
        pivot_owner[low] = static_cast<std::ptrdiff_t>(j);
        is_death[j] = true;
        const double birth = simplices[low].value;
        const double death = simplices[j].value;
        if (death > birth) {
            if (simplices[low].dim == 0)
                res.dim0.emplace_back(birth, death);
            else if (simplices[low].dim == 1)
                res.dim1.emplace_back(birth, death);
        }
    }
    for (std::size_t j = 0; j < m; ++j) {
        if (is_death[j] || pivot_owner[j] >= 0) continue;  // paired either way
        if (simplices[j].dim == 0) ++res.essential_dim0;
        if (simplices[j].dim == 1) res.essential_dim1_births.push_back(simplices[j].value);
    }
    std::sort(res.dim0.begin(), res.dim0.end());
    std::sort(res.dim1.begin(), res.dim1.end());
    std::sort(res.essential_dim1_births.begin(), res.essential_dim1_births.end());
    return res;
}

// ---- deterministic test data ----

inline PointCloud random_cloud(std::uint64_t seed, std::size_t n, double lo = 0.0,
                               double hi = 1.0) {
    topopc::CounterRng rng(seed);
    PointCloud pc;
    pc.points.reserve(n);
    for (std::size_t i = 0; i < n; ++i)
        pc.points.emplace_back(lo + (hi - lo) * rng.uniform(3 * i),
                               lo + (hi - lo) * rng.uniform(3 * i + 1),
                               lo + (hi - lo) * rng.uniform(3 * i + 2));
    return pc;
}

/// Standard-normal draws via Box-Muller on the counter RNG.
inline std::vector<double> gaussian_pattern(std::uint64_t seed, std::size_t n) {
    topopc::CounterRng rng(seed);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u1 = rng.uniform_open(2 * i);
        const double u2 = rng.uniform(2 * i + 1);
        out[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
    }
    return out;
}

/// Cloud with pairwise separation above min_sep, by rejection.
inline PointCloud separated_cloud(std::uint64_t seed, std::size_t n, double min_sep) {
    topopc::CounterRng rng(seed);
    PointCloud pc;
    std::uint64_t c = 0;
    while (pc.size() < n) {
        Point3 cand(rng.uniform(c), rng.uniform(c + 1), rng.uniform(c + 2));
        c += 3;
        bool ok = true;
        for (const auto& p : pc.points)
            if ((p - cand).norm() <= min_sep) {
                ok = false;
                break;
            }
        if (ok) pc.points.push_back(cand);
    }
    return pc;
}

}  // namespace oracle
