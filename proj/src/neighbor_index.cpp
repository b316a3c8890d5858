#include "topopc/neighbor_index.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <stdexcept>

namespace topopc {

namespace {

using Cand = std::pair<double, std::size_t>;  // (distance, index)

struct CandLess {
    bool operator()(const Cand& a, const Cand& b) const { return a < b; }
};

}  // namespace

NeighborIndex::NeighborIndex(const PointCloud& pc, std::size_t grid_threshold)
    : cloud_(&pc) {
    require_nonempty(pc, "NeighborIndex");
    require_finite(pc, "NeighborIndex");
    if (pc.size() <= grid_threshold) return;

    Point3 lo, hi;
    pc.bounding_box(lo, hi);
    const Point3 extent = hi - lo;
    const double max_extent = extent.maxCoeff();
    if (!(max_extent > 0.0)) return;  // all points coincident: brute force

    const double cells_per_axis =
        std::max(1.0, std::cbrt(static_cast<double>(pc.size())));
    cell_ = max_extent / cells_per_axis;
    origin_ = lo;
    for (int a = 0; a < 3; ++a)
        dims_[a] = static_cast<int>(std::floor(extent[a] / cell_)) + 1;
    cells_.assign(static_cast<std::size_t>(dims_[0]) * dims_[1] * dims_[2], {});
    for (std::size_t i = 0; i < pc.size(); ++i) {
        int ix, iy, iz;
        cell_coords(pc[i], ix, iy, iz);
        cells_[cell_index(ix, iy, iz)].push_back(static_cast<std::uint32_t>(i));
    }
    use_grid_ = true;
}

std::size_t NeighborIndex::cell_index(int ix, int iy, int iz) const {
    return (static_cast<std::size_t>(iz) * dims_[1] + iy) * dims_[0] + ix;
}

void NeighborIndex::cell_coords(const Point3& p, int& ix, int& iy, int& iz) const {
    ix = std::clamp(static_cast<int>(std::floor((p.x() - origin_.x()) / cell_)), 0,
                    dims_[0] - 1);
    iy = std::clamp(static_cast<int>(std::floor((p.y() - origin_.y()) / cell_)), 0,
                    dims_[1] - 1);
    iz = std::clamp(static_cast<int>(std::floor((p.z() - origin_.z()) / cell_)), 0,
                    dims_[2] - 1);
}

std::vector<std::pair<std::size_t, double>> NeighborIndex::knn(const Point3& query,
                                                               std::size_t k,
                                                               std::size_t exclude) const {
    const std::size_t candidates = cloud_->size() - (exclude != npos ? 1 : 0);
    if (k > candidates)
        throw std::invalid_argument("knn: k = " + std::to_string(k) + " exceeds " +
                                    std::to_string(candidates) + " candidates");
    if (k == 0) return {};

    std::priority_queue<Cand, std::vector<Cand>, CandLess> best;
    auto consider = [&](std::size_t i) {
        if (i == exclude) return;
        Cand c{((*cloud_)[i] - query).norm(), i};
        if (best.size() < k) {
            best.push(c);
        } else if (c < best.top()) {
            best.pop();
            best.push(c);
        }
    };

    if (!use_grid_) {
        for (std::size_t i = 0; i < cloud_->size(); ++i) consider(i);
    } else {
        // Unclamped cell coords; queries may lie outside the bounding box.
        const int qx = static_cast<int>(std::floor((query.x() - origin_.x()) / cell_));
        const int qy = static_cast<int>(std::floor((query.y() - origin_.y()) / cell_));
        const int qz = static_cast<int>(std::floor((query.z() - origin_.z()) / cell_));
        const int max_ring =
            std::max({std::abs(qx) + dims_[0], std::abs(qy) + dims_[1],
                      std::abs(qz) + dims_[2]});
        for (int r = 0; r <= max_ring; ++r) {
            // A point in a cell at Chebyshev distance s is at least
            // (s-1)*cell_ away, so ring r onward cannot improve a full
            // result whose worst distance is below (r-1)*cell_.
            if (best.size() == k &&
                best.top().first < static_cast<double>(r - 1) * cell_)
                break;
            for (int dz = -r; dz <= r; ++dz) {
                const int iz = qz + dz;
                if (iz < 0 || iz >= dims_[2]) continue;
                for (int dy = -r; dy <= r; ++dy) {
                    const int iy = qy + dy;
                    if (iy < 0 || iy >= dims_[1]) continue;
                    const bool face_z = std::abs(dz) == r;
                    const bool face_y = std::abs(dy) == r;
                    for (int dx = -r; dx <= r; ++dx) {
                        if (!face_z && !face_y && std::abs(dx) != r) continue;
                        const int ix = qx + dx;
                        if (ix < 0 || ix >= dims_[0]) continue;
                        for (std::uint32_t i : cells_[cell_index(ix, iy, iz)])
                            consider(i);
                    }
                }
            }
        }
    }

    std::vector<std::pair<std::size_t, double>> out(best.size());
    for (std::size_t i = out.size(); i-- > 0;) {
        out[i] = {best.top().second, best.top().first};
        best.pop();
    }
    return out;
}

std::vector<std::pair<std::size_t, double>> NeighborIndex::knn(std::size_t query_idx,
                                                               std::size_t k,
                                                               bool exclude_self) const {
    if (query_idx >= cloud_->size())
        throw std::invalid_argument("knn: query index out of range");
    return knn((*cloud_)[query_idx], k, exclude_self ? query_idx : npos);
}

std::pair<std::size_t, double> NeighborIndex::nearest(const Point3& query,
                                                      std::size_t exclude) const {
    auto r = knn(query, 1, exclude);
    return {r[0].first, r[0].second};
}

std::vector<std::pair<std::size_t, double>> NeighborIndex::radius_search(
    const Point3& query, double radius) const {
    std::vector<std::pair<std::size_t, double>> out;
    auto consider = [&](std::size_t i) {
        double d = ((*cloud_)[i] - query).norm();
        if (d <= radius) out.emplace_back(i, d);
    };
    if (!use_grid_) {
        for (std::size_t i = 0; i < cloud_->size(); ++i) consider(i);
    } else {
        const int qx = static_cast<int>(std::floor((query.x() - origin_.x()) / cell_));
        const int qy = static_cast<int>(std::floor((query.y() - origin_.y()) / cell_));
        const int qz = static_cast<int>(std::floor((query.z() - origin_.z()) / cell_));
        const int reach = static_cast<int>(std::ceil(radius / cell_)) + 1;
        for (int iz = std::max(0, qz - reach); iz <= std::min(dims_[2] - 1, qz + reach); ++iz)
            for (int iy = std::max(0, qy - reach); iy <= std::min(dims_[1] - 1, qy + reach); ++iy)
                for (int ix = std::max(0, qx - reach); ix <= std::min(dims_[0] - 1, qx + reach); ++ix)
                    for (std::uint32_t i : cells_[cell_index(ix, iy, iz)]) consider(i);
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        return std::tie(a.second, a.first) < std::tie(b.second, b.first);
    });
    return out;
}

}  // namespace topopc
