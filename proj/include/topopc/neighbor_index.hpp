#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "topopc/point_cloud.hpp"

namespace topopc {

/// Exact nearest-neighbor queries over a fixed cloud. Brute force below
/// grid_threshold points, uniform spatial hash grid above. Both paths return
/// bit-identical results (ties broken by smaller point index).
class NeighborIndex {
public:
    explicit NeighborIndex(const PointCloud& pc, std::size_t grid_threshold = 256);

    std::size_t size() const { return cloud_->size(); }
    const PointCloud& cloud() const { return *cloud_; }

    /// k results sorted by (distance, index). exclude excludes that point index
    /// from the candidates (pass npos to keep everything).
    std::vector<std::pair<std::size_t, double>> knn(const Point3& query, std::size_t k,
                                                    std::size_t exclude = npos) const;
    std::vector<std::pair<std::size_t, double>> knn(std::size_t query_idx, std::size_t k,
                                                    bool exclude_self) const;

    /// Nearest candidate (ties by index); exclude as above.
    std::pair<std::size_t, double> nearest(const Point3& query,
                                           std::size_t exclude = npos) const;

    /// All points within dist <= radius of query, sorted by (distance, index).
    std::vector<std::pair<std::size_t, double>> radius_search(const Point3& query,
                                                              double radius) const;

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    const PointCloud* cloud_;
    bool use_grid_ = false;

    // grid data
    Point3 origin_;
    double cell_ = 1.0;
    int dims_[3] = {1, 1, 1};
    std::vector<std::vector<std::uint32_t>> cells_;

    std::size_t cell_index(int ix, int iy, int iz) const;
    void cell_coords(const Point3& p, int& ix, int& iy, int& iz) const;
};

}  // namespace topopc
