#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace topopc {

using Point3 = Eigen::Vector3d;

/// Ordered list of finite 3D points. Point order is significant: indices are
/// stable identifiers throughout the library.
struct PointCloud {
    std::vector<Point3> points;

    PointCloud() = default;
    explicit PointCloud(std::vector<Point3> pts) : points(std::move(pts)) {}

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }

    Point3& operator[](std::size_t i) { return points[i]; }
    const Point3& operator[](std::size_t i) const { return points[i]; }

    Point3 centroid() const {
        Point3 c = Point3::Zero();
        for (const auto& p : points) c += p;
        return c / static_cast<double>(points.size());
    }

    void bounding_box(Point3& lo, Point3& hi) const {
        lo = Point3::Constant(std::numeric_limits<double>::infinity());
        hi = Point3::Constant(-std::numeric_limits<double>::infinity());
        for (const auto& p : points) {
            lo = lo.cwiseMin(p);
            hi = hi.cwiseMax(p);
        }
    }

    double half_diagonal() const {
        Point3 lo, hi;
        bounding_box(lo, hi);
        return 0.5 * (hi - lo).norm();
    }
};

inline bool point_finite(const Point3& p) {
    return std::isfinite(p.x()) && std::isfinite(p.y()) && std::isfinite(p.z());
}

inline void require_nonempty(const PointCloud& pc, const std::string& who) {
    if (pc.empty()) throw std::invalid_argument(who + ": empty point cloud");
}

inline void require_finite(const PointCloud& pc, const std::string& who) {
    for (std::size_t i = 0; i < pc.size(); ++i)
        if (!point_finite(pc[i]))
            throw std::invalid_argument(who + ": non-finite coordinate at point " +
                                        std::to_string(i));
}

}  // namespace topopc
