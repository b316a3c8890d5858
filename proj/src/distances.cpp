#include "topopc/distances.hpp"

#include <algorithm>

#include "topopc/neighbor_index.hpp"

namespace topopc {

namespace {

// Sum over x in X of f(min_y ||x - y||).
double directional_sum(const PointCloud& from, const NeighborIndex& to_index,
                       ChamferVariant variant) {
    double sum = 0.0;
    for (const auto& p : from.points) {
        const double d = to_index.nearest(p).second;
        sum += variant == ChamferVariant::L2 ? d * d : d;
    }
    return sum;
}

double directional_max(const PointCloud& from, const NeighborIndex& to_index) {
    double m = 0.0;
    for (const auto& p : from.points) m = std::max(m, to_index.nearest(p).second);
    return m;
}

}  // namespace

double chamfer(const PointCloud& x, const PointCloud& y, ChamferVariant variant,
               Reduction reduction) {
    require_nonempty(x, "chamfer");
    require_nonempty(y, "chamfer");
    NeighborIndex xi(x), yi(y);
    double fwd = directional_sum(x, yi, variant);
    double bwd = directional_sum(y, xi, variant);
    if (reduction == Reduction::Mean) {
        fwd /= static_cast<double>(x.size());
        bwd /= static_cast<double>(y.size());
    }
    return fwd + bwd;
}

double hausdorff(const PointCloud& s, const PointCloud& s2, HausdorffMode mode) {
    require_nonempty(s, "hausdorff");
    require_nonempty(s2, "hausdorff");
    NeighborIndex s2i(s2);
    const double fwd = directional_max(s, s2i);
    if (mode == HausdorffMode::OneSided) return fwd;
    NeighborIndex si(s);
    const double bwd = directional_max(s2, si);
    return 0.5 * (fwd + bwd);
}

}  // namespace topopc
