#pragma once

#include "topopc/point_cloud.hpp"

namespace topopc {

enum class ChamferVariant { L1, L2 };
enum class Reduction { Sum, Mean };
enum class HausdorffMode { OneSided, SymmetricAvg };

/// Bidirectional nearest-neighbor mismatch. L2 sums squared distances, L1 sums
/// Euclidean norms. Mean divides each directional sum by its source cloud
/// size.
double chamfer(const PointCloud& x, const PointCloud& y, ChamferVariant variant,
               Reduction reduction = Reduction::Sum);

/// OneSided: max over s in S of min distance to S2. SymmetricAvg: mean of the
/// two one-sided values.
double hausdorff(const PointCloud& s, const PointCloud& s2,
                 HausdorffMode mode = HausdorffMode::SymmetricAvg);

}  // namespace topopc
