#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "topopc/point_cloud.hpp"

namespace topopc {

struct Viewpoint {
    Point3 position;
};

enum class DegradeMode { Partial, Nonuniform, Uniform };
enum class DistanceWeighting { Proportional, Inverse };  // d^3 vs d^-3

struct DegradeSpec {
    DegradeMode mode;
    std::size_t n;  // points removed (Partial) or sampled (Nonuniform/Uniform)
    Viewpoint viewpoint{Point3::Zero()};  // Partial / Nonuniform only
    DistanceWeighting weighting = DistanceWeighting::Proportional;
    std::uint64_t seed = 0;
};

/// Seeded uniform direction on the unit sphere, placed at
/// centroid + direction * radius_factor * (half bounding-box diagonal).
/// Degenerate clouds (zero diagonal) fall back to unit radius.
Viewpoint random_viewpoint(const PointCloud& pc, std::uint64_t seed,
                           double radius_factor = 1.5);

/// Removes the n points farthest from the viewpoint; ties keep the smaller
/// index. Output preserves input order.
PointCloud viewpoint_partial(const PointCloud& pc, const Viewpoint& vp, std::size_t n);

/// Without-replacement sample of n points, per-draw probability proportional
/// to d^3 (Proportional) or d^-3 (Inverse), d = distance to the viewpoint.
/// Implemented as exponential-keys order sampling; deterministic per seed.
PointCloud nonuniform_sample(const PointCloud& pc, const Viewpoint& vp, std::size_t n,
                             DistanceWeighting weighting, std::uint64_t seed);
std::vector<std::size_t> nonuniform_sample_indices(const PointCloud& pc, const Viewpoint& vp,
                                                   std::size_t n, DistanceWeighting weighting,
                                                   std::uint64_t seed);

/// Uniform without-replacement sample of n points, deterministic per seed,
/// output in input order.
PointCloud uniform_sample(const PointCloud& pc, std::size_t n, std::uint64_t seed);
std::vector<std::size_t> uniform_sample_indices(const PointCloud& pc, std::size_t n,
                                                std::uint64_t seed);

PointCloud apply_degrade(const PointCloud& gt, const DegradeSpec& spec);

struct DegradeOutput {
    PointCloud cloud;
    DegradeSpec spec;
    std::string manifest;  // JSON: gt path + hash, spec fields, tool version
};

std::vector<DegradeOutput> make_pairs(const PointCloud& gt, const std::string& gt_path,
                                      const std::string& gt_hash,
                                      const std::vector<DegradeSpec>& specs);

std::string degrade_manifest(const std::string& gt_path, const std::string& gt_hash,
                             const DegradeSpec& spec);
DegradeSpec spec_from_manifest(const std::string& manifest_json, std::string& gt_path_out,
                               std::string& gt_hash_out);

}  // namespace topopc
