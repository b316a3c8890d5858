#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "topopc/persistence.hpp"
#include "topopc/point_cloud.hpp"

namespace topopc {

enum class PlaneFitMethod {
    TotalLeastSquares,  // principal-component plane; rotation invariant
    ZRegression         // literal z = ax + by + c least squares
};

struct MetricsConfig {
    std::size_t plane_k = 10;
    PlaneFitMethod plane_fit = PlaneFitMethod::TotalLeastSquares;
    FiltrationConvention convention = FiltrationConvention::Diameter;
    std::optional<double> ph1_cap;
    std::size_t ph1_budget = 512;  // clouds above this are FPS-subsampled for ph1
};

/// Perpendicular distance from point idx to the plane fitted to its k nearest
/// neighbors (the point itself excluded). Degenerate neighborhoods fall back
/// to the best-fit affine subspace of lower rank.
double point_plane_deviation(const PointCloud& pc, std::size_t idx, std::size_t k,
                             PlaneFitMethod method = PlaneFitMethod::TotalLeastSquares);

/// Mean point-to-local-plane deviation over all points.
double noise_metric(const PointCloud& pc, std::size_t k = 10,
                    PlaneFitMethod method = PlaneFitMethod::TotalLeastSquares);

/// Population standard deviation of each point's nearest-neighbor distance.
double non_uniformity(const PointCloud& pc);

struct PhMetricResult {
    double h0_mean = 0.0;
    double h1_mean = 0.0;
    std::size_t ph1_sample_size = 0;  // points actually used for ph1
};

PhMetricResult ph_metric(const PointCloud& pc, const MetricsConfig& cfg = {});

struct CloudMetrics {
    double noise = 0.0;
    double non_uniformity = 0.0;
    double h0_mean = 0.0;
    double h1_mean = 0.0;
};

struct MetricsReport {
    std::vector<std::pair<std::string, CloudMetrics>> per_class;  // insertion order
    CloudMetrics overall;  // unweighted mean of per-class means
    MetricsConfig config;
};

MetricsReport aggregate_report(const std::map<std::string, std::vector<PointCloud>>& dataset,
                               const MetricsConfig& cfg = {});

std::string report_to_csv(const MetricsReport& r);
/// Table-style text: one block per metric, classes as columns plus a Mean
/// column, followed by a metadata block.
std::string report_to_text(const MetricsReport& r);

}  // namespace topopc
