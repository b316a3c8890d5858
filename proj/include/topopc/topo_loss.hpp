#pragma once

#include <cstddef>
#include <vector>

#include "topopc/mst.hpp"
#include "topopc/persistence.hpp"
#include "topopc/point_cloud.hpp"

namespace topopc {

struct TopoLossConfig {
    std::size_t k = 1;  // protected component count
    FiltrationConvention convention = FiltrationConvention::Diameter;
};

struct TopoLossResult {
    double value = 0.0;
    std::vector<Point3> gradient;          // per point, empty unless requested
    std::vector<PersistencePair> protected_pairs;
    std::vector<MstEdge> active_edges;     // MST edges contributing to the loss
};

/// Sum of dim-0 persistences with the k-1 most persistent finite pairs (plus
/// the essential class) excluded. Equals the convention-scaled weight of the
/// MST minus its k-1 heaviest edges; minimizing it drives the cloud toward k
/// connected components.
TopoLossResult topo_loss(const PointCloud& pc, const TopoLossConfig& cfg);

/// topo_loss plus the analytic gradient: each active edge (i, j) contributes
/// the unit vector between its endpoints, scaled by the convention. At MST
/// ties this is the subgradient of the deterministically tie-broken tree.
TopoLossResult topo_loss_grad(const PointCloud& pc, const TopoLossConfig& cfg);

/// Max relative error of the analytic gradient against central finite
/// differences with step h.
double fd_check(const PointCloud& pc, const TopoLossConfig& cfg, double h = 1e-5);

struct SkeletonizeOptions {
    std::size_t iterations = 2000;
    double step_size = 2e-3;
    double lambda_topo = 1.0;
    double lambda_fid = 0.0;   // weight on chamfer(current, original, L2, mean)
    std::size_t snapshot_every = 100;
};

struct SkeletonizeIteration {
    std::size_t iteration;
    double topo;
    double fidelity;
    double total;
};

struct SkeletonizeResult {
    PointCloud initial;
    PointCloud final;
    std::vector<PointCloud> snapshots;           // every snapshot_every iterations
    std::vector<SkeletonizeIteration> log;
    bool diverged = false;                       // loss grew 50 iterations in a row
};

/// Gradient descent on lambda_topo * topo_loss + lambda_fid * mean-L2 chamfer
/// to the original cloud.
SkeletonizeResult skeletonize(const PointCloud& pc, const TopoLossConfig& cfg,
                              const SkeletonizeOptions& opt);

}  // namespace topopc
