#include "topopc/topo_loss.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "topopc/distances.hpp"
#include "topopc/neighbor_index.hpp"

namespace topopc {

namespace {

TopoLossResult loss_impl(const PointCloud& pc, const TopoLossConfig& cfg,
                         bool with_gradient) {
    require_nonempty(pc, "topo_loss");
    require_finite(pc, "topo_loss");
    if (cfg.k < 1 || cfg.k > pc.size())
        throw std::invalid_argument("topo_loss: k must satisfy 1 <= k <= n");

    const double scale = convention_scale(cfg.convention);
    auto edges = euclidean_mst(pc);

    // Persistence of a finite dim-0 pair is its MST edge weight (scaled).
    // Protect the k-1 most persistent pairs; ties by lexicographic edge.
    std::sort(edges.begin(), edges.end(), [](const MstEdge& a, const MstEdge& b) {
        if (a.weight != b.weight) return a.weight > b.weight;
        return std::tie(a.i, a.j) < std::tie(b.i, b.j);
    });

    TopoLossResult r;
    const std::size_t protect = std::min(cfg.k - 1, edges.size());
    for (std::size_t e = 0; e < protect; ++e)
        r.protected_pairs.push_back({0, 0.0, edges[e].weight * scale, false});

    if (with_gradient) r.gradient.assign(pc.size(), Point3::Zero());
    for (std::size_t e = protect; e < edges.size(); ++e) {
        const auto& edge = edges[e];
        r.value += edge.weight * scale;
        r.active_edges.push_back(edge);
        if (with_gradient) {
            if (edge.weight <= 0.0)
                throw std::runtime_error(
                    "topo_loss_grad: coincident points on active edge (" +
                    std::to_string(edge.i) + ", " + std::to_string(edge.j) + ")");
            const Point3 u = (pc[edge.i] - pc[edge.j]) / edge.weight;
            r.gradient[edge.i] += scale * u;
            r.gradient[edge.j] -= scale * u;
        }
    }
    return r;
}

// Gradient of chamfer(current, original, L2, Mean) with respect to current.
double chamfer_l2_mean_grad(const PointCloud& cur, const PointCloud& orig,
                            std::vector<Point3>& grad) {
    NeighborIndex orig_index(orig);
    NeighborIndex cur_index(cur);
    const double inv_cur = 1.0 / static_cast<double>(cur.size());
    const double inv_orig = 1.0 / static_cast<double>(orig.size());

    double value = 0.0;
    grad.assign(cur.size(), Point3::Zero());
    for (std::size_t i = 0; i < cur.size(); ++i) {
        auto [j, d] = orig_index.nearest(cur[i]);
        value += d * d * inv_cur;
        grad[i] += 2.0 * inv_cur * (cur[i] - orig[j]);
    }
    for (std::size_t j = 0; j < orig.size(); ++j) {
        auto [i, d] = cur_index.nearest(orig[j]);
        value += d * d * inv_orig;
        grad[i] += 2.0 * inv_orig * (cur[i] - orig[j]);
    }
    return value;
}

}  // namespace

TopoLossResult topo_loss(const PointCloud& pc, const TopoLossConfig& cfg) {
    return loss_impl(pc, cfg, false);
}

TopoLossResult topo_loss_grad(const PointCloud& pc, const TopoLossConfig& cfg) {
    return loss_impl(pc, cfg, true);
}

double fd_check(const PointCloud& pc, const TopoLossConfig& cfg, double h) {
    // Central differences need room around each coordinate.
    for (std::size_t i = 0; i < pc.size(); ++i)
        for (std::size_t j = i + 1; j < pc.size(); ++j)
            if ((pc[i] - pc[j]).norm() <= 10.0 * h)
                throw std::invalid_argument(
                    "fd_check: cloud degenerate at step h (points " + std::to_string(i) +
                    ", " + std::to_string(j) + ")");

    const auto analytic = topo_loss_grad(pc, cfg);
    double grad_scale = 0.0;
    for (const auto& g : analytic.gradient) grad_scale = std::max(grad_scale, g.norm());

    PointCloud work = pc;
    double max_rel = 0.0;
    for (std::size_t i = 0; i < pc.size(); ++i) {
        for (int c = 0; c < 3; ++c) {
            const double saved = work[i][c];
            work[i][c] = saved + h;
            const double up = topo_loss(work, cfg).value;
            work[i][c] = saved - h;
            const double dn = topo_loss(work, cfg).value;
            work[i][c] = saved;
            const double fd = (up - dn) / (2.0 * h);
            const double err = std::abs(fd - analytic.gradient[i][c]);
            max_rel = std::max(max_rel, err / std::max(grad_scale, 1.0));
        }
    }
    return max_rel;
}

SkeletonizeResult skeletonize(const PointCloud& pc, const TopoLossConfig& cfg,
                              const SkeletonizeOptions& opt) {
    require_nonempty(pc, "skeletonize");
    if (!(opt.step_size > 0.0))
        throw std::invalid_argument("skeletonize: step_size must be positive");
    if (opt.lambda_topo < 0.0 || opt.lambda_fid < 0.0)
        throw std::invalid_argument("skeletonize: lambdas must be nonnegative");

    SkeletonizeResult res;
    res.initial = pc;
    PointCloud cur = pc;
    std::vector<Point3> fid_grad;
    double prev_total = std::numeric_limits<double>::infinity();
    std::size_t growth_streak = 0;

    for (std::size_t it = 0; it < opt.iterations; ++it) {
        double topo = 0.0;
        std::vector<Point3> step(cur.size(), Point3::Zero());
        if (opt.lambda_topo > 0.0) {
            auto t = topo_loss_grad(cur, cfg);
            topo = t.value;
            for (std::size_t i = 0; i < cur.size(); ++i)
                step[i] += opt.lambda_topo * t.gradient[i];
        }
        double fid = 0.0;
        if (opt.lambda_fid > 0.0) {
            fid = chamfer_l2_mean_grad(cur, pc, fid_grad);
            for (std::size_t i = 0; i < cur.size(); ++i)
                step[i] += opt.lambda_fid * fid_grad[i];
        }
        const double total = opt.lambda_topo * topo + opt.lambda_fid * fid;
        res.log.push_back({it, topo, fid, total});

        // Divergence: sustained growth, a blow-up past 10x the starting loss
        // (descent never revisits that level), or a non-finite loss.
        const double initial_total = res.log.front().total;
        if (!std::isfinite(total) || (initial_total > 0.0 && total > 10.0 * initial_total)) {
            res.diverged = true;
            break;
        }
        if (total > prev_total) {
            if (++growth_streak >= 50) {
                res.diverged = true;
                break;
            }
        } else {
            growth_streak = 0;
        }
        prev_total = total;

        for (std::size_t i = 0; i < cur.size(); ++i)
            cur[i] -= opt.step_size * step[i];

        if (opt.snapshot_every && (it + 1) % opt.snapshot_every == 0)
            res.snapshots.push_back(cur);
    }
    res.final = cur;
    return res;
}

}  // namespace topopc
