#include "topopc/metrics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "topopc/bosh.hpp"
#include "topopc/io.hpp"
#include "topopc/neighbor_index.hpp"

namespace topopc {

namespace {

double deviation_tls(const Point3& p, const std::vector<Point3>& nbrs) {
    Point3 mean = Point3::Zero();
    for (const auto& q : nbrs) mean += q;
    mean /= static_cast<double>(nbrs.size());

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (const auto& q : nbrs) {
        const Point3 d = q - mean;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(nbrs.size());

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> es(cov);
    const auto& evals = es.eigenvalues();  // ascending
    const auto& evecs = es.eigenvectors();

    const Point3 r = p - mean;
    const double lead = evals(2);
    const double tol = 1e-12 * std::max(lead, 1e-300);
    if (evals(2) <= tol) return r.norm();              // rank 0: distance to the point mass
    if (evals(1) <= tol) {                             // rank 1: distance to the line
        const Point3 axis = evecs.col(2);
        return (r - axis * axis.dot(r)).norm();
    }
    return std::abs(evecs.col(0).dot(r));              // plane through the mean
}

double deviation_zreg(const Point3& p, const std::vector<Point3>& nbrs) {
    // z = ax + by + c in least squares; vertical residual at the query point,
    // which is exactly linear in any pure-z perturbation of the cloud.
    Eigen::MatrixXd a(nbrs.size(), 3);
    Eigen::VectorXd z(nbrs.size());
    for (std::size_t i = 0; i < nbrs.size(); ++i) {
        a(static_cast<Eigen::Index>(i), 0) = nbrs[i].x();
        a(static_cast<Eigen::Index>(i), 1) = nbrs[i].y();
        a(static_cast<Eigen::Index>(i), 2) = 1.0;
        z(static_cast<Eigen::Index>(i)) = nbrs[i].z();
    }
    Eigen::Vector3d coef = (a.transpose() * a)
                               .ldlt()
                               .solve(a.transpose() * z);
    if (!coef.allFinite()) return deviation_tls(p, nbrs);
    return std::abs(coef(0) * p.x() + coef(1) * p.y() + coef(2) - p.z());
}

}  // namespace

double point_plane_deviation(const PointCloud& pc, std::size_t idx, std::size_t k,
                             PlaneFitMethod method) {
    if (k < 3) throw std::invalid_argument("point_plane_deviation: k must be >= 3");
    if (pc.size() < k + 1)
        throw std::invalid_argument("point_plane_deviation: need at least k+1 points");
    NeighborIndex index(pc);
    auto nn = index.knn(idx, k, /*exclude_self=*/true);
    std::vector<Point3> nbrs;
    nbrs.reserve(nn.size());
    for (const auto& [i, d] : nn) nbrs.push_back(pc[i]);
    return method == PlaneFitMethod::TotalLeastSquares ? deviation_tls(pc[idx], nbrs)
                                                       : deviation_zreg(pc[idx], nbrs);
}

double noise_metric(const PointCloud& pc, std::size_t k, PlaneFitMethod method) {
    if (k < 3) throw std::invalid_argument("noise_metric: k must be >= 3");
    if (pc.size() < k + 1)
        throw std::invalid_argument("noise_metric: need at least k+1 points");
    NeighborIndex index(pc);
    double sum = 0.0;
    std::vector<Point3> nbrs;
    for (std::size_t idx = 0; idx < pc.size(); ++idx) {
        auto nn = index.knn(idx, k, true);
        nbrs.clear();
        for (const auto& [i, d] : nn) nbrs.push_back(pc[i]);
        sum += method == PlaneFitMethod::TotalLeastSquares
                   ? deviation_tls(pc[idx], nbrs)
                   : deviation_zreg(pc[idx], nbrs);
    }
    return sum / static_cast<double>(pc.size());
}

double non_uniformity(const PointCloud& pc) {
    if (pc.size() < 2) throw std::invalid_argument("non_uniformity: need >= 2 points");
    NeighborIndex index(pc);
    std::vector<double> d(pc.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < pc.size(); ++i) {
        d[i] = index.knn(i, 1, true)[0].second;
        mean += d[i];
    }
    mean /= static_cast<double>(pc.size());
    double var = 0.0;
    for (double x : d) var += (x - mean) * (x - mean);
    return std::sqrt(var / static_cast<double>(pc.size()));  // population stddev
}

PhMetricResult ph_metric(const PointCloud& pc, const MetricsConfig& cfg) {
    require_nonempty(pc, "ph_metric");
    PhMetricResult r;
    r.h0_mean = diagram_stats(ph0(pc, cfg.convention)).first;

    const PointCloud* ph1_cloud = &pc;
    PointCloud sub;
    if (pc.size() > cfg.ph1_budget) {
        auto idx = fps(pc, cfg.ph1_budget, FpsStart::at(0));
        sub.points.reserve(idx.size());
        for (auto i : idx) sub.points.push_back(pc[i]);
        ph1_cloud = &sub;
    }
    r.ph1_sample_size = ph1_cloud->size();
    r.h1_mean = diagram_stats(ph1(*ph1_cloud, cfg.convention, cfg.ph1_cap)).second;
    return r;
}

MetricsReport aggregate_report(const std::map<std::string, std::vector<PointCloud>>& dataset,
                               const MetricsConfig& cfg) {
    if (dataset.empty()) throw std::invalid_argument("aggregate_report: empty dataset");
    MetricsReport rep;
    rep.config = cfg;
    CloudMetrics total{};
    for (const auto& [cls, clouds] : dataset) {
        if (clouds.empty())
            throw std::invalid_argument("aggregate_report: class \"" + cls +
                                        "\" has no clouds");
        CloudMetrics m{};
        for (const auto& pc : clouds) {
            m.noise += noise_metric(pc, cfg.plane_k, cfg.plane_fit);
            m.non_uniformity += non_uniformity(pc);
            auto ph = ph_metric(pc, cfg);
            m.h0_mean += ph.h0_mean;
            m.h1_mean += ph.h1_mean;
        }
        const double cnt = static_cast<double>(clouds.size());
        m.noise /= cnt;
        m.non_uniformity /= cnt;
        m.h0_mean /= cnt;
        m.h1_mean /= cnt;
        rep.per_class.emplace_back(cls, m);
        total.noise += m.noise;
        total.non_uniformity += m.non_uniformity;
        total.h0_mean += m.h0_mean;
        total.h1_mean += m.h1_mean;
    }
    const double nc = static_cast<double>(rep.per_class.size());
    rep.overall = {total.noise / nc, total.non_uniformity / nc, total.h0_mean / nc,
                   total.h1_mean / nc};
    return rep;
}

std::string report_to_csv(const MetricsReport& r) {
    std::string out = "class,noise,non_uniformity,h0_mean,h1_mean\n";
    auto row = [&](const std::string& name, const CloudMetrics& m) {
        out += name + ',' + format_double(m.noise) + ',' + format_double(m.non_uniformity) +
               ',' + format_double(m.h0_mean) + ',' + format_double(m.h1_mean) + '\n';
    };
    for (const auto& [cls, m] : r.per_class) row(cls, m);
    row("Mean", r.overall);
    return out;
}

std::string report_to_text(const MetricsReport& r) {
    std::ostringstream out;
    std::vector<std::string> cols;
    for (const auto& [cls, m] : r.per_class) cols.push_back(cls);
    cols.push_back("Mean");

    auto line = [&](const std::string& label, auto getter) {
        out << label;
        for (const auto& [cls, m] : r.per_class) out << '\t' << getter(m);
        out << '\t' << getter(r.overall) << '\n';
    };
    out << "metric";
    for (const auto& c : cols) out << '\t' << c;
    out << '\n';
    line("Noise", [](const CloudMetrics& m) { return m.noise; });
    line("Non-Uniformity", [](const CloudMetrics& m) { return m.non_uniformity; });
    line("H0", [](const CloudMetrics& m) { return m.h0_mean; });
    line("H1", [](const CloudMetrics& m) { return m.h1_mean; });

    out << "\n# metadata\n";
    out << "plane_k\t" << r.config.plane_k << '\n';
    out << "plane_fit\t"
        << (r.config.plane_fit == PlaneFitMethod::TotalLeastSquares ? "tls" : "zreg")
        << '\n';
    out << "convention\t"
        << (r.config.convention == FiltrationConvention::Diameter ? "diameter" : "radius")
        << '\n';
    out << "ph1_budget\t" << r.config.ph1_budget << '\n';
    if (r.config.ph1_cap) out << "ph1_cap\t" << format_double(*r.config.ph1_cap) << '\n';
    return out.str();
}

}  // namespace topopc
