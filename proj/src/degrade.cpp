#include "topopc/degrade.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include <json.hpp>

#include "topopc/rng.hpp"

namespace topopc {

namespace {

constexpr const char* kToolVersion = "topopc 1.0";

std::vector<std::size_t> exponential_key_sample(const std::vector<double>& weights,
                                                std::size_t n, std::uint64_t seed) {
    // Order sampling: key_i = -ln(u_i) / w_i, take the n smallest keys. Exact
    // without-replacement semantics for per-draw probabilities proportional to
    // the weights; ties resolved by index.
    CounterRng rng(seed);
    struct Keyed {
        double key;
        std::size_t idx;
    };
    std::vector<Keyed> keys(weights.size());
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double u = rng.uniform_open(i);
        const double w = weights[i];
        keys[i] = {w > 0.0 ? -std::log(u) / w : std::numeric_limits<double>::infinity(), i};
    }
    std::nth_element(keys.begin(), keys.begin() + static_cast<std::ptrdiff_t>(n - 1),
                     keys.end(), [](const Keyed& a, const Keyed& b) {
                         return std::tie(a.key, a.idx) < std::tie(b.key, b.idx);
                     });
    std::vector<std::size_t> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = keys[i].idx;
    std::sort(out.begin(), out.end());  // output in input order
    return out;
}

PointCloud gather(const PointCloud& pc, const std::vector<std::size_t>& idx) {
    PointCloud out;
    out.points.reserve(idx.size());
    for (auto i : idx) out.points.push_back(pc[i]);
    return out;
}

}  // namespace

Viewpoint random_viewpoint(const PointCloud& pc, std::uint64_t seed, double radius_factor) {
    require_nonempty(pc, "random_viewpoint");
    CounterRng rng(seed);
    const double z = 2.0 * rng.uniform(0) - 1.0;
    const double phi = 2.0 * std::numbers::pi * rng.uniform(1);
    const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
    const Point3 dir(s * std::cos(phi), s * std::sin(phi), z);

    double radius = pc.half_diagonal();
    if (!(radius > 0.0)) radius = 1.0;  // degenerate cloud
    return {pc.centroid() + dir * (radius_factor * radius)};
}

PointCloud viewpoint_partial(const PointCloud& pc, const Viewpoint& vp, std::size_t n) {
    require_nonempty(pc, "viewpoint_partial");
    if (n < 1 || n >= pc.size())
        throw std::invalid_argument("viewpoint_partial: N must satisfy 1 <= N < n");
    const std::size_t keep = pc.size() - n;

    std::vector<std::size_t> order(pc.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        const double da = (pc[a] - vp.position).norm();
        const double db = (pc[b] - vp.position).norm();
        return std::tie(da, a) < std::tie(db, b);
    });
    order.resize(keep);
    std::sort(order.begin(), order.end());
    return gather(pc, order);
}

std::vector<std::size_t> nonuniform_sample_indices(const PointCloud& pc, const Viewpoint& vp,
                                                   std::size_t n, DistanceWeighting weighting,
                                                   std::uint64_t seed) {
    require_nonempty(pc, "nonuniform_sample");
    if (n < 1 || n > pc.size())
        throw std::invalid_argument("nonuniform_sample: N must satisfy 1 <= N <= n");

    std::vector<double> w(pc.size());
    if (weighting == DistanceWeighting::Proportional) {
        for (std::size_t i = 0; i < pc.size(); ++i) {
            const double d = (pc[i] - vp.position).norm();
            w[i] = d * d * d;
        }
    } else {
        double max_finite = 0.0;
        for (std::size_t i = 0; i < pc.size(); ++i) {
            const double d = (pc[i] - vp.position).norm();
            w[i] = d > 0.0 ? 1.0 / (d * d * d) : std::numeric_limits<double>::infinity();
            if (std::isfinite(w[i])) max_finite = std::max(max_finite, w[i]);
        }
        // Zero-distance points dominate without producing infinite keys.
        const double clamp = (max_finite > 0.0 ? max_finite : 1.0) * 1e3;
        for (auto& x : w)
            if (!std::isfinite(x)) x = clamp;
    }
    return exponential_key_sample(w, n, seed);
}

PointCloud nonuniform_sample(const PointCloud& pc, const Viewpoint& vp, std::size_t n,
                             DistanceWeighting weighting, std::uint64_t seed) {
    return gather(pc, nonuniform_sample_indices(pc, vp, n, weighting, seed));
}

std::vector<std::size_t> uniform_sample_indices(const PointCloud& pc, std::size_t n,
                                                std::uint64_t seed) {
    require_nonempty(pc, "uniform_sample");
    if (n < 1 || n > pc.size())
        throw std::invalid_argument("uniform_sample: N must satisfy 1 <= N <= n");
    return exponential_key_sample(std::vector<double>(pc.size(), 1.0), n, seed);
}

PointCloud uniform_sample(const PointCloud& pc, std::size_t n, std::uint64_t seed) {
    return gather(pc, uniform_sample_indices(pc, n, seed));
}

PointCloud apply_degrade(const PointCloud& gt, const DegradeSpec& spec) {
    switch (spec.mode) {
        case DegradeMode::Partial:
            return viewpoint_partial(gt, spec.viewpoint, spec.n);
        case DegradeMode::Nonuniform:
            return nonuniform_sample(gt, spec.viewpoint, spec.n, spec.weighting, spec.seed);
        case DegradeMode::Uniform:
            return uniform_sample(gt, spec.n, spec.seed);
    }
    throw std::logic_error("apply_degrade: unknown mode");
}

std::string degrade_manifest(const std::string& gt_path, const std::string& gt_hash,
                             const DegradeSpec& spec) {
    nlohmann::ordered_json j;
    j["tool"] = kToolVersion;
    j["gt_path"] = gt_path;
    j["gt_hash"] = gt_hash;
    switch (spec.mode) {
        case DegradeMode::Partial: j["mode"] = "partial"; break;
        case DegradeMode::Nonuniform: j["mode"] = "nonuniform"; break;
        case DegradeMode::Uniform: j["mode"] = "uniform"; break;
    }
    j["n"] = spec.n;
    j["seed"] = spec.seed;
    if (spec.mode != DegradeMode::Uniform) {
        j["viewpoint"] = {spec.viewpoint.position.x(), spec.viewpoint.position.y(),
                          spec.viewpoint.position.z()};
    }
    if (spec.mode == DegradeMode::Nonuniform)
        j["weighting"] =
            spec.weighting == DistanceWeighting::Proportional ? "proportional" : "inverse";
    return j.dump(2) + "\n";
}

DegradeSpec spec_from_manifest(const std::string& manifest_json, std::string& gt_path_out,
                               std::string& gt_hash_out) {
    auto j = nlohmann::json::parse(manifest_json);
    gt_path_out = j.at("gt_path").get<std::string>();
    gt_hash_out = j.at("gt_hash").get<std::string>();
    DegradeSpec spec;
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "partial")
        spec.mode = DegradeMode::Partial;
    else if (mode == "nonuniform")
        spec.mode = DegradeMode::Nonuniform;
    else if (mode == "uniform")
        spec.mode = DegradeMode::Uniform;
    else
        throw std::runtime_error("manifest: unknown mode \"" + mode + "\"");
    spec.n = j.at("n").get<std::size_t>();
    spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("viewpoint")) {
        auto v = j["viewpoint"];
        spec.viewpoint.position = Point3(v.at(0).get<double>(), v.at(1).get<double>(),
                                         v.at(2).get<double>());
    }
    if (j.contains("weighting"))
        spec.weighting = j["weighting"] == "inverse" ? DistanceWeighting::Inverse
                                                     : DistanceWeighting::Proportional;
    return spec;
}

std::vector<DegradeOutput> make_pairs(const PointCloud& gt, const std::string& gt_path,
                                      const std::string& gt_hash,
                                      const std::vector<DegradeSpec>& specs) {
    std::vector<DegradeOutput> out;
    out.reserve(specs.size());
    for (const auto& spec : specs)
        out.push_back({apply_degrade(gt, spec), spec, degrade_manifest(gt_path, gt_hash, spec)});
    return out;
}

}  // namespace topopc
