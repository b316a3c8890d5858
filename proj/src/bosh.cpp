#include "topopc/bosh.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <stdexcept>
#include <unistd.h>

#include "topopc/io.hpp"
#include "topopc/rng.hpp"

namespace topopc {

std::vector<std::size_t> fps(const PointCloud& pc, std::size_t m, const FpsStart& start) {
    require_nonempty(pc, "fps");
    const std::size_t n = pc.size();
    if (m < 1 || m > n) throw std::invalid_argument("fps: m must satisfy 1 <= m <= n");

    std::size_t first = start.index;
    if (start.kind == FpsStart::Kind::SeededRandom)
        first = static_cast<std::size_t>(CounterRng(start.seed).bits(0) % n);
    if (first >= n) throw std::invalid_argument("fps: start index out of range");

    std::vector<std::size_t> selected;
    selected.reserve(m);
    selected.push_back(first);
    std::vector<double> min_dist(n);
    for (std::size_t i = 0; i < n; ++i) min_dist[i] = (pc[i] - pc[first]).norm();

    while (selected.size() < m) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < n; ++i)
            if (min_dist[i] > min_dist[best]) best = i;  // ties keep smaller index
        selected.push_back(best);
        for (std::size_t i = 0; i < n; ++i)
            min_dist[i] = std::min(min_dist[i], (pc[i] - pc[best]).norm());
    }
    return selected;
}

std::vector<std::size_t> BoshConfig::resolved_sizes(std::size_t n) const {
    std::vector<std::size_t> out = sizes;
    if (out.empty()) {
        std::size_t s = n;
        for (std::size_t j = 0; j < backbone_count; ++j) {
            s = std::max<std::size_t>(1, s / 2);
            out.push_back(s);
        }
    }
    if (out.size() != backbone_count)
        throw std::invalid_argument("BoshConfig: |sizes| must equal backbone_count");
    for (auto s : out)
        if (s < 1 || s > n)
            throw std::invalid_argument("BoshConfig: backbone size " + std::to_string(s) +
                                        " out of range for n = " + std::to_string(n));
    return out;
}

std::vector<PointCloud> bosh_sample(const PointCloud& complete, const BoshConfig& cfg) {
    require_nonempty(complete, "bosh_sample");
    if (cfg.backbone_count < 1)
        throw std::invalid_argument("bosh_sample: backbone_count must be >= 1");
    const auto sizes = cfg.resolved_sizes(complete.size());

    std::vector<PointCloud> backbones;
    backbones.reserve(sizes.size());
    for (std::size_t j = 0; j < sizes.size(); ++j) {
        std::vector<std::size_t> idx;
        if (cfg.sampler == BackboneSampler::Fps) {
            idx = fps(complete, sizes[j],
                      cfg.seed == 0 ? FpsStart::at(0)
                                    : FpsStart::seeded(cfg.seed + j));
        } else {
            CounterRng rng(cfg.seed + j);
            struct Keyed {
                double key;
                std::size_t i;
            };
            std::vector<Keyed> keys(complete.size());
            for (std::size_t i = 0; i < complete.size(); ++i)
                keys[i] = {rng.uniform_open(i), i};
            std::nth_element(keys.begin(),
                             keys.begin() + static_cast<std::ptrdiff_t>(sizes[j] - 1),
                             keys.end(), [](const Keyed& a, const Keyed& b) {
                                 return std::tie(a.key, a.i) < std::tie(b.key, b.i);
                             });
            idx.resize(sizes[j]);
            for (std::size_t i = 0; i < sizes[j]; ++i) idx[i] = keys[i].i;
            std::sort(idx.begin(), idx.end());
        }
        PointCloud bb;
        bb.points.reserve(idx.size());
        for (auto i : idx) bb.points.push_back(complete[i]);
        backbones.push_back(std::move(bb));
    }
    return backbones;
}

CompletionMap identity_net() {
    return [](const PointCloud& pc) { return pc; };
}

CompletionMap external_net(const std::string& command) {
    return [command](const PointCloud& pc) {
        namespace fs = std::filesystem;
        const auto dir = fs::temp_directory_path();
        const std::string tag = content_hash(serialize_pointcloud(pc, CloudFormat::Xyz)) +
                                "_" + std::to_string(::getpid());
        const fs::path in = dir / ("topopc_net_in_" + tag + ".xyz");
        const fs::path out = dir / ("topopc_net_out_" + tag + ".xyz");
        write_file_atomic(in.string(), serialize_pointcloud(pc, CloudFormat::Xyz));
        const std::string cmd =
            command + " < '" + in.string() + "' > '" + out.string() + "'";
        const int rc = std::system(cmd.c_str());
        PointCloud result;
        std::exception_ptr err;
        try {
            if (rc != 0)
                throw std::runtime_error("external net exited with status " +
                                         std::to_string(rc) + ": " + command);
            result = parse_pointcloud(read_file(out.string()), CloudFormat::Xyz,
                                      "external net output");
        } catch (...) {
            err = std::current_exception();
        }
        std::error_code ec;
        fs::remove(in, ec);
        fs::remove(out, ec);
        if (err) std::rethrow_exception(err);
        return result;
    };
}

BoshLossResult bosh_total_loss(const std::vector<CompletionPair>& pairs,
                               const CompletionMap& net, const BoshConfig& cfg,
                               ChamferVariant metric, Reduction reduction) {
    if (pairs.empty()) throw std::invalid_argument("bosh_total_loss: no pairs");
    if (!net) throw std::invalid_argument("bosh_total_loss: null net");

    BoshLossResult r;
    for (std::size_t i = 0; i < pairs.size(); ++i) {
        const auto& [complete, partial] = pairs[i];
        require_nonempty(complete, "bosh_total_loss");
        require_nonempty(partial, "bosh_total_loss");

        const auto backbones = bosh_sample(complete, cfg);
        for (std::size_t j = 0; j < backbones.size(); ++j) {
            PointCloud predicted = net(backbones[j]);
            if (predicted.empty())
                throw std::runtime_error("bosh_total_loss: net returned an empty cloud");
            const double v = chamfer(predicted, complete, metric, reduction);
            r.terms.push_back({i, j, v});
            r.total += v;
        }
        PointCloud predicted = net(partial);
        if (predicted.empty())
            throw std::runtime_error("bosh_total_loss: net returned an empty cloud");
        const double v = chamfer(predicted, complete, metric, reduction);
        r.terms.push_back({i, std::nullopt, v});
        r.total += v;
    }
    return r;
}

std::string bosh_breakdown_csv(const BoshLossResult& r) {
    std::string out = "pair,term,value\n";
    for (const auto& t : r.terms) {
        out += std::to_string(t.pair_index);
        out += ',';
        out += t.backbone_index ? "backbone" + std::to_string(*t.backbone_index) : "partial";
        out += ',';
        out += format_double(t.value);
        out += '\n';
    }
    out += "total,," + format_double(r.total) + '\n';
    return out;
}

}  // namespace topopc
