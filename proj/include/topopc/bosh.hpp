#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "topopc/distances.hpp"
#include "topopc/point_cloud.hpp"

namespace topopc {

enum class BackboneSampler { Fps, Uniform };

struct FpsStart {
    enum class Kind { Index, SeededRandom } kind = Kind::Index;
    std::size_t index = 0;
    std::uint64_t seed = 0;

    static FpsStart at(std::size_t i) { return {Kind::Index, i, 0}; }
    static FpsStart seeded(std::uint64_t s) { return {Kind::SeededRandom, 0, s}; }
};

/// Greedy farthest-point sampling: start point first, then repeatedly the
/// point maximizing min distance to the selected set; ties take the smaller
/// index.
std::vector<std::size_t> fps(const PointCloud& pc, std::size_t m,
                             const FpsStart& start = FpsStart::at(0));

struct BoshConfig {
    std::size_t backbone_count = 1;
    std::vector<std::size_t> sizes;         // empty => geometric n/2, n/4, ...
    BackboneSampler sampler = BackboneSampler::Fps;
    std::uint64_t seed = 0;

    std::vector<std::size_t> resolved_sizes(std::size_t n) const;
};

/// Multi-resolution backbones, each a subset of the complete cloud.
std::vector<PointCloud> bosh_sample(const PointCloud& complete, const BoshConfig& cfg);

struct CompletionPair {
    PointCloud complete;  // c_i
    PointCloud partial;   // p_i
};

/// The symbol Net: a deterministic cloud-to-cloud map.
using CompletionMap = std::function<PointCloud(const PointCloud&)>;

CompletionMap identity_net();

/// Runs `command` once per cloud with the input on stdin in XYZ form and the
/// completed cloud expected on stdout; non-zero exit fails the term.
CompletionMap external_net(const std::string& command);

struct BoshLossTerm {
    std::size_t pair_index;
    std::optional<std::size_t> backbone_index;  // nullopt for the partial term
    double value;
};

struct BoshLossResult {
    double total = 0.0;
    std::vector<BoshLossTerm> terms;  // fixed order: pair index, then backbone index
};

/// Total loss: sum over pairs and backbones of M(net(backbone), complete)
/// plus sum over pairs of M(net(partial), complete).
BoshLossResult bosh_total_loss(const std::vector<CompletionPair>& pairs,
                               const CompletionMap& net, const BoshConfig& cfg,
                               ChamferVariant metric = ChamferVariant::L2,
                               Reduction reduction = Reduction::Sum);

std::string bosh_breakdown_csv(const BoshLossResult& r);

}  // namespace topopc
