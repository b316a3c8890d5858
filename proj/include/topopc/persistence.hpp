#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "topopc/point_cloud.hpp"

namespace topopc {

/// Edge filtration value: Diameter assigns the pairwise distance d,
/// Radius assigns d/2 (balls touch when their radius reaches half the gap).
enum class FiltrationConvention { Diameter, Radius };

inline double convention_scale(FiltrationConvention c) {
    return c == FiltrationConvention::Diameter ? 1.0 : 0.5;
}

struct Simplex {
    std::array<std::uint32_t, 3> vertices;  // sorted; unused slots = UINT32_MAX
    std::uint8_t dim;                       // 0, 1 or 2
    double value;                           // filtration value, >= every face
};

/// Vietoris-Rips complex up to dimension 2, simplices sorted by
/// (value, dim, lexicographic vertices) so faces precede cofaces.
struct VRComplex {
    std::vector<Simplex> simplices;
    FiltrationConvention convention;
    std::optional<double> max_filtration;
    std::size_t point_count = 0;
};

struct PersistencePair {
    int dim;       // 0 or 1
    double birth;
    double death;  // +inf, or the cap for flagged essential dim-1 classes
    bool essential = false;

    double persistence() const { return death - birth; }
};

struct PersistenceDiagram {
    std::vector<PersistencePair> pairs;
    FiltrationConvention convention = FiltrationConvention::Diameter;
    std::size_t point_count = 0;
};

inline constexpr double kInfDeath = std::numeric_limits<double>::infinity();

/// Default cap on the simplex count a VR construction / ph1 run may allocate.
/// Simplex counts grow combinatorially with cloud size, so over-budget
/// requests are rejected up front instead of exhausting memory.
inline constexpr std::size_t kDefaultSimplexLimit = 50'000'000;

VRComplex build_vr_filtration(const PointCloud& pc, int max_dim,
                              std::optional<double> max_filtration,
                              FiltrationConvention convention,
                              std::size_t simplex_limit = kDefaultSimplexLimit);

/// Dim-0 persistence via Euclidean MST: finite pairs (0, w) per MST edge
/// weight w scaled by the convention, plus one essential (0, +inf) pair.
PersistenceDiagram ph0(const PointCloud& pc,
                       FiltrationConvention convention = FiltrationConvention::Diameter);

/// Dim-1 persistence via boundary-matrix reduction over Z/2. Zero-persistence
/// pairs are dropped; essential classes (only possible with a cap) carry
/// death = cap and essential = true.
PersistenceDiagram ph1(const PointCloud& pc,
                       FiltrationConvention convention = FiltrationConvention::Diameter,
                       std::optional<double> max_filtration = std::nullopt,
                       std::size_t simplex_limit = kDefaultSimplexLimit);

struct SingleLinkageCut {
    enum class Mode { Threshold, Count } mode;
    double threshold = 0.0;
    std::size_t count = 1;

    static SingleLinkageCut by_threshold(double t) { return {Mode::Threshold, t, 1}; }
    static SingleLinkageCut by_count(std::size_t k) { return {Mode::Count, 0.0, k}; }
};

/// Labels per point, 0-based, assigned in order of each component's smallest
/// point index. Threshold mode merges along MST edges <= threshold; count mode
/// removes the k-1 largest MST edges.
std::vector<std::size_t> single_linkage_components(const PointCloud& pc,
                                                   const SingleLinkageCut& cut);

/// (mean dim-0 finite persistence, mean dim-1 finite persistence); essential
/// pairs excluded, empty dimension means 0.
std::pair<double, double> diagram_stats(const PersistenceDiagram& d);

/// CSV with header "dim,birth,death"; death "inf" for essential pairs.
std::string diagram_to_csv(const PersistenceDiagram& d);
PersistenceDiagram diagram_from_csv(const std::string& csv);

}  // namespace topopc
