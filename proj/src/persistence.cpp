#include "topopc/persistence.hpp"

#include <algorithm>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

#include "topopc/io.hpp"
#include "topopc/mst.hpp"

namespace topopc {

namespace {

constexpr std::uint32_t kNoVertex = static_cast<std::uint32_t>(-1);

[[noreturn]] void budget_fail(std::size_t needed, std::size_t limit) {
    throw std::runtime_error(
        "simplex budget exceeded: construction needs >= " + std::to_string(needed) +
        " simplices, limit is " + std::to_string(limit) +
        "; set a max_filtration cap or subsample the cloud");
}

struct EdgeRec {
    double value;
    std::uint32_t a, b;  // a < b
};

/// Edges with filtration value <= cap (if set), sorted by (value, lex).
std::vector<EdgeRec> build_edges(const PointCloud& pc, double scale,
                                 std::optional<double> cap) {
    const std::size_t n = pc.size();
    std::vector<EdgeRec> edges;
    for (std::uint32_t a = 0; a + 1 < n; ++a)
        for (std::uint32_t b = a + 1; b < n; ++b) {
            const double v = (pc[a] - pc[b]).norm() * scale;
            if (cap && v > *cap) continue;
            edges.push_back({v, a, b});
        }
    std::sort(edges.begin(), edges.end(), [](const EdgeRec& x, const EdgeRec& y) {
        return std::tie(x.value, x.a, x.b) < std::tie(y.value, y.a, y.b);
    });
    return edges;
}

}  // namespace

VRComplex build_vr_filtration(const PointCloud& pc, int max_dim,
                              std::optional<double> max_filtration,
                              FiltrationConvention convention, std::size_t simplex_limit) {
    require_nonempty(pc, "build_vr_filtration");
    require_finite(pc, "build_vr_filtration");
    if (max_dim < 1 || max_dim > 2)
        throw std::invalid_argument("build_vr_filtration: max_dim must be 1 or 2");
    if (max_filtration && *max_filtration < 0.0)
        throw std::invalid_argument("build_vr_filtration: negative max_filtration");

    const std::size_t n = pc.size();
    const double scale = convention_scale(convention);

    if (!max_filtration && max_dim == 2) {
        // Full complex size is known in closed form; reject before enumerating.
        const double total = static_cast<double>(n) +
                             static_cast<double>(n) * (n - 1) / 2.0 +
                             static_cast<double>(n) * (n - 1) * (n - 2) / 6.0;
        if (total > static_cast<double>(simplex_limit))
            budget_fail(static_cast<std::size_t>(total), simplex_limit);
    }

    auto edges = build_edges(pc, scale, max_filtration);
    std::size_t count = n + edges.size();
    if (count > simplex_limit) budget_fail(count, simplex_limit);

    VRComplex cx;
    cx.convention = convention;
    cx.max_filtration = max_filtration;
    cx.point_count = n;
    cx.simplices.reserve(count);
    for (std::uint32_t v = 0; v < n; ++v)
        cx.simplices.push_back({{v, kNoVertex, kNoVertex}, 0, 0.0});
    for (const auto& e : edges)
        cx.simplices.push_back({{e.a, e.b, kNoVertex}, 1, e.value});

    if (max_dim == 2) {
        // Edge value lookup for triangle values.
        std::vector<std::vector<std::pair<std::uint32_t, double>>> adj(n);
        for (const auto& e : edges) adj[e.a].push_back({e.b, e.value});
        for (auto& v : adj) std::sort(v.begin(), v.end());

        for (std::uint32_t a = 0; a < n; ++a) {
            for (std::size_t i = 0; i < adj[a].size(); ++i) {
                for (std::size_t j = i + 1; j < adj[a].size(); ++j) {
                    const auto [b, vab] = adj[a][i];
                    const auto [c, vac] = adj[a][j];
                    auto it = std::lower_bound(adj[b].begin(), adj[b].end(),
                                               std::make_pair(c, 0.0));
                    if (it == adj[b].end() || it->first != c) continue;
                    const double v = std::max({vab, vac, it->second});
                    if (++count > simplex_limit) budget_fail(count, simplex_limit);
                    cx.simplices.push_back({{a, b, c}, 2, v});
                }
            }
        }
    }

    std::sort(cx.simplices.begin(), cx.simplices.end(),
              [](const Simplex& x, const Simplex& y) {
                  return std::tie(x.value, x.dim, x.vertices) <
                         std::tie(y.value, y.dim, y.vertices);
              });
    return cx;
}

PersistenceDiagram ph0(const PointCloud& pc, FiltrationConvention convention) {
    require_nonempty(pc, "ph0");
    require_finite(pc, "ph0");
    PersistenceDiagram d;
    d.convention = convention;
    d.point_count = pc.size();
    const double scale = convention_scale(convention);
    for (const auto& e : euclidean_mst(pc))
        d.pairs.push_back({0, 0.0, e.weight * scale, false});
    d.pairs.push_back({0, 0.0, kInfDeath, true});
    return d;
}

PersistenceDiagram ph1(const PointCloud& pc, FiltrationConvention convention,
                       std::optional<double> max_filtration, std::size_t simplex_limit) {
    require_nonempty(pc, "ph1");
    require_finite(pc, "ph1");
    const std::size_t n = pc.size();
    const double scale = convention_scale(convention);

    if (!max_filtration) {
        const double total = static_cast<double>(n) +
                             static_cast<double>(n) * (n - 1) / 2.0 +
                             static_cast<double>(n) * (n - 1) * (n - 2) / 6.0;
        if (total > static_cast<double>(simplex_limit))
            budget_fail(static_cast<std::size_t>(total), simplex_limit);
    }

    auto edges = build_edges(pc, scale, max_filtration);
    const std::uint32_t ne = static_cast<std::uint32_t>(edges.size());

    // Edges that merge components are negative (they die in dim 0); the rest
    // create 1-cycles.
    std::vector<bool> positive(ne, false);
    {
        DisjointSets ds(n);
        for (std::uint32_t e = 0; e < ne; ++e)
            positive[e] = !ds.unite(edges[e].a, edges[e].b);
    }

    // Edge id lookup: (a, b) -> index in filtration order.
    std::vector<std::vector<std::pair<std::uint32_t, std::uint32_t>>> adj(n);
    for (std::uint32_t e = 0; e < ne; ++e) adj[edges[e].a].push_back({edges[e].b, e});
    for (auto& v : adj) std::sort(v.begin(), v.end());

    // Triangles in filtration order (value, lex).
    struct Tri {
        double value;
        std::array<std::uint32_t, 3> verts;  // ascending vertex ids
        std::uint32_t e0, e1, e2;            // ascending edge ids
    };
    std::vector<Tri> tris;
    std::size_t count = n + ne;
    for (std::uint32_t a = 0; a < n; ++a) {
        for (std::size_t i = 0; i < adj[a].size(); ++i) {
            for (std::size_t j = i + 1; j < adj[a].size(); ++j) {
                const auto [b, eab] = adj[a][i];
                const auto [c, eac] = adj[a][j];
                auto it = std::lower_bound(adj[b].begin(), adj[b].end(),
                                           std::make_pair(c, std::uint32_t{0}));
                if (it == adj[b].end() || it->first != c) continue;
                const std::uint32_t ebc = it->second;
                if (++count > simplex_limit) budget_fail(count, simplex_limit);
                std::array<std::uint32_t, 3> ids{eab, eac, ebc};
                std::sort(ids.begin(), ids.end());
                const double v =
                    std::max({edges[eab].value, edges[eac].value, edges[ebc].value});
                tris.push_back({v, {a, b, c}, ids[0], ids[1], ids[2]});
            }
        }
    }
    // Ties resolved by lexicographic vertex triple, matching the VRComplex order.
    std::sort(tris.begin(), tris.end(), [](const Tri& x, const Tri& y) {
        return std::tie(x.value, x.verts) < std::tie(y.value, y.verts);
    });

    PersistenceDiagram d;
    d.convention = convention;
    d.point_count = n;

    // Column reduction over Z/2; only pivot columns are retained.
    std::vector<std::vector<std::uint32_t>> pivot_col(ne);
    std::vector<bool> has_pivot(ne, false);
    std::vector<std::uint32_t> col, merged;
    for (const auto& t : tris) {
        col = {t.e0, t.e1, t.e2};
        while (!col.empty()) {
            const std::uint32_t low = col.back();
            if (!has_pivot[low]) break;
            // col ^= pivot_col[low] (sorted symmetric difference)
            const auto& other = pivot_col[low];
            merged.clear();
            std::size_t i = 0, j = 0;
            while (i < col.size() && j < other.size()) {
                if (col[i] == other[j]) {
                    ++i;
                    ++j;
                } else if (col[i] < other[j]) {
                    merged.push_back(col[i++]);
                } else {
                    merged.push_back(other[j++]);
                }
            }
            while (i < col.size()) merged.push_back(col[i++]);
            while (j < other.size()) merged.push_back(other[j++]);
            col.swap(merged);
        }
        if (col.empty()) continue;
        const std::uint32_t low = col.back();
        const double birth = edges[low].value;
        if (t.value > birth) d.pairs.push_back({1, birth, t.value, false});
        has_pivot[low] = true;
        pivot_col[low] = col;
    }

    for (std::uint32_t e = 0; e < ne; ++e) {
        if (positive[e] && !has_pivot[e]) {
            const double death = max_filtration ? *max_filtration : kInfDeath;
            d.pairs.push_back({1, edges[e].value, death, true});
        }
    }

    std::sort(d.pairs.begin(), d.pairs.end(), [](const PersistencePair& x,
                                                 const PersistencePair& y) {
        return std::tie(x.birth, x.death, x.essential) <
               std::tie(y.birth, y.death, y.essential);
    });
    return d;
}

std::vector<std::size_t> single_linkage_components(const PointCloud& pc,
                                                   const SingleLinkageCut& cut) {
    require_nonempty(pc, "single_linkage_components");
    const std::size_t n = pc.size();
    if (cut.mode == SingleLinkageCut::Mode::Count && (cut.count < 1 || cut.count > n))
        throw std::invalid_argument("single_linkage_components: invalid component count");

    auto edges = euclidean_mst(pc);  // sorted by (weight, i, j)
    DisjointSets ds(n);
    if (cut.mode == SingleLinkageCut::Mode::Threshold) {
        for (const auto& e : edges)
            if (e.weight <= cut.threshold) ds.unite(e.i, e.j);
    } else {
        // Merge all but the count-1 largest edges.
        const std::size_t keep = edges.size() >= cut.count - 1
                                     ? edges.size() - (cut.count - 1)
                                     : 0;
        for (std::size_t i = 0; i < keep; ++i) ds.unite(edges[i].i, edges[i].j);
    }

    std::vector<std::size_t> label(n, static_cast<std::size_t>(-1));
    std::vector<std::size_t> root_label(n, static_cast<std::size_t>(-1));
    std::size_t next = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t r = ds.find(i);
        if (root_label[r] == static_cast<std::size_t>(-1)) root_label[r] = next++;
        label[i] = root_label[r];
    }
    return label;
}

std::pair<double, double> diagram_stats(const PersistenceDiagram& d) {
    double sum[2] = {0.0, 0.0};
    std::size_t cnt[2] = {0, 0};
    for (const auto& p : d.pairs) {
        if (p.essential || !std::isfinite(p.death)) continue;
        sum[p.dim] += p.death - p.birth;
        ++cnt[p.dim];
    }
    return {cnt[0] ? sum[0] / cnt[0] : 0.0, cnt[1] ? sum[1] / cnt[1] : 0.0};
}

std::string diagram_to_csv(const PersistenceDiagram& d) {
    std::string out = "dim,birth,death\n";
    for (const auto& p : d.pairs) {
        out += std::to_string(p.dim);
        out += ',';
        out += format_double(p.birth);
        out += ',';
        out += p.essential || !std::isfinite(p.death) ? "inf" : format_double(p.death);
        out += '\n';
    }
    return out;
}

PersistenceDiagram diagram_from_csv(const std::string& csv) {
    PersistenceDiagram d;
    std::istringstream in(csv);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line == "\r") continue;
        if (lineno == 1 && line.rfind("dim,", 0) == 0) continue;
        std::istringstream ss(line);
        std::string dim_s, birth_s, death_s;
        if (!std::getline(ss, dim_s, ',') || !std::getline(ss, birth_s, ',') ||
            !std::getline(ss, death_s))
            throw std::runtime_error("bad diagram CSV at line " + std::to_string(lineno));
        PersistencePair p{};
        p.dim = std::stoi(dim_s);
        p.birth = std::strtod(birth_s.c_str(), nullptr);
        if (death_s == "inf" || death_s == "inf\r") {
            p.death = kInfDeath;
            p.essential = true;
        } else {
            p.death = std::strtod(death_s.c_str(), nullptr);
        }
        d.pairs.push_back(p);
    }
    return d;
}

}  // namespace topopc
