// Acceptance harness: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Each check is self-contained and uses the brute-force oracles from
// oracles.hpp rather than the library code paths it is judging.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "topopc/bosh.hpp"
#include "topopc/degrade.hpp"
#include "topopc/distances.hpp"
#include "topopc/io.hpp"
#include "topopc/metrics.hpp"
#include "topopc/persistence.hpp"
#include "topopc/topo_loss.hpp"

using namespace topopc;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok, const std::string& detail = "") {
    std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << criterion << ": " << name;
    if (!ok && !detail.empty()) std::cout << "  [" << detail << "]";
    std::cout << std::endl;
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

PointCloud regular_polygon(std::size_t n, double side) {
    const double r = side / (2.0 * std::sin(M_PI / static_cast<double>(n)));
    PointCloud pc;
    for (std::size_t i = 0; i < n; ++i) {
        const double a = 2.0 * M_PI * static_cast<double>(i) / static_cast<double>(n);
        pc.points.emplace_back(r * std::cos(a), r * std::sin(a), 0.0);
    }
    return pc;
}

PointCloud planar_grid(std::size_t side) {
    PointCloud pc;
    for (std::size_t i = 0; i < side; ++i)
        for (std::size_t j = 0; j < side; ++j)
            pc.points.emplace_back(static_cast<double>(i), static_cast<double>(j), 0.0);
    return pc;
}

std::vector<double> finite_deaths0(const PersistenceDiagram& d) {
    std::vector<double> out;
    for (const auto& p : d.pairs)
        if (p.dim == 0 && !p.essential) out.push_back(p.death);
    std::sort(out.begin(), out.end());
    return out;
}

// ---- criteria ----

void criterion_1() {
    const auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::string detail;
    for (std::uint64_t s = 0; s < 200 && ok; ++s) {
        auto pc = oracle::random_cloud(10000 + s, 2 + s % 39);
        auto got = finite_deaths0(ph0(pc));
        auto want = oracle::ph0_deaths_union_find(pc, 1.0);
        if (got.size() != want.size()) {
            ok = false;
            detail = "pair count mismatch at seed " + std::to_string(s);
            break;
        }
        for (std::size_t i = 0; i < got.size(); ++i)
            if (std::abs(got[i] - want[i]) > 1e-12) {
                ok = false;
                detail = "death mismatch at seed " + std::to_string(s);
                break;
            }
    }
    const double dt = seconds_since(t0);
    if (ok && dt >= 10.0) {
        ok = false;
        detail = "took " + std::to_string(dt) + " s";
    }
    report(1, "ph0 equals union-find oracle on 200 clouds in < 10 s", ok, detail);
}

void criterion_2() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t s = 0; s < 100 && ok; ++s) {
        auto pc = oracle::random_cloud(20000 + s, 2 + s % 11);
        auto cx = build_vr_filtration(pc, 2, std::nullopt, FiltrationConvention::Diameter);
        auto want = oracle::full_boundary_reduction(cx);
        std::vector<std::pair<double, double>> got;
        for (const auto& p : ph1(pc).pairs)
            if (!p.essential) got.emplace_back(p.birth, p.death);
        std::sort(got.begin(), got.end());
        if (got != want.dim1 || !want.essential_dim1_births.empty()) {
            ok = false;
            detail = "dim-1 mismatch at seed " + std::to_string(s);
        }

        auto got0 = finite_deaths0(ph0(pc));
        std::vector<double> want0;
        for (auto& [b, d] : want.dim0) want0.push_back(d);
        std::sort(want0.begin(), want0.end());
        if (got0 != want0) {
            ok = false;
            detail = "dim-0 mismatch at seed " + std::to_string(s);
        }
    }
    report(2, "ph1 equals full boundary-matrix reduction on 100 clouds", ok, detail);
}

void criterion_3() {
    bool ok = true;
    std::string detail;

    PointCloud square({Point3(0, 0, 0), Point3(1, 0, 0), Point3(1, 1, 0), Point3(0, 1, 0)});
    auto sq = ph1(square);
    if (sq.pairs.size() != 1 || std::abs(sq.pairs[0].birth - 1.0) > 1e-9 ||
        std::abs(sq.pairs[0].death - std::sqrt(2.0)) > 1e-9) {
        ok = false;
        detail = "unit square";
    }

    auto hex = ph1(regular_polygon(6, 1.0));
    if (hex.pairs.size() != 1 || std::abs(hex.pairs[0].birth - 1.0) > 1e-9 ||
        std::abs(hex.pairs[0].death - std::sqrt(3.0)) > 1e-9) {
        ok = false;
        detail = "hexagon";
    }

    auto circle = ph1(regular_polygon(64, 2.0 * std::sin(M_PI / 64.0)));
    std::size_t persistent = 0;
    for (const auto& p : circle.pairs) persistent += p.persistence() > 0.5;
    if (persistent != 1) {
        ok = false;
        detail = "circle has " + std::to_string(persistent) + " persistent cycles";
    }

    report(3, "closed-form anchors (square, hexagon, 64-point circle)", ok, detail);
}

void criterion_4() {
    bool ok = true;
    std::string detail;
    double worst = 0.0;
    for (std::uint64_t s = 0; s < 50 && ok; ++s) {
        auto pc = oracle::separated_cloud(30000 + s, 4 + s % 12, 0.05);
        for (std::size_t k : {1, 2, 3}) {
            TopoLossConfig cfg;
            cfg.k = k;
            const double err = fd_check(pc, cfg, 1e-5);
            worst = std::max(worst, err);
            if (err >= 1e-4) {
                ok = false;
                detail = "seed " + std::to_string(s) + " k " + std::to_string(k) + " err " +
                         std::to_string(err);
            }
        }
    }
    report(4, "topo_loss gradient matches finite differences (worst " +
                  std::to_string(worst) + ")",
           ok, detail);
}

void criterion_5() {
    const auto t0 = std::chrono::steady_clock::now();
    auto g = oracle::gaussian_pattern(42, 60);
    PointCloud pc;
    std::size_t c = 0;
    for (int i = 0; i < 10; ++i) pc.points.emplace_back(0.2 * g[c++], 0.2 * g[c++], 0.2 * g[c++]);
    for (int i = 0; i < 10; ++i)
        pc.points.emplace_back(5.0 + 0.2 * g[c++], 0.2 * g[c++], 0.2 * g[c++]);

    bool ok = true;
    std::string detail;

    TopoLossConfig k2;
    k2.k = 2;
    SkeletonizeOptions opt;
    auto res2 = skeletonize(pc, k2, opt);
    if (!(res2.log.back().topo < 0.1 * res2.log.front().topo)) {
        ok = false;
        detail = "k=2 final loss " + std::to_string(res2.log.back().topo) + " vs initial " +
                 std::to_string(res2.log.front().topo);
    }
    auto labels = single_linkage_components(res2.final, SingleLinkageCut::by_threshold(0.1));
    if (std::set<std::size_t>(labels.begin(), labels.end()).size() != 2) {
        ok = false;
        detail = "k=2 component count";
    }

    TopoLossConfig k1;
    SkeletonizeOptions long_run;
    long_run.step_size = 1e-2;  // gap closes at ~2*step per iteration
    long_run.iterations = 6000;
    auto res1 = skeletonize(pc, k1, long_run);
    auto l1 = single_linkage_components(res1.final, SingleLinkageCut::by_threshold(0.1));
    if (std::set<std::size_t>(l1.begin(), l1.end()).size() != 1) {
        ok = false;
        detail = "k=1 not connected at threshold 0.1";
    }

    const double dt = seconds_since(t0);
    if (ok && dt >= 5.0) {
        ok = false;
        detail = "took " + std::to_string(dt) + " s";
    }
    report(5, "skeletonization contracts two Gaussian clusters in < 5 s", ok, detail);
}

void criterion_6() {
    bool ok = true;
    std::string detail;

    auto grid = planar_grid(20);
    if (noise_metric(grid) > 1e-12 || non_uniformity(grid) > 1e-12) {
        ok = false;
        detail = "flat grid not exactly zero";
    }

    // (b) one fixed unit-variance z pattern, scaled by sigma; the z-regression
    // plane fit makes the metric exactly linear in the perturbation.
    auto pattern = oracle::gaussian_pattern(7, grid.size());
    std::vector<double> sigmas{0.01, 0.02, 0.05}, values;
    for (double s : sigmas) {
        PointCloud jittered = grid;
        for (std::size_t i = 0; i < grid.size(); ++i) jittered.points[i].z() += s * pattern[i];
        values.push_back(noise_metric(jittered, 10, PlaneFitMethod::ZRegression));
    }
    if (!(values[0] < values[1] && values[1] < values[2])) {
        ok = false;
        detail = "noise not strictly increasing in sigma";
    }
    for (std::size_t i = 1; i < sigmas.size(); ++i) {
        const double a = values[i] / sigmas[i], b = values[0] / sigmas[0];
        if (std::abs(a - b) / b > 1e-9) {
            ok = false;
            detail = "noise/sigma ratio drifts: " + std::to_string(a) + " vs " +
                     std::to_string(b);
        }
    }

    // (c) corner-viewpoint d^3 sampling vs uniform sampling, 20 seeds
    Viewpoint corner{Point3(0, 0, 0)};
    double nu_prop = 0.0, nu_unif = 0.0;
    for (std::uint64_t s = 0; s < 20; ++s) {
        nu_prop += non_uniformity(
            nonuniform_sample(grid, corner, 200, DistanceWeighting::Proportional, s));
        nu_unif += non_uniformity(uniform_sample(grid, 200, s));
    }
    if (!(nu_prop > nu_unif)) {
        ok = false;
        detail = "non-uniformity " + std::to_string(nu_prop / 20) + " not above uniform " +
                 std::to_string(nu_unif / 20);
    }

    report(6, "metric properties (flat zero, sigma scaling, sampling order)", ok, detail);
}

void criterion_7() {
    bool ok = true;
    std::string detail;

    auto gt = oracle::random_cloud(777, 120);
    DegradeSpec spec;
    spec.mode = DegradeMode::Nonuniform;
    spec.n = 40;
    spec.viewpoint = random_viewpoint(gt, 3);
    spec.seed = 99;
    const auto once = serialize_pointcloud(apply_degrade(gt, spec), CloudFormat::Xyz);
    const auto twice = serialize_pointcloud(apply_degrade(gt, spec), CloudFormat::Xyz);
    if (once != twice) {
        ok = false;
        detail = "repeat run not byte-identical";
    }

    // two points at distance 1 and 2: proportional d^3 weights 1 and 8
    PointCloud two({Point3(1, 0, 0), Point3(2, 0, 0)});
    Viewpoint origin{Point3(0, 0, 0)};
    std::size_t far_hits = 0;
    const std::size_t trials = 10000;
    for (std::uint64_t s = 0; s < trials; ++s)
        far_hits +=
            nonuniform_sample_indices(two, origin, 1, DistanceWeighting::Proportional, s)[0] ==
            1;
    const double freq = static_cast<double>(far_hits) / trials;
    if (std::abs(freq - 8.0 / 9.0) > 0.02) {
        ok = false;
        detail = "d^3 frequency " + std::to_string(freq);
    }

    // uniform inclusion frequency N/n per point
    const std::size_t n = 20, N = 5;
    auto base = oracle::random_cloud(5, n);
    std::vector<std::size_t> hits(n, 0);
    for (std::uint64_t s = 0; s < trials; ++s)
        for (auto i : uniform_sample_indices(base, N, s)) ++hits[i];
    for (std::size_t i = 0; i < n && ok; ++i) {
        const double f = static_cast<double>(hits[i]) / trials;
        if (std::abs(f - static_cast<double>(N) / n) > 0.02) {
            ok = false;
            detail = "inclusion frequency " + std::to_string(f) + " at index " +
                     std::to_string(i);
        }
    }

    report(7, "degradation determinism and sampling statistics", ok, detail);
}

void criterion_8() {
    bool ok = true;
    std::string detail;
    for (std::uint64_t s = 0; s < 50 && ok; ++s) {
        auto x = oracle::random_cloud(40000 + s, 20 + (s * 37) % 481);
        auto y = oracle::random_cloud(41000 + s, 20 + (s * 53) % 481);
        for (auto v : {ChamferVariant::L1, ChamferVariant::L2}) {
            const double got = chamfer(x, y, v);
            const double want = oracle::brute_chamfer(x, y, v == ChamferVariant::L2, false);
            if (std::abs(got - want) > 1e-12 * std::max(1.0, std::abs(want))) {
                ok = false;
                detail = "chamfer seed " + std::to_string(s);
            }
        }
        const double hg = hausdorff(x, y, HausdorffMode::OneSided);
        const double hw = oracle::brute_hausdorff_one_sided(x, y);
        if (std::abs(hg - hw) > 1e-12 * std::max(1.0, hw)) {
            ok = false;
            detail = "hausdorff seed " + std::to_string(s);
        }
    }
    report(8, "chamfer/hausdorff equal brute force on 50 pairs", ok, detail);
}

void criterion_9() {
    bool ok = true;
    std::string detail;

    CompletionPair pair;
    pair.complete = PointCloud({Point3(0, 0, 0), Point3(2, 0, 0)});
    pair.partial = PointCloud({Point3(0, 0, 0)});
    BoshConfig cfg;
    cfg.backbone_count = 1;
    cfg.sizes = {1};
    auto one = bosh_total_loss({pair}, identity_net(), cfg, ChamferVariant::L2, Reduction::Sum);
    if (std::abs(one.total - 8.0) > 1e-12) {
        ok = false;
        detail = "one-pair total " + std::to_string(one.total);
    }

    std::vector<CompletionPair> pairs;
    for (std::uint64_t s = 0; s < 5; ++s)
        pairs.push_back({oracle::random_cloud(600 + s, 15), oracle::random_cloud(700 + s, 7)});
    BoshConfig geo;
    geo.backbone_count = 2;
    auto all = bosh_total_loss(pairs, identity_net(), geo);
    double sum = 0.0;
    for (const auto& p : pairs) sum += bosh_total_loss({p}, identity_net(), geo).total;
    if (std::abs(all.total - sum) > 1e-9 * std::max(1.0, sum)) {
        ok = false;
        detail = "not additive over pairs";
    }

    report(9, "combined-loss evaluator: hand example totals 8 and is additive", ok, detail);
}

void criterion_10() {
    bool ok = true;
    std::string detail;

    auto big = oracle::random_cloud(12345, 10000);
    auto t0 = std::chrono::steady_clock::now();
    auto d0 = ph0(big);
    const double t_ph0 = seconds_since(t0);
    if (d0.pairs.size() != big.size() || t_ph0 >= 5.0) {
        ok = false;
        detail = "ph0 n=10000 took " + std::to_string(t_ph0) + " s";
    }

    auto mid = oracle::random_cloud(54321, 256);
    t0 = std::chrono::steady_clock::now();
    auto d1 = ph1(mid);
    const double t_ph1 = seconds_since(t0);
    if (t_ph1 >= 30.0) {
        ok = false;
        detail = "ph1 n=256 took " + std::to_string(t_ph1) + " s";
    }
    (void)d1;

    bool guarded = false;
    try {
        auto huge = oracle::random_cloud(1, 2000);  // C(2000,3) far beyond the budget
        ph1(huge);
    } catch (const std::runtime_error&) {
        guarded = true;
    }
    if (!guarded) {
        ok = false;
        detail = "size guard did not reject n=2000";
    }

    report(10,
           "performance (ph0 " + std::to_string(t_ph0) + " s, ph1 " + std::to_string(t_ph1) +
               " s, guard active)",
           ok, detail);
}

void criterion_11() {
    bool ok = true;
    std::string detail;

    const std::string cli = TOPOPC_CLI_PATH;
    const fs::path dir =
        fs::temp_directory_path() / ("topopc_accept_" + std::to_string(::getpid()));
    fs::create_directories(dir);
    auto file = [&](const std::string& name) { return (dir / name).string(); };
    auto run = [&](const std::string& args) {
        return std::system((cli + " " + args + " >/dev/null 2>&1").c_str());
    };

    // format round trip
    {
        std::ofstream f(file("in.xyz"));
        auto pc = oracle::random_cloud(2, 25, -3.0, 3.0);
        f << serialize_pointcloud(pc, CloudFormat::Xyz);
        f.close();
        if (run("convert --in " + file("in.xyz") + " --out " + file("r.ply") +
                " --out-format ply") != 0 ||
            run("convert --in " + file("r.ply") + " --out " + file("r.xyz") +
                " --out-format xyz") != 0 ||
            read_file(file("r.xyz")) != read_file(file("in.xyz"))) {
            ok = false;
            detail = "round trip not lossless";
        }
    }

    // diagram CSV row for the unit square
    {
        std::ofstream(file("sq.xyz")) << "0 0 0\n1 0 0\n1 1 0\n0 1 0\n";
        if (run("ph --in " + file("sq.xyz") + " --out " + file("d.csv")) != 0 ||
            read_file(file("d.csv")).find("1,1,1.4142135623730951") == std::string::npos) {
            ok = false;
            detail = "unit-square diagram row missing";
        }
    }

    // three-class metrics report: class rows plus a Mean row/column
    {
        for (const std::string& cls : {"airplane", "chair", "table"}) {
            fs::create_directories(dir / "corpus" / cls);
            for (int i = 0; i < 2; ++i) {
                auto pc = oracle::random_cloud(100 * std::hash<std::string>{}(cls) % 1000 + i,
                                               30);
                std::ofstream((dir / "corpus" / cls / ("c" + std::to_string(i) + ".xyz")))
                    << serialize_pointcloud(pc, CloudFormat::Xyz);
            }
        }
        if (run("metrics --dir " + file("corpus") + " --k 5 --out-csv " + file("m.csv") +
                " --out-text " + file("m.txt")) != 0) {
            ok = false;
            detail = "metrics run failed";
        } else {
            const auto csv = read_file(file("m.csv"));
            const auto text = read_file(file("m.txt"));
            for (const std::string& want :
                 {std::string("airplane"), std::string("chair"), std::string("table"),
                  std::string("Mean")}) {
                if (csv.find(want) == std::string::npos ||
                    text.find(want) == std::string::npos) {
                    ok = false;
                    detail = "report missing \"" + want + "\"";
                }
            }
        }
    }

    fs::remove_all(dir);
    report(11, "CLI contract (round trip, diagram row, 3-class report)", ok, detail);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    criterion_9();
    criterion_10();
    criterion_11();
    std::cout << (g_failures == 0 ? "all criteria passed"
                                  : std::to_string(g_failures) + " criteria failed")
              << std::endl;
    return g_failures == 0 ? 0 : 1;
}
