// topopc: point-cloud topology toolbox command line.

#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "topopc/bosh.hpp"
#include "topopc/degrade.hpp"
#include "topopc/distances.hpp"
#include "topopc/io.hpp"
#include "topopc/metrics.hpp"
#include "topopc/persistence.hpp"
#include "topopc/point_cloud.hpp"
#include "topopc/svg.hpp"
#include "topopc/topo_loss.hpp"

namespace fs = std::filesystem;
using namespace topopc;

namespace {

struct CliError : std::runtime_error {
    std::string code;
    CliError(std::string c, const std::string& msg)
        : std::runtime_error(msg), code(std::move(c)) {}
};

CloudFormat parse_format(const std::string& s) {
    if (s == "xyz") return CloudFormat::Xyz;
    if (s == "ply") return CloudFormat::PlyAscii;
    if (s == "auto") return CloudFormat::Auto;
    throw CliError("invalid-argument", "unknown format \"" + s + "\"");
}

FiltrationConvention parse_convention(const std::string& s) {
    if (s == "diameter") return FiltrationConvention::Diameter;
    if (s == "radius") return FiltrationConvention::Radius;
    throw CliError("invalid-argument", "unknown convention \"" + s + "\"");
}

std::size_t simplex_limit_from_env() {
    if (const char* v = std::getenv("TOPOPC_SIMPLEX_LIMIT")) {
        char* end = nullptr;
        const auto parsed = std::strtoull(v, &end, 10);
        if (end && *end == '\0' && parsed > 0) return static_cast<std::size_t>(parsed);
        throw CliError("invalid-argument", "bad TOPOPC_SIMPLEX_LIMIT value");
    }
    return kDefaultSimplexLimit;
}

Point3 parse_point(const std::string& s) {
    std::istringstream ss(s);
    double x, y, z;
    char c1, c2;
    if (!(ss >> x >> c1 >> y >> c2 >> z) || c1 != ',' || c2 != ',')
        throw CliError("invalid-argument", "expected \"x,y,z\", got \"" + s + "\"");
    return Point3(x, y, z);
}

std::string zero_pad(std::size_t v, int width) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%0*zu", width, v);
    return buf;
}

// ---- subcommands ----

int cmd_convert(const std::string& in, const std::string& out, const std::string& in_fmt,
                const std::string& out_fmt) {
    auto pc = load_pointcloud(in, parse_format(in_fmt));
    CloudFormat f = parse_format(out_fmt);
    if (f == CloudFormat::Auto) f = CloudFormat::Xyz;
    save_pointcloud(pc, out, f);
    return 0;
}

int cmd_ph(const std::string& in, const std::string& out, const std::string& dims,
           const std::string& convention, std::optional<double> cap,
           const std::string& svg_out) {
    auto pc = load_pointcloud(in);
    const auto conv = parse_convention(convention);
    const auto limit = simplex_limit_from_env();

    PersistenceDiagram d;
    d.convention = conv;
    d.point_count = pc.size();
    if (dims != "0" && dims != "1" && dims != "01")
        throw CliError("invalid-argument", "--dims must be 0, 1 or 01");
    if (dims == "0" || dims == "01") {
        auto d0 = ph0(pc, conv);
        d.pairs.insert(d.pairs.end(), d0.pairs.begin(), d0.pairs.end());
    }
    if (dims == "1" || dims == "01") {
        auto d1 = ph1(pc, conv, cap, limit);
        d.pairs.insert(d.pairs.end(), d1.pairs.begin(), d1.pairs.end());
    }
    write_file_atomic(out, diagram_to_csv(d));
    if (!svg_out.empty()) write_file_atomic(svg_out, diagram_to_svg(d));
    return 0;
}

int cmd_diagram_svg(const std::string& in, const std::string& out) {
    auto d = diagram_from_csv(read_file(in));
    write_file_atomic(out, diagram_to_svg(d));
    return 0;
}

int cmd_metrics(const std::string& dir, const std::vector<std::string>& class_specs,
                const std::string& out_csv, const std::string& out_text,
                std::size_t plane_k, const std::string& convention, std::size_t budget,
                std::optional<double> cap, const std::string& plane_fit) {
    MetricsConfig cfg;
    cfg.plane_k = plane_k;
    cfg.convention = parse_convention(convention);
    cfg.ph1_budget = budget;
    cfg.ph1_cap = cap;
    if (plane_fit == "tls")
        cfg.plane_fit = PlaneFitMethod::TotalLeastSquares;
    else if (plane_fit == "zreg")
        cfg.plane_fit = PlaneFitMethod::ZRegression;
    else
        throw CliError("invalid-argument", "--plane-fit must be tls or zreg");

    std::map<std::string, std::vector<PointCloud>> dataset;
    auto add_path = [&](const std::string& cls, const fs::path& p) {
        if (fs::is_directory(p)) {
            std::vector<fs::path> files;
            for (const auto& e : fs::directory_iterator(p))
                if (e.is_regular_file()) files.push_back(e.path());
            std::sort(files.begin(), files.end());
            for (const auto& f : files) dataset[cls].push_back(load_pointcloud(f.string()));
        } else {
            dataset[cls].push_back(load_pointcloud(p.string()));
        }
    };
    if (!dir.empty()) {
        std::vector<fs::path> subdirs;
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_directory()) subdirs.push_back(e.path());
        std::sort(subdirs.begin(), subdirs.end());
        for (const auto& s : subdirs) add_path(s.filename().string(), s);
    }
    for (const auto& spec : class_specs) {
        auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw CliError("invalid-argument", "--class expects name=path");
        add_path(spec.substr(0, eq), spec.substr(eq + 1));
    }
    if (dataset.empty()) throw CliError("invalid-argument", "no input classes given");

    auto report = aggregate_report(dataset, cfg);
    if (!out_csv.empty()) write_file_atomic(out_csv, report_to_csv(report));
    if (!out_text.empty()) write_file_atomic(out_text, report_to_text(report));
    if (out_csv.empty() && out_text.empty()) std::cout << report_to_text(report);
    return 0;
}

int cmd_degrade(const std::string& in, const std::string& out, const std::string& mode,
                std::size_t n, std::uint64_t seed, const std::string& viewpoint_str,
                std::optional<std::uint64_t> viewpoint_seed, const std::string& weighting,
                const std::string& manifest_out, const std::string& from_manifest) {
    std::string gt_path = in;
    DegradeSpec spec;
    if (!from_manifest.empty()) {
        std::string recorded_hash;
        spec = spec_from_manifest(read_file(from_manifest), gt_path, recorded_hash);
        const std::string bytes = read_file(gt_path);
        if (content_hash(bytes) != recorded_hash)
            throw CliError("manifest",
                           "ground-truth content hash does not match the manifest");
    } else {
        if (mode == "partial")
            spec.mode = DegradeMode::Partial;
        else if (mode == "nonuniform")
            spec.mode = DegradeMode::Nonuniform;
        else if (mode == "uniform")
            spec.mode = DegradeMode::Uniform;
        else
            throw CliError("invalid-argument",
                           "--mode must be partial, nonuniform or uniform");
        spec.n = n;
        spec.seed = seed;
        spec.weighting = weighting == "inverse" ? DistanceWeighting::Inverse
                                                : DistanceWeighting::Proportional;
    }

    const std::string gt_bytes = read_file(gt_path);
    auto gt = parse_pointcloud(gt_bytes, CloudFormat::Auto, gt_path);

    if (from_manifest.empty() && spec.mode != DegradeMode::Uniform) {
        if (!viewpoint_str.empty())
            spec.viewpoint.position = parse_point(viewpoint_str);
        else if (viewpoint_seed)
            spec.viewpoint = random_viewpoint(gt, *viewpoint_seed);
        else
            throw CliError("invalid-argument",
                           "partial/nonuniform modes need --viewpoint or --viewpoint-seed");
    }

    auto degraded = apply_degrade(gt, spec);
    save_pointcloud(degraded, out, CloudFormat::Xyz);
    const std::string manifest = degrade_manifest(gt_path, content_hash(gt_bytes), spec);
    write_file_atomic(manifest_out.empty() ? out + ".manifest.json" : manifest_out,
                      manifest);
    return 0;
}

int cmd_skeletonize(const std::string& in, const std::string& prefix, std::size_t k,
                    const std::string& convention, std::size_t iterations, double step,
                    double lambda_topo, double lambda_fid, std::size_t snapshot_every) {
    auto pc = load_pointcloud(in);
    TopoLossConfig cfg{k, parse_convention(convention)};
    SkeletonizeOptions opt{iterations, step, lambda_topo, lambda_fid, snapshot_every};
    auto res = skeletonize(pc, cfg, opt);

    save_pointcloud(res.initial, prefix + "_initial.xyz");
    for (std::size_t i = 0; i < res.snapshots.size(); ++i)
        save_pointcloud(res.snapshots[i], prefix + "_" + zero_pad(i + 1, 4) + ".xyz");
    save_pointcloud(res.final, prefix + "_final.xyz");

    std::string log = "iteration,topo,fidelity,total\n";
    for (const auto& row : res.log)
        log += std::to_string(row.iteration) + ',' + format_double(row.topo) + ',' +
               format_double(row.fidelity) + ',' + format_double(row.total) + '\n';
    write_file_atomic(prefix + "_log.csv", log);
    if (res.diverged)
        throw CliError("diverged", "loss grew for 50 consecutive iterations");
    return 0;
}

int cmd_bosh(const std::string& pairs_file, const std::string& out, std::size_t backbones,
             const std::string& sizes_str, const std::string& sampler, std::uint64_t seed,
             const std::string& net_cmd, const std::string& metric,
             const std::string& reduction) {
    std::vector<CompletionPair> pairs;
    std::istringstream in(read_file(pairs_file));
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        auto comma = line.find(',');
        if (comma == std::string::npos)
            throw CliError("parse", "pairs file line " + std::to_string(lineno) +
                                        ": expected \"complete,partial\"");
        pairs.push_back({load_pointcloud(line.substr(0, comma)),
                         load_pointcloud(line.substr(comma + 1))});
    }

    BoshConfig cfg;
    cfg.backbone_count = backbones;
    cfg.seed = seed;
    if (sampler == "fps")
        cfg.sampler = BackboneSampler::Fps;
    else if (sampler == "uniform")
        cfg.sampler = BackboneSampler::Uniform;
    else
        throw CliError("invalid-argument", "--sampler must be fps or uniform");
    if (!sizes_str.empty()) {
        std::istringstream ss(sizes_str);
        std::string tok;
        while (std::getline(ss, tok, ',')) cfg.sizes.push_back(std::stoull(tok));
    }

    CompletionMap net = net_cmd.empty() ? identity_net() : external_net(net_cmd);
    const auto variant = metric == "l1" ? ChamferVariant::L1 : ChamferVariant::L2;
    const auto red = reduction == "mean" ? Reduction::Mean : Reduction::Sum;
    auto res = bosh_total_loss(pairs, net, cfg, variant, red);
    write_file_atomic(out, bosh_breakdown_csv(res));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"point-cloud topology toolbox"};
    app.require_subcommand(1);

    // convert
    std::string c_in, c_out, c_in_fmt = "auto", c_out_fmt = "auto";
    auto* convert = app.add_subcommand("convert", "convert between XYZ and ascii PLY");
    convert->add_option("--in", c_in)->required();
    convert->add_option("--out", c_out)->required();
    convert->add_option("--in-format", c_in_fmt)->check(CLI::IsMember({"xyz", "ply", "auto"}));
    convert->add_option("--out-format", c_out_fmt)->check(CLI::IsMember({"xyz", "ply", "auto"}));

    // ph
    std::string p_in, p_out, p_dims = "01", p_conv = "diameter", p_svg;
    std::optional<double> p_cap;
    auto* ph = app.add_subcommand("ph", "persistence diagram (dims 0 and/or 1)");
    ph->add_option("--in", p_in)->required();
    ph->add_option("--out", p_out)->required();
    ph->add_option("--dims", p_dims)->check(CLI::IsMember({"0", "1", "01"}));
    ph->add_option("--convention", p_conv)->check(CLI::IsMember({"diameter", "radius"}));
    ph->add_option("--cap", p_cap, "max filtration value");
    ph->add_option("--svg", p_svg, "also write an SVG plot");

    // diagram-svg
    std::string s_in, s_out;
    auto* dsvg = app.add_subcommand("diagram-svg", "plot a diagram CSV as SVG");
    dsvg->add_option("--in", s_in)->required();
    dsvg->add_option("--out", s_out)->required();

    // metrics
    std::string m_dir, m_csv, m_text, m_conv = "diameter", m_fit = "tls";
    std::vector<std::string> m_classes;
    std::size_t m_k = 10, m_budget = 512;
    std::optional<double> m_cap;
    auto* metrics = app.add_subcommand("metrics", "noise / non-uniformity / PH report");
    metrics->add_option("--dir", m_dir, "directory with one subdirectory per class");
    metrics->add_option("--class", m_classes, "name=path (file or directory), repeatable");
    metrics->add_option("--out-csv", m_csv);
    metrics->add_option("--out-text", m_text);
    metrics->add_option("--k", m_k, "plane-fit neighborhood size");
    metrics->add_option("--convention", m_conv)->check(CLI::IsMember({"diameter", "radius"}));
    metrics->add_option("--ph1-budget", m_budget, "FPS subsample size for ph1");
    metrics->add_option("--cap", m_cap, "ph1 filtration cap");
    metrics->add_option("--plane-fit", m_fit)->check(CLI::IsMember({"tls", "zreg"}));

    // degrade
    std::string d_in, d_out, d_mode, d_vp, d_weight = "proportional", d_manifest,
                d_from_manifest;
    std::size_t d_n = 0;
    std::uint64_t d_seed = 0;
    std::optional<std::uint64_t> d_vp_seed;
    bool d_seed_set = false;
    auto* degrade = app.add_subcommand("degrade", "viewpoint-partial / sparse sampling");
    degrade->add_option("--in", d_in);
    degrade->add_option("--out", d_out)->required();
    degrade->add_option("--mode", d_mode)
        ->check(CLI::IsMember({"partial", "nonuniform", "uniform"}));
    degrade->add_option("--n", d_n, "points to remove (partial) or sample");
    degrade->add_option("--seed", d_seed)->each([&](const std::string&) { d_seed_set = true; });
    degrade->add_option("--viewpoint", d_vp, "x,y,z");
    degrade->add_option("--viewpoint-seed", d_vp_seed);
    degrade->add_option("--weighting", d_weight)
        ->check(CLI::IsMember({"proportional", "inverse"}));
    degrade->add_option("--manifest", d_manifest, "manifest output path");
    degrade->add_option("--from-manifest", d_from_manifest, "regenerate from a manifest");

    // skeletonize
    std::string k_in, k_prefix, k_conv = "diameter";
    std::size_t k_k = 1, k_iters = 2000, k_snap = 100;
    double k_step = 2e-3, k_lt = 1.0, k_lf = 0.0;
    auto* skel = app.add_subcommand("skeletonize", "gradient-descent 0-dim skeleton");
    skel->add_option("--in", k_in)->required();
    skel->add_option("--out-prefix", k_prefix)->required();
    skel->add_option("--k", k_k, "protected component count");
    skel->add_option("--convention", k_conv)->check(CLI::IsMember({"diameter", "radius"}));
    skel->add_option("--iterations", k_iters);
    skel->add_option("--step", k_step);
    skel->add_option("--lambda-topo", k_lt);
    skel->add_option("--lambda-fid", k_lf);
    skel->add_option("--snapshot-every", k_snap);

    // bosh
    std::string b_pairs, b_out, b_sizes, b_sampler = "fps", b_net, b_metric = "l2",
                b_red = "sum";
    std::size_t b_backbones = 1;
    std::uint64_t b_seed = 0;
    auto* bosh = app.add_subcommand("bosh", "backbone sampler total-loss evaluation");
    bosh->add_option("--pairs", b_pairs, "CSV of complete,partial paths")->required();
    bosh->add_option("--out", b_out)->required();
    bosh->add_option("--backbones", b_backbones);
    bosh->add_option("--sizes", b_sizes, "comma-separated backbone sizes");
    bosh->add_option("--sampler", b_sampler)->check(CLI::IsMember({"fps", "uniform"}));
    bosh->add_option("--seed", b_seed);
    bosh->add_option("--net", b_net, "external completion command (stdin/stdout XYZ)");
    bosh->add_option("--metric", b_metric)->check(CLI::IsMember({"l1", "l2"}));
    bosh->add_option("--reduction", b_red)->check(CLI::IsMember({"sum", "mean"}));

    CLI11_PARSE(app, argc, argv);

    try {
        if (convert->parsed()) return cmd_convert(c_in, c_out, c_in_fmt, c_out_fmt);
        if (ph->parsed()) return cmd_ph(p_in, p_out, p_dims, p_conv, p_cap, p_svg);
        if (dsvg->parsed()) return cmd_diagram_svg(s_in, s_out);
        if (metrics->parsed())
            return cmd_metrics(m_dir, m_classes, m_csv, m_text, m_k, m_conv, m_budget,
                               m_cap, m_fit);
        if (degrade->parsed()) {
            if (d_from_manifest.empty()) {
                if (d_in.empty())
                    throw CliError("invalid-argument", "--in is required without --from-manifest");
                if (d_mode.empty())
                    throw CliError("invalid-argument", "--mode is required without --from-manifest");
                if (!d_seed_set && d_mode != "partial")
                    throw CliError("invalid-argument",
                                   "randomized modes require an explicit --seed");
            }
            return cmd_degrade(d_in, d_out, d_mode, d_n, d_seed, d_vp, d_vp_seed, d_weight,
                               d_manifest, d_from_manifest);
        }
        if (skel->parsed())
            return cmd_skeletonize(k_in, k_prefix, k_k, k_conv, k_iters, k_step, k_lt,
                                   k_lf, k_snap);
        if (bosh->parsed())
            return cmd_bosh(b_pairs, b_out, b_backbones, b_sizes, b_sampler, b_seed, b_net,
                            b_metric, b_red);
    } catch (const CliError& e) {
        std::cerr << "error: " << e.code << ": " << e.what() << '\n';
        return 1;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: invalid-argument: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: runtime: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
