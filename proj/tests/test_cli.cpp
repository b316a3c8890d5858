#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "topopc/io.hpp"
#include "topopc/persistence.hpp"
#include "topopc/svg.hpp"

using namespace topopc;
namespace fs = std::filesystem;

namespace {

const std::string kCli = TOPOPC_CLI_PATH;

struct TempDir {
    fs::path path;
    TempDir() : path(fs::temp_directory_path() / ("topopc_cli_" + std::to_string(::getpid()))) {
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    std::string file(const std::string& name) const { return (path / name).string(); }
};

int run(const std::string& args) { return std::system((kCli + " " + args + " 2>/dev/null").c_str()); }

void write(const std::string& path, const std::string& content) {
    std::ofstream(path) << content;
}

std::string slurp(const std::string& path) { return read_file(path); }

}  // namespace

TEST_CASE("svg rendering") {
    PersistenceDiagram d;
    d.pairs = {{0, 0, 1.0, false}, {1, 1.0, std::sqrt(2.0), false}, {0, 0, kInfDeath, true}};
    auto svg = diagram_to_svg(d);
    CHECK(svg.find("<svg") != std::string::npos);
    CHECK(svg.find("stroke-dasharray") != std::string::npos);  // diagonal
    CHECK(svg.find("circle") != std::string::npos);            // dim-0 points
    CHECK(svg.find("polygon") != std::string::npos);           // dim-1 triangles
    CHECK(svg.find("death = inf") != std::string::npos);       // essential gutter
}

TEST_CASE("cli convert round trip") {
    TempDir t;
    write(t.file("in.xyz"), "0 0 0\n1 0 0\n0.1234567890123456 2 3\n");
    REQUIRE(run("convert --in " + t.file("in.xyz") + " --out " + t.file("a.ply") +
                " --out-format ply") == 0);
    REQUIRE(run("convert --in " + t.file("a.ply") + " --out " + t.file("b.xyz") +
                " --out-format xyz") == 0);
    auto a = load_pointcloud(t.file("in.xyz"));
    auto b = load_pointcloud(t.file("b.xyz"));
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
}

TEST_CASE("cli ph on the unit square emits the expected row and an svg") {
    TempDir t;
    write(t.file("sq.xyz"), "0 0 0\n1 0 0\n1 1 0\n0 1 0\n");
    REQUIRE(run("ph --in " + t.file("sq.xyz") + " --out " + t.file("d.csv") + " --svg " +
                t.file("d.svg")) == 0);
    auto csv = slurp(t.file("d.csv"));
    CHECK(csv.find("1,1,1.4142135623730951") != std::string::npos);
    CHECK(csv.find("0,0,inf") != std::string::npos);
    CHECK(slurp(t.file("d.svg")).find("<svg") != std::string::npos);

    REQUIRE(run("diagram-svg --in " + t.file("d.csv") + " --out " + t.file("d2.svg")) == 0);
    CHECK(slurp(t.file("d2.svg")).find("polygon") != std::string::npos);
}

TEST_CASE("cli degrade determinism and manifest replay") {
    TempDir t;
    std::string gt = t.file("gt.xyz");
    {
        std::ofstream f(gt);
        for (int i = 0; i < 40; ++i) f << i << " " << (i * i % 7) << " 0\n";
    }
    const std::string base = "degrade --in " + gt +
                             " --mode nonuniform --n 10 --seed 5 --viewpoint 50,0,0 --out ";
    REQUIRE(run(base + t.file("a.xyz") + " --manifest " + t.file("a.json")) == 0);
    REQUIRE(run(base + t.file("b.xyz")) == 0);
    CHECK(slurp(t.file("a.xyz")) == slurp(t.file("b.xyz")));

    REQUIRE(run("degrade --from-manifest " + t.file("a.json") + " --out " + t.file("c.xyz")) ==
            0);
    CHECK(slurp(t.file("c.xyz")) == slurp(t.file("a.xyz")));

    // tampered ground truth is rejected
    write(gt, "0 0 0\n1 1 1\n");
    CHECK(run("degrade --from-manifest " + t.file("a.json") + " --out " + t.file("d.xyz")) !=
          0);

    // randomized modes refuse to run without a seed
    CHECK(run("degrade --in " + gt + " --mode uniform --n 1 --out " + t.file("e.xyz")) != 0);
}

TEST_CASE("cli skeletonize writes trajectory files") {
    TempDir t;
    write(t.file("in.xyz"), "0 0 0\n0.1 0 0\n3 0 0\n3.1 0 0\n");
    REQUIRE(run("skeletonize --in " + t.file("in.xyz") + " --out-prefix " + t.file("run") +
                " --k 1 --iterations 200 --snapshot-every 100") == 0);
    CHECK(fs::exists(t.file("run_initial.xyz")));
    CHECK(fs::exists(t.file("run_0001.xyz")));
    CHECK(fs::exists(t.file("run_0002.xyz")));
    CHECK(fs::exists(t.file("run_final.xyz")));
    auto log = slurp(t.file("run_log.csv"));
    CHECK(log.find("iteration,topo,fidelity,total\n") == 0);
}

TEST_CASE("cli bosh evaluates the hand example") {
    TempDir t;
    write(t.file("c.xyz"), "0 0 0\n2 0 0\n");
    write(t.file("p.xyz"), "0 0 0\n");
    write(t.file("pairs.csv"), t.file("c.xyz") + "," + t.file("p.xyz") + "\n");
    REQUIRE(run("bosh --pairs " + t.file("pairs.csv") + " --out " + t.file("loss.csv") +
                " --backbones 1 --sizes 1") == 0);
    auto csv = slurp(t.file("loss.csv"));
    CHECK(csv.find("total,,8") != std::string::npos);

    // external identity net
    REQUIRE(run("bosh --pairs " + t.file("pairs.csv") + " --out " + t.file("loss2.csv") +
                " --backbones 1 --sizes 1 --net cat") == 0);
    CHECK(slurp(t.file("loss2.csv")) == csv);
}

TEST_CASE("cli errors are single machine-parsable lines") {
    TempDir t;
    const std::string cmd = kCli + " ph --in " + t.file("missing.xyz") + " --out " +
                            t.file("o.csv") + " 2>" + t.file("err.txt");
    CHECK(std::system(cmd.c_str()) != 0);
    auto err = slurp(t.file("err.txt"));
    CHECK(err.rfind("error: ", 0) == 0);
    CHECK(std::count(err.begin(), err.end(), '\n') == 1);
    CHECK_FALSE(fs::exists(t.file("o.csv")));  // no partial output

    // unknown flags rejected
    CHECK(run("ph --in x --out y --bogus 1") != 0);

    // size-guard budget honored via environment
    write(t.file("sq.xyz"), "0 0 0\n1 0 0\n1 1 0\n0 1 0\n");
    const std::string guarded = "TOPOPC_SIMPLEX_LIMIT=3 " + kCli + " ph --in " +
                                t.file("sq.xyz") + " --out " + t.file("g.csv") +
                                " 2>" + t.file("gerr.txt");
    CHECK(std::system(guarded.c_str()) != 0);
    CHECK(slurp(t.file("gerr.txt")).rfind("error: ", 0) == 0);
}
