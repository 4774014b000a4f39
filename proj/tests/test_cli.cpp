#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "nomaqos/cli.hpp"
#include "nomaqos/io.hpp"

using namespace nomaqos;
namespace fs = std::filesystem;

namespace {

struct Run {
    int code = -1;
    std::string out;
    std::string err;
};

Run cli(const std::vector<std::string>& args) {
    std::ostringstream out;
    std::ostringstream err;
    Run r;
    r.code = run_cli(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

class TempDir {
public:
    TempDir() {
        path_ = fs::temp_directory_path() / ("nomaqos_cli_" + std::to_string(counter()++));
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~TempDir() { fs::remove_all(path_); }
    std::string file(const std::string& name, const std::string& content) const {
        const auto p = path_ / name;
        std::ofstream(p) << content;
        return p.string();
    }
    std::string path(const std::string& name) const { return (path_ / name).string(); }

private:
    static int& counter();
    fs::path path_;
};

int& TempDir::counter() {
    static int n = 0;
    return n;
}

const char* kTables = R"([{"layers": [{"rate_bps": 100000, "psnr_db": 30},
                                      {"rate_bps": 200000, "psnr_db": 35},
                                      {"rate_bps": 400000, "psnr_db": 38}]}])";

const char* kScenario = R"({"bandwidth_hz": 180000, "noise_psd_dbm_per_hz": -174,
    "devices": [{"distance_km": 0.3, "p_max_dbm": 23, "ee_min": 1000},
                {"distance_km": 0.6, "p_max_dbm": 23, "ee_min": 1000}]})";

std::size_t count_lines_starting(const std::string& text, const std::string& prefix) {
    std::istringstream is(text);
    std::size_t n = 0;
    for (std::string line; std::getline(is, line);) {
        if (line.rfind(prefix, 0) == 0) ++n;
    }
    return n;
}

}  // namespace

TEST_CASE("solve a valid two-device instance") {
    TempDir dir;
    const auto r = cli({"solve", "--scenario", dir.file("s.json", kScenario), "--tables", dir.file("t.json", kTables)});
    CHECK(r.code == kExitOk);
    CHECK(r.err.empty());
    CHECK(count_lines_starting(r.out, "0 ") == 1);
    CHECK(count_lines_starting(r.out, "1 ") == 1);
    CHECK(r.out.find("status converged") != std::string::npos);
    CHECK(r.out.find("avg_psnr_db ") != std::string::npos);

    for (const char* scheme : {"noma_mt", "oma"}) {
        const auto b = cli({"solve", "--scenario", dir.path("s.json"), "--tables", dir.path("t.json"), "--scheme",
                            scheme});
        CHECK(b.code == kExitOk);
        CHECK(b.out.find(std::string("scheme ") + scheme) != std::string::npos);
    }
}

TEST_CASE("solve reports infeasibility") {
    TempDir dir;
    const char* far = R"({"devices": [{"distance_km": 5.0, "p_max_dbm": 0},
                                      {"distance_km": 6.0, "p_max_dbm": 0}]})";
    const auto r = cli({"solve", "--scenario", dir.file("s.json", far), "--tables", dir.file("t.json", kTables)});
    CHECK(r.code == kExitInfeasible);
    CHECK(r.out.find("status infeasible") != std::string::npos);
}

TEST_CASE("solve reports a cap hit") {
    TempDir dir;
    const auto tables = cli({"gen-tables", "--layers", "6", "--ratio", "1.6", "--out", dir.path("t.json")});
    REQUIRE(tables.code == kExitOk);
    const auto scenario = dir.file("s.json", R"({"devices": [{"distance_km": 0.4, "p_max_dbm": 23, "ee_min": 1000},
                                                             {"distance_km": 0.7, "p_max_dbm": 23, "ee_min": 1000},
                                                             {"distance_km": 0.9, "p_max_dbm": 23, "ee_min": 1000}]})");
    const auto capped = cli({"solve", "--scenario", scenario, "--tables", dir.path("t.json"), "--max-iter", "1"});
    CHECK(capped.code == kExitCapHit);
    CHECK(capped.out.find("status iteration_cap") != std::string::npos);
    const auto full = cli({"solve", "--scenario", scenario, "--tables", dir.path("t.json")});
    CHECK(full.code == kExitOk);
}

TEST_CASE("malformed tables name the device and layer") {
    TempDir dir;
    const char* bad = R"([{"layers": [{"rate_bps": 100000, "psnr_db": 30}]},
                          {"layers": [{"rate_bps": 100000, "psnr_db": 30},
                                      {"rate_bps": 200000, "psnr_db": 29}]}])";
    const auto r = cli({"solve", "--scenario", dir.file("s.json", kScenario), "--tables", dir.file("t.json", bad)});
    CHECK(r.code == kExitInvalid);
    CHECK(r.err.find("device 1") != std::string::npos);
    CHECK(r.err.find("layer 2") != std::string::npos);
    CHECK(r.err.find("psnr_db") != std::string::npos);
}

TEST_CASE("input errors exit 1") {
    TempDir dir;
    const auto t = dir.file("t.json", kTables);
    CHECK(cli({"solve", "--scenario", dir.path("missing.json"), "--tables", t}).code == kExitInvalid);
    CHECK(cli({"solve", "--scenario", dir.file("s.json", "{not json"), "--tables", t}).code == kExitInvalid);
    const auto unknown = cli({"solve", "--scenario", dir.file("u.json", R"({"devices": [{"gain_sq": 1, "p_max_dbm": 0, "colour": 1}]})"),
                              "--tables", t});
    CHECK(unknown.code == kExitInvalid);
    CHECK(unknown.err.find("colour") != std::string::npos);
    CHECK(cli({"solve", "--scenario", dir.file("s2.json", kScenario), "--tables", t, "--scheme", "tdma"}).code ==
          kExitInvalid);
    CHECK(cli({}).code == kExitInvalid);
    CHECK(cli({"frobnicate"}).code == kExitInvalid);
}

TEST_CASE("sweep filters schemes and echoes its config") {
    const auto r = cli({"sweep", "--trials", "2", "--pmax-dbm", "10,20", "--schemes", "proposed,oma"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.rfind("# config: {", 0) == 0);
    CHECK(count_lines_starting(r.out, "proposed,") == 4);
    CHECK(count_lines_starting(r.out, "oma,") == 4);
    CHECK(count_lines_starting(r.out, "noma_mt,") == 0);

    const auto header = r.out.substr(std::string("# config: ").size(), r.out.find('\n') - 10);
    const auto config = Json::parse(header);
    CHECK(config["command"] == "sweep power");
    CHECK(config["trials"] == 2);
    CHECK(config.contains("solver"));
    CHECK(config.contains("seed"));
}

TEST_CASE("sweep rejects zero trials") {
    const auto r = cli({"sweep", "--trials", "0"});
    CHECK(r.code == kExitInvalid);
    CHECK(r.err.find("trials") != std::string::npos);
    CHECK(cli({"sweep", "--schemes", "proposed,tdma"}).code == kExitInvalid);
    CHECK(cli({"sweep", "--param", "angle"}).code == kExitInvalid);
}

TEST_CASE("sweep output is reproducible") {
    TempDir dir;
    const std::vector<std::string> base{"sweep", "--param", "coverage", "--trials", "2", "--radius-m", "600,1400"};
    auto a = base;
    a.insert(a.end(), {"--out", dir.path("a.csv")});
    auto b = base;
    b.insert(b.end(), {"--out", dir.path("b.csv")});
    REQUIRE(cli(a).code == kExitOk);
    REQUIRE(cli(b).code == kExitOk);
    auto slurp = [](const std::string& p) {
        std::ifstream in(p, std::ios::binary);
        return std::string(std::istreambuf_iterator<char>(in), {});
    };
    CHECK(slurp(dir.path("a.csv")) == slurp(dir.path("b.csv")));
    CHECK_FALSE(slurp(dir.path("a.csv")).empty());
}

TEST_CASE("sweep reads a spec file and flags override it") {
    TempDir dir;
    const auto spec = dir.file("spec.json", R"({"trials": 3, "p_max_dbm": [12], "schemes": ["oma"], "seed": 9})");
    const auto r = cli({"sweep", spec, "--trials", "1"});
    REQUIRE(r.code == kExitOk);
    CHECK(count_lines_starting(r.out, "oma,p_max_dbm,12,0,") == 1);
    CHECK(count_lines_starting(r.out, "oma,") == 1);

    const auto bad = dir.file("bad.json", R"({"trails": 3})");
    CHECK(cli({"sweep", bad}).code == kExitInvalid);
}

TEST_CASE("convergence command") {
    const auto r = cli({"convergence", "--trials", "2", "--device-counts", "2,3"});
    REQUIRE(r.code == kExitOk);
    CHECK(r.out.find("num_devices,trial,iteration,cbv_psnr_db,upper_psnr_db,gap,num_vertices") != std::string::npos);
    CHECK(count_lines_starting(r.out, "2,") > 0);
    CHECK(count_lines_starting(r.out, "3,") > 0);
    CHECK(cli({"convergence", "--device-counts", "0"}).code == kExitInvalid);
}

TEST_CASE("gen-tables round trips through the table reader") {
    const auto r = cli({"gen-tables", "--count", "2", "--layers", "3"});
    REQUIRE(r.code == kExitOk);
    const auto tables = tables_from_json(Json::parse(r.out));
    REQUIRE(tables.size() == 2);
    CHECK(tables[0].num_layers() == 3);
    CHECK(cli({"gen-tables", "--b", "0"}).code == kExitInvalid);
    CHECK(cli({"gen-tables", "--count", "0"}).code == kExitInvalid);
}
