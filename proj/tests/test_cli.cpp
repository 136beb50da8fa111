#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>

#include "tmcompose/cli.hpp"

namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("tmcompose_cli_" + std::to_string(static_cast<unsigned>(::getpid())) + "_" +
                std::to_string(counter()++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
    static int& counter() {
        static int c = 0;
        return c;
    }
    fs::path file(const std::string& name, const std::string& content) const {
        const fs::path p = path / name;
        std::ofstream f(p);
        f << content;
        return p;
    }
    std::string read(const std::string& name) const {
        std::ifstream f(path / name);
        std::stringstream ss;
        ss << f.rdbuf();
        return ss.str();
    }
};

int run_cli(std::initializer_list<std::string> args) {
    return tmc::cli::run(std::vector<std::string>(args));
}

const char* kZeroPotentialTransfer = R"({
  "schema_version": 1,
  "potential": {"pieces": []},
  "k": 1.0,
  "interval": [0.0, 1.0]
})";

const char* kBarrierTransfer = R"({
  "schema_version": 1,
  "potential": {"pieces": [
    {"kind": "constant", "interval": [0.0, 1.0], "value": [1.2, 0.4]}
  ]},
  "k_values": [0.8, 1.6]
})";

const char* kDisjointCompose = R"({
  "schema_version": 1,
  "potential1": {"pieces": [{"kind": "constant", "interval": [0.0, 0.6], "value": [0.9, 0.1]}]},
  "potential2": {"pieces": [{"kind": "constant", "interval": [1.0, 1.8], "value": [-0.4, 0.7]}]},
  "k": 1.1,
  "method": "disjoint"
})";

}  // namespace

TEST_CASE("transfer: zero potential gives the identity row") {
    TempDir dir;
    const auto cfg = dir.file("cfg.json", kZeroPotentialTransfer);
    const auto out = (dir.path / "out.csv").string();
    CHECK(run_cli({"transfer", "--config", cfg.string(), "--out", out}) == 0);
    const std::string text = dir.read("out.csv");
    CHECK(text.find("re_m11") != std::string::npos);
    CHECK(text.find("\n1,1,0,0,0,0,0,1,0,0,") != std::string::npos);
}

TEST_CASE("transfer and amplitudes run over k sweeps") {
    TempDir dir;
    const auto cfg = dir.file("cfg.json", kBarrierTransfer);
    const auto out = (dir.path / "out.csv").string();
    CHECK(run_cli({"transfer", "--config", cfg.string(), "--out", out, "--jobs", "2"}) == 0);
    std::istringstream lines(dir.read("out.csv"));
    std::string line;
    int data_rows = 0;
    while (std::getline(lines, line))
        if (!line.empty() && line[0] != '#' && line.rfind("k,", 0) != 0) ++data_rows;
    CHECK(data_rows == 2);

    const auto out2 = (dir.path / "amps.json").string();
    CHECK(run_cli({"amplitudes", "--config", cfg.string(), "--out", out2, "--format",
                   "json"}) == 0);
    const std::string text = dir.read("amps.json");
    CHECK(text.find("\"re_t\"") != std::string::npos);
}

TEST_CASE("identical configs produce byte-identical output") {
    TempDir dir;
    const auto cfg = dir.file("cfg.json", kBarrierTransfer);
    const auto out1 = (dir.path / "a.csv").string();
    const auto out2 = (dir.path / "b.csv").string();
    CHECK(run_cli({"transfer", "--config", cfg.string(), "--out", out1}) == 0);
    CHECK(run_cli({"transfer", "--config", cfg.string(), "--out", out2, "--jobs", "2"}) == 0);
    CHECK(dir.read("a.csv") == dir.read("b.csv"));
}

TEST_CASE("config errors exit with code 2") {
    TempDir dir;
    // unknown key
    const auto bad1 = dir.file("bad1.json", R"({
      "schema_version": 1,
      "potential": {"pieces": []},
      "k": 1.0,
      "surprise": true
    })");
    CHECK(run_cli({"transfer", "--config", bad1.string(), "--out",
                   (dir.path / "x.csv").string()}) == 2);

    // wrong schema version
    const auto bad2 = dir.file("bad2.json", R"({"schema_version": 99, "k": 1.0})");
    CHECK(run_cli({"transfer", "--config", bad2.string(), "--out",
                   (dir.path / "y.csv").string()}) == 2);

    // missing config file
    CHECK(run_cli({"transfer", "--config", (dir.path / "nope.json").string()}) == 2);

    // malformed flag
    CHECK(run_cli({"transfer", "--nonsense"}) == 2);
}

TEST_CASE("unreachable tolerances exit with code 3") {
    TempDir dir;
    const auto cfg = dir.file("cfg.json", kBarrierTransfer);
    CHECK(run_cli({"transfer", "--config", cfg.string(), "--out",
                   (dir.path / "x.csv").string(), "--rel-tol", "1e-300", "--abs-tol",
                   "1e-300"}) == 3);
}

TEST_CASE("compose: disjoint method matches direct integration") {
    TempDir dir;
    const auto cfg = dir.file("cfg.json", kDisjointCompose);
    const auto out = (dir.path / "out.json").string();
    CHECK(run_cli({"compose", "--config", cfg.string(), "--out", out, "--format", "json"}) ==
          0);
    const std::string text = dir.read("out.json");
    const auto pos = text.find("\"deviation\":");
    REQUIRE(pos != std::string::npos);
    const double dev = std::stod(text.substr(pos + 12));
    CHECK(dev < 1e-8);
}

TEST_CASE("compose: method/relation mismatch exits with 2") {
    TempDir dir;
    const auto cfg = dir.file("cfg.json", R"({
      "schema_version": 1,
      "potential1": {"pieces": [{"kind": "constant", "interval": [0.0, 1.0], "value": 1.0}]},
      "potential2": {"pieces": [{"kind": "constant", "interval": [0.5, 1.5], "value": 1.0}]},
      "k": 1.0,
      "method": "disjoint"
    })");
    CHECK(run_cli({"compose", "--config", cfg.string(), "--out",
                   (dir.path / "out.csv").string()}) == 2);
}

TEST_CASE("compose: exact and series methods on an overlapping pair") {
    TempDir dir;
    const auto cfg_tpl = R"({
      "schema_version": 1,
      "potential1": {"pieces": [{"kind": "gaussian_bump", "interval": [-1.2, 0.3],
                                  "amplitude": [1.1, -0.4], "center": -0.5, "width": 0.45}]},
      "potential2": {"pieces": [{"kind": "gaussian_bump", "interval": [0.0, 1.4],
                                  "amplitude": [-0.7, 0.9], "center": 0.6, "width": 0.5}]},
      "k": 1.0,
      "method": "%METHOD%"
    })";
    for (const std::string method : {"exact", "series:6", "split"}) {
        std::string cfg_text = cfg_tpl;
        cfg_text.replace(cfg_text.find("%METHOD%"), 8, method);
        const auto cfg = dir.file("cfg_" + method + ".json", cfg_text);
        const auto out = (dir.path / ("out_" + method + ".json")).string();
        CHECK(run_cli({"compose", "--config", cfg.string(), "--out", out, "--format",
                       "json"}) == 0);
        const std::string text = dir.read("out_" + method + ".json");
        const auto pos = text.find("\"deviation\":");
        REQUIRE(pos != std::string::npos);
        const double dev = std::stod(text.substr(pos + 12));
        if (method == "series:6") {
            CHECK(dev < 1e-4);
        } else {
            CHECK(dev < 1e-8);
        }
    }
}

TEST_CASE("overlap-study emits per-ell errors and a slope summary") {
    TempDir dir;
    const auto cfg = dir.file("cfg.json", R"({
      "schema_version": 1,
      "potential1": {"pieces": [{"kind": "polynomial", "interval": [-1.0, 0.0],
                                  "coefficients": [[0.9, 0.4], [0.3, 0.0]]}]},
      "potential2": {"pieces": [{"kind": "polynomial", "interval": [0.0, 1.0],
                                  "coefficients": [[-0.7, 0.6], [-0.2, 0.0]]}]},
      "k": 1.0,
      "ell_grid": {"from": 0.02, "to": 0.2, "points": 6, "spacing": "log"},
      "order": 2
    })");
    const auto out = (dir.path / "study.csv").string();
    CHECK(run_cli({"overlap-study", "--config", cfg.string(), "--out", out}) == 0);
    const std::string text = dir.read("study.csv");
    CHECK(text.find("dev_identity") != std::string::npos);
    CHECK(text.find("discontinuous_both") != std::string::npos);
    const std::string summary = dir.read("study.csv.summary.json");
    CHECK(summary.find("\"pass\": true") != std::string::npos);
    CHECK(summary.find("\"fitted_slope\"") != std::string::npos);
}

TEST_CASE("invisibility demo config passes its checks") {
    TempDir dir;
    const auto cfg = dir.file("cfg.json", R"({
      "schema_version": 1,
      "z_over_K2": 1e-3,
      "wavevector": 1.0,
      "mode": 1,
      "ells": [0.0, 0.2, 0.4, 0.9]
    })");
    const auto out = (dir.path / "inv.csv").string();
    CHECK(run_cli({"invisibility", "--config", cfg.string(), "--out", out, "--jobs", "2"}) ==
          0);
    const std::string summary = dir.read("inv.csv.summary.json");
    CHECK(summary.find("\"pass\": true") != std::string::npos);

    // strict mode rejects non-perturbative couplings
    const auto strong = dir.file("strong.json", R"({
      "schema_version": 1,
      "z_over_K2": 0.5,
      "wavevector": 1.0,
      "ells": [0.0, 0.2]
    })");
    CHECK(run_cli({"invisibility", "--config", strong.string(), "--out",
                   (dir.path / "strong.csv").string(), "--strict"}) == 2);
}
