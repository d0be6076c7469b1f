#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Run {
    int code{-1};
    std::string output;
};

Run run(const std::string& args) {
    const char* bin = std::getenv("CSO_BIN");
    REQUIRE_MESSAGE(bin != nullptr, "CSO_BIN is not set");
    const std::string cmd = std::string(bin) + " " + args + " 2>&1";
    Run r;
    FILE* p = popen(cmd.c_str(), "r");
    REQUIRE(p != nullptr);
    char buf[4096];
    while (std::fgets(buf, sizeof buf, p)) r.output += buf;
    const int status = pclose(p);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

fs::path scratch(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("cso_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

// Ten explicitly placed cells on a 20x20 grid: every command finishes in well under a second.
const char* kTiny = R"({
  "geometry": {"num_cells": 10, "layout": "explicit",
               "positions": [[50,50],[150,60],[250,40],[350,70],[60,200],[200,190],[340,210],[80,340],[210,350],[330,330]],
               "pixel_size_m": 20, "area_width_m": 400, "area_height_m": 400, "wraparound": false},
  "optimization": {"population_size": 20, "max_generations": 100},
  "simulation": {"duration_s": 60, "num_experiments": 2, "volume_multipliers": [0.3, 1.0]}
})";

fs::path tiny_config(const fs::path& dir, const std::string& extra_sim = "") {
    std::string text = kTiny;
    if (!extra_sim.empty()) {
        const auto pos = text.find("\"simulation\": {") + std::string("\"simulation\": {").size();
        text.insert(pos, extra_sim + ", ");
    }
    const auto p = dir / "config.json";
    write(p, text);
    return p;
}

std::string q(const fs::path& p) { return "'" + p.string() + "'"; }

struct Csv {
    std::string stamp;
    std::vector<std::string> header;
    std::vector<std::map<std::string, std::string>> rows;
};

Csv read_csv(const fs::path& p) {
    std::ifstream in(p);
    Csv c;
    std::string line;
    auto split = [](const std::string& s) {
        std::vector<std::string> out;
        std::stringstream ss(s);
        std::string f;
        while (std::getline(ss, f, ',')) out.push_back(f);
        return out;
    };
    std::getline(in, c.stamp);
    std::getline(in, line);
    c.header = split(line);
    while (std::getline(in, line)) {
        const auto f = split(line);
        REQUIRE(f.size() == c.header.size());
        std::map<std::string, std::string> row;
        for (std::size_t i = 0; i < f.size(); ++i) row[c.header[i]] = f[i];
        c.rows.push_back(row);
    }
    return c;
}

double num(const std::string& s) { return std::stod(s); }

}  // namespace

TEST_CASE("generate writes the scenario artefacts") {
    const auto d = scratch("generate");
    const auto r = run("generate --config " + q(tiny_config(d)) + " --out " + q(d / "out"));
    CHECK(r.code == 0);
    CHECK(fs::exists(d / "out" / "gain_matrix.bin"));
    CHECK(fs::exists(d / "out" / "demand.txt"));
    CHECK(slurp(d / "out" / "scenario.json").find("config_hash") != std::string::npos);
}

TEST_CASE("optimize with --exhaustive reaches the enumerated front") {
    const auto d = scratch("exhaustive");
    const auto r = run("optimize --config " + q(tiny_config(d)) + " --out " + q(d) + " --exhaustive");
    REQUIRE(r.code == 0);
    const auto front = read_csv(d / "front.csv");
    const auto ex = read_csv(d / "exhaustive_front.csv");
    REQUIRE_FALSE(front.rows.empty());
    // Both objectives of f1f2: f1 minimized, f2 maximized. Nothing the
    // optimizer returns may beat the enumeration.
    for (const auto& row : front.rows) {
        CHECK(row.at("feasible") == "1");
        CHECK(std::count(row.at("topology").begin(), row.at("topology").end(), '1') == std::stoi(row.at("nac")));
        bool matched = false;
        for (const auto& e : ex.rows)
            if (num(e.at("f1")) <= num(row.at("f1")) && num(e.at("f2")) >= num(row.at("f2"))) matched = true;
        CHECK(matched);
    }
    const auto meta = slurp(d / "metadata.json");
    const auto pos = meta.find("\"hypervolume_ratio_to_exhaustive\": ");
    REQUIRE(pos != std::string::npos);
    CHECK(std::stod(meta.substr(pos + 35)) >= 0.99);
}

TEST_CASE("the MDA algorithm writes its chain") {
    const auto d = scratch("mda");
    REQUIRE(run("optimize --algorithm mda --config " + q(tiny_config(d)) + " --out " + q(d)).code == 0);
    const auto chain = read_csv(d / "chain.csv");
    REQUIRE(chain.rows.size() == 10);
    for (std::size_t j = 0; j < 10; ++j) {
        CHECK(chain.rows[j].at("order") == std::to_string(j + 1));
        CHECK(chain.rows[j].at("nac") == std::to_string(j + 1));
    }
}

TEST_CASE("outputs are byte-identical across reruns and thread counts") {
    const auto d = scratch("determinism");
    const auto cfg = tiny_config(d);
    for (const char* sub : {"a", "b", "c"}) {
        const std::string threads = std::string(sub) == "c" ? " --threads 3" : "";
        REQUIRE(run("optimize --config " + q(cfg) + " --seed 7 --out " + q(d / sub) + threads).code == 0);
        REQUIRE(run("evaluate --config " + q(cfg) + " --seed 7 --out " + q(d / sub) + threads).code == 0);
    }
    for (const char* file : {"front.csv", "evaluation.csv", "selection.csv", "selected_v1_trace.csv"}) {
        CHECK(slurp(d / "a" / file) == slurp(d / "b" / file));
        CHECK(slurp(d / "a" / file) == slurp(d / "c" / file));
    }
    REQUIRE(run("optimize --config " + q(cfg) + " --seed 8 --out " + q(d / "e")).code == 0);
    CHECK(read_csv(d / "e" / "front.csv").stamp.find("optimization_seed=8") != std::string::npos);
}

TEST_CASE("every CSV starts with the run stamp") {
    const auto d = scratch("stamp");
    const auto cfg = tiny_config(d);
    REQUIRE(run("optimize --config " + q(cfg) + " --out " + q(d)).code == 0);
    REQUIRE(run("evaluate --config " + q(cfg) + " --out " + q(d)).code == 0);
    REQUIRE(run("compare --config " + q(cfg) + " --out " + q(d)).code == 0);
    REQUIRE(run("coverage-report --config " + q(cfg) + " --out " + q(d)).code == 0);
    std::size_t n = 0;
    for (const auto& e : fs::directory_iterator(d)) {
        if (e.path().extension() != ".csv") continue;
        ++n;
        const auto stamp = read_csv(e.path()).stamp;
        CHECK_MESSAGE(stamp.rfind("# config_hash=", 0) == 0, e.path());
        CHECK(stamp.find("simulation_seed=") != std::string::npos);
    }
    CHECK(n >= 7);
}

TEST_CASE("configuration and usage errors exit with 2") {
    const auto d = scratch("errors");
    write(d / "bad.json", R"({"geometry": {"num_cellz": 3}})");
    auto r = run("optimize --config " + q(d / "bad.json") + " --out " + q(d));
    CHECK(r.code == 2);
    CHECK(r.output.find("num_cellz") != std::string::npos);
    CHECK(run("optimize --config " + q(d / "missing.json")).code == 2);
    CHECK(run("optimize --config " + q(tiny_config(d)) + " --bogus").code == 2);
    CHECK(run("optimize --config " + q(tiny_config(d)) + " --objectives f2f3").code == 2);
    CHECK(run("optimize --config " + q(tiny_config(d)) + " --threads 0").code == 2);
    CHECK(run("").code != 0);
}

TEST_CASE("an unattainable coverage constraint exits with 3") {
    const auto d = scratch("infeasible");
    std::string text = kTiny;
    // A receive threshold no pixel can meet puts the whole area in outage.
    text.insert(text.find('{') + 1, "\"radio\": {\"min_rx_power_dbm\": 20},");
    write(d / "c.json", text);
    const auto r = run("optimize --config " + q(d / "c.json") + " --out " + q(d));
    CHECK(r.code == 3);
}

TEST_CASE("malformed and missing front files are reported") {
    const auto d = scratch("front");
    const auto cfg = tiny_config(d);
    const std::string stamp = "# config_hash=0 optimization_seed=1 simulation_seed=1\n";
    const std::string header = "topology,nac,f1,f2,f3,f4,f5,f6,feasible,outage_fraction\n";
    write(d / "bad.csv", stamp + header + "1111111111,10,10,1,1,1,1,0,1,0\n0000011111,4,4,1,1,1,1,0,1,0\n");
    auto r = run("evaluate --config " + q(cfg) + " --out " + q(d) + " --front " + q(d / "bad.csv"));
    CHECK(r.code == 2);
    CHECK(r.output.find("row 2") != std::string::npos);

    write(d / "short.csv", stamp + header + "1111111111,10,10,1\n");
    CHECK(run("evaluate --config " + q(cfg) + " --out " + q(d) + " --front " + q(d / "short.csv")).code == 2);

    write(d / "empty.csv", stamp + header);
    r = run("evaluate --config " + q(cfg) + " --out " + q(d) + " --front " + q(d / "empty.csv"));
    CHECK(r.code == 2);
    CHECK(r.output.find("no topologies") != std::string::npos);

    write(d / "wrong_l.csv", stamp + header + "111,3,3,1,1,1,1,0,1,0\n");
    CHECK(run("evaluate --config " + q(cfg) + " --out " + q(d) + " --front " + q(d / "wrong_l.csv")).code == 2);

    r = run("compare --config " + q(cfg) + " --out " + q(d / "nothing"));
    CHECK(r.code == 2);
    CHECK(r.output.find("optimize") != std::string::npos);
}

TEST_CASE("all-on passes at light load and fails far above saturation") {
    const auto d = scratch("allon");
    const auto cfg = tiny_config(d);
    write(d / "allon.csv", "# config_hash=0 optimization_seed=1 simulation_seed=1\n"
                           "topology,nac,f1,f2,f3,f4,f5,f6,feasible,outage_fraction\n"
                           "1111111111,10,10,1,1,1,1,0,1,0\n");
    REQUIRE(run("evaluate --config " + q(cfg) + " --out " + q(d) + " --front " + q(d / "allon.csv") +
                " --volume-multipliers 0.2,8")
                .code == 0);
    const auto sel = read_csv(d / "selection.csv");
    REQUIRE(sel.rows.size() == 2);
    CHECK(sel.rows[0].at("topology") == "1111111111");
    CHECK(sel.rows[0].at("qos_pass") == "1");
    CHECK(sel.rows[0].at("fallback_all_on") == "0");
    CHECK(sel.rows[1].at("qos_pass") == "0");
    CHECK(sel.rows[1].at("fallback_all_on") == "1");
    CHECK(num(sel.rows[1].at("mean_satisfied")) < 0.975);
}

TEST_CASE("compare runs every scheme and the offline selection never switches") {
    const auto d = scratch("compare");
    const auto cfg = tiny_config(d);
    REQUIRE(run("optimize --config " + q(cfg) + " --out " + q(d)).code == 0);
    REQUIRE(run("compare --config " + q(cfg) + " --out " + q(d) + " --volume-multipliers 0,1").code == 0);
    const auto c = read_csv(d / "compare.csv");
    CHECK(c.rows.size() == 12);
    std::set<std::string> schemes;
    for (const auto& row : c.rows) {
        schemes.insert(row.at("scheme"));
        if (row.at("scheme") == "proposed") CHECK(num(row.at("transitions")) == 0.0);
        if (row.at("volume_multiplier") == "0") {
            CHECK(num(row.at("mean_satisfied")) == 1.0);
            CHECK(row.at("qos_pass") == "1");
        }
    }
    CHECK(schemes == std::set<std::string>{"proposed", "all_on", "cell_zooming", "improved_cell_zooming",
                                           "load_interference_aware", "set_cover"});
}

TEST_CASE("phased demand switches the offline topology at phase boundaries") {
    const auto d = scratch("phases");
    const auto cfg =
        tiny_config(d, R"("phases": [{"start_s": 0, "volume_scale": 0.2}, {"start_s": 30, "volume_scale": 6}])");
    REQUIRE(run("optimize --config " + q(cfg) + " --out " + q(d)).code == 0);
    REQUIRE(run("compare --config " + q(cfg) + " --out " + q(d) + " --volume-multipliers 1").code == 0);
    for (const auto& row : read_csv(d / "compare.csv").rows)
        if (row.at("scheme") == "proposed") CHECK(num(row.at("transitions")) > 0.0);
}

TEST_CASE("coverage report grows with transmit power") {
    const auto d = scratch("coverage");
    REQUIRE(run("coverage-report --config " + q(tiny_config(d)) + " --out " + q(d)).code == 0);
    const auto c = read_csv(d / "coverage_report.csv");
    REQUIRE(c.rows.size() == 9);
    for (std::size_t i = 1; i < c.rows.size(); ++i) {
        CHECK(num(c.rows[i].at("covered_fraction")) >= num(c.rows[i - 1].at("covered_fraction")));
        CHECK(num(c.rows[i].at("mean_detectable_cells")) >= num(c.rows[i - 1].at("mean_detectable_cells")));
    }
    const auto h = read_csv(d / "candidate_histogram.csv");
    CHECK_FALSE(h.rows.empty());
}

TEST_CASE("demand file normalization flags") {
    const auto d = scratch("normalize");
    std::string grid = "20 20\n";
    for (int r = 0; r < 20; ++r) {
        for (int c = 0; c < 20; ++c) grid += (c ? " " : "") + std::to_string(1 + (r * c) % 5);
        grid += "\n";
    }
    write(d / "grid.txt", grid);
    std::string text = kTiny;
    text.insert(text.find('{') + 1,
                R"("demand": {"spatial": {"source": "file", "file": ")" + (d / "grid.txt").string() + "\"}},");
    write(d / "c.json", text);
    CHECK(run("generate --config " + q(d / "c.json") + " --out " + q(d / "a")).code == 0);
    CHECK(run("generate --config " + q(d / "c.json") + " --out " + q(d / "b") + " --no-normalize-demand").code == 2);
    CHECK(run("generate --config " + q(d / "c.json") + " --out " + q(d / "c") + " --normalize-demand").code == 0);

    write(d / "small.txt", "2 2\n1 1\n1 1\n");
    text = kTiny;
    text.insert(text.find('{') + 1,
                R"("demand": {"spatial": {"source": "file", "file": ")" + (d / "small.txt").string() + "\"}},");
    write(d / "m.json", text);
    const auto r = run("generate --config " + q(d / "m.json") + " --out " + q(d / "m"));
    CHECK(r.code == 2);
    CHECK(r.output.find("2x2") != std::string::npos);
}
