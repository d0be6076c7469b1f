#include <filesystem>
#include <fstream>
#include <random>

#include "cso/config.hpp"
#include "doctest.h"

using namespace cso;

namespace {

// Random but well-typed configuration touching every section.
ScenarioConfig random_config(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> n(1, 50);
    auto coin = [&] { return u(rng) < 0.5; };
    ScenarioConfig c;
    auto& g = c.network.geometry;
    g.num_cells = n(rng);
    g.layout = coin() ? net::Layout::Hexagonal : net::Layout::Explicit;
    if (g.layout == net::Layout::Explicit)
        for (std::size_t i = 0; i < g.num_cells; ++i) g.positions.push_back({1000 * u(rng), 1000 * u(rng)});
    g.cell_radius_m = 50 + 100 * u(rng);
    g.pixel_size_m = 1 + 9 * u(rng);
    g.area_width_m = 100 + 1000 * u(rng);
    g.wraparound = coin();
    c.network.channel.pathloss_exponent = 2 + 2 * u(rng);
    c.network.channel.shadowing_sigma_db = 8 * u(rng);
    c.network.channel.seed = rng();
    if (coin()) c.network.channel.gmatrix_path = "g" + std::to_string(n(rng)) + ".bin";
    c.network.radio.min_sinr_db = -10 * u(rng);
    c.network.radio.noise_figure_db = 9 * u(rng);

    c.demand.spatial.source = coin() ? "uniform" : "hotspots";
    c.demand.spatial.hotspots.count = n(rng);
    c.demand.spatial.hotspots.seed = rng();
    c.demand.spatial.normalize = coin();
    c.demand.min_rate_bps = 1e6 * u(rng) + 1;
    for (std::size_t i = 0, k = n(rng) % 3; i < k; ++i) {
        ServiceConfig s;
        s.spatial.source = "file";
        s.spatial.file = "svc" + std::to_string(i) + ".txt";
        s.mean_session_s = 100 * u(rng) + 1;
        c.demand.services.push_back(s);
    }

    auto& o = c.optimization;
    o.pair = static_cast<ObjectivePair>(n(rng) % 4);
    o.population_size = 2 * n(rng) + 4;
    if (coin()) o.mutation_prob = u(rng);
    o.seed = rng();
    o.initialization = coin() ? "random" : "mda_chain";
    o.lc_volume_fraction = u(rng);

    auto& s = c.simulation;
    s.duration_s = 1 + 1000 * u(rng);
    s.num_experiments = n(rng);
    s.seed = rng();
    s.ici = coin() ? coupling::IciModel::LoadCoupled : coupling::IciModel::FullLoad;
    s.volume_multipliers.assign(n(rng) % 5, 0.0);
    for (auto& v : s.volume_multipliers) v = 2 * u(rng);
    s.volume_reference = coin() ? "base" : "vcap";
    s.selection = coin() ? "min_power" : "min_nac";
    for (std::size_t i = 0, k = n(rng) % 3; i < k; ++i) {
        PhaseConfig p{100.0 * static_cast<double>(i), 0.5 + u(rng), {}};
        if (coin()) p.hotspot_seed = rng();
        s.phases.push_back(p);
    }

    c.power.uplink.domain = coin() ? metrics::UplinkDomain::Decibel : metrics::UplinkDomain::Linear;
    c.power.uplink.kappa = u(rng);
    c.kappa_cov = 0.1 * u(rng);
    c.benchmarks.load_threshold = u(rng);
    c.coverage_report.power_dbm = {u(rng), 10 + u(rng)};
    return c;
}

ConfigError parse_error(const std::string& text) {
    try {
        (void)parse_config(text);
    } catch (const ConfigError& e) {
        return e;
    }
    FAIL("expected ConfigError for " << text);
    return ConfigError("");
}

}  // namespace

TEST_CASE("empty object gives the defaults") {
    CHECK(parse_config("{}") == ScenarioConfig{});
    CHECK(parse_config(to_json_string(ScenarioConfig{})) == ScenarioConfig{});
}

TEST_CASE("random configurations round-trip through JSON") {
    std::mt19937_64 rng(81);
    for (int trial = 0; trial < 100; ++trial) {
        const auto c = random_config(rng);
        const auto text = to_json_string(c);
        const auto back = parse_config(text);
        CHECK(back == c);
        CHECK(to_json_string(back) == text);
        CHECK(config_hash(back) == config_hash(c));
        CHECK(parse_config(to_json_string(c, -1)) == c);
    }
}

TEST_CASE("hash is stable and sensitive") {
    const ScenarioConfig a;
    CHECK(config_hash(a) == config_hash(ScenarioConfig{}));
    CHECK(config_hash(a).size() == 16);
    auto b = a;
    b.simulation.seed = 2;
    CHECK(config_hash(b) != config_hash(a));
    b = a;
    b.optimization.mutation_prob = 0.1;
    CHECK(config_hash(b) != config_hash(a));
    // Key order and whitespace in the input do not matter.
    const auto x = parse_config(R"({"simulation": {"seed": 5, "duration_s": 10}})");
    const auto y = parse_config("{ \"simulation\" : { \"duration_s\" : 10.0 , \"seed\" : 5 } }");
    CHECK(config_hash(x) == config_hash(y));
}

TEST_CASE("unknown keys are rejected with their path") {
    CHECK(std::string(parse_error(R"({"bogus": 1})").what()).find("'bogus'") != std::string::npos);
    CHECK(std::string(parse_error(R"({"geometry": {"num_cell": 3}})").what()).find("geometry.num_cell") !=
          std::string::npos);
    CHECK(std::string(parse_error(R"({"demand": {"spatial": {"hotspots": {"sigma": 3}}}})").what())
              .find("demand.spatial.hotspots.sigma") != std::string::npos);
    (void)parse_error(R"({"simulation": {"phases": [{"start_s": 0, "scale": 1}]}})");
}

TEST_CASE("wrong types are rejected") {
    for (const char* text : {
             R"({"geometry": {"num_cells": -3}})",
             R"({"geometry": {"num_cells": 2.5}})",
             R"({"geometry": {"num_cells": "37"}})",
             R"({"geometry": {"wraparound": 1}})",
             R"({"geometry": {"layout": "square"}})",
             R"({"geometry": {"positions": [[1, 2, 3]]}})",
             R"({"channel": {"seed": -1}})",
             R"({"radio": {"bandwidth_hz": "5e6"}})",
             R"({"demand": {"spatial": {"source": "magic"}}})",
             R"({"demand": {"services": {}}})",
             R"({"optimization": {"objective_pair": "f2f3"}})",
             R"({"optimization": {"mutation_prob": "x"}})",
             R"({"optimization": {"initialization": "greedy"}})",
             R"({"simulation": {"ici": "xl"}})",
             R"({"simulation": {"volume_multipliers": [1, "a"]}})",
             R"({"simulation": {"volume_reference": "peak"}})",
             R"({"simulation": {"selection": "max"}})",
             R"({"power": {"uplink_domain": "log"}})",
             R"({"geometry": 3})",
             R"([1, 2])",
             R"({"geometry": )",
             "",
         })
        (void)parse_error(text);
}

TEST_CASE("nullable fields") {
    auto c = parse_config(R"({"optimization": {"mutation_prob": null}})");
    CHECK_FALSE(c.optimization.mutation_prob.has_value());
    c = parse_config(R"({"optimization": {"mutation_prob": 0.25}})");
    CHECK(c.optimization.mutation_prob == 0.25);
    c = parse_config(R"({"simulation": {"phases": [{"start_s": 0, "volume_scale": 2, "hotspot_seed": null}]}})");
    REQUIRE(c.simulation.phases.size() == 1);
    CHECK_FALSE(c.simulation.phases[0].hotspot_seed.has_value());
}

TEST_CASE("files and enum helpers") {
    const auto p = std::filesystem::temp_directory_path() / "cso_test_config.json";
    std::ofstream(p) << R"({"simulation": {"ici": "lc"}})";
    CHECK(load_config(p).simulation.ici == coupling::IciModel::LoadCoupled);
    CHECK_THROWS_AS(load_config(p.string() + ".missing"), ConfigError);
    CHECK(parse_ici("fl") == coupling::IciModel::FullLoad);
    CHECK(to_string(coupling::IciModel::LoadCoupled) == "lc");
    CHECK_THROWS_AS(parse_ici("LC "), ConfigError);
}
