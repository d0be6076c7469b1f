#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>

#include "cso/net_model.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cso;
using namespace cso::net;

namespace {

void check_against_oracle(const NetworkModel& m, const Topology& x, const std::vector<double>& loads,
                          const CoverageResult& cov) {
    const auto ref = oracle::coverage(m, x, loads);
    for (std::size_t a = 0; a < m.num_pixels(); ++a) {
        REQUIRE(cov.serving[a] == ref.serving[a]);
        REQUIRE(static_cast<int>(cov.outage[a]) == ref.outage[a]);
        REQUIRE(cov.sinr[a] == doctest::Approx(ref.sinr[a]).epsilon(1e-12));
    }
    CHECK(cov.outage_fraction == doctest::Approx(oracle::outage_fraction(ref)));
}

}  // namespace

TEST_CASE("full-load coverage matches the direct oracle") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t L = 2 + trial % 9;
        const auto m = oracle::random_model(rng, L, 12, 15, 25.0, 6.0);
        const auto x = oracle::random_topology(rng, L);
        check_against_oracle(m, x, std::vector<double>(L, 1.0), coverage(m, x));
    }
}

TEST_CASE("load-weighted coverage matches the direct oracle") {
    std::mt19937_64 rng(12);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t L = 2 + trial % 7;
        const auto m = oracle::random_model(rng, L, 10, 10, 30.0);
        const auto x = oracle::random_topology(rng, L);
        std::vector<double> loads(L);
        for (auto& v : loads) v = u(rng);
        check_against_oracle(m, x, loads, coverage(m, x, loads));
    }
}

TEST_CASE("all cells off means every pixel is in outage") {
    std::mt19937_64 rng(1);
    const auto m = oracle::random_model(rng, 4, 5, 5);
    const auto cov = coverage(m, Topology(4));
    CHECK(cov.outage_fraction == 1.0);
    for (auto s : cov.serving) CHECK(s == kNoCell);
}

TEST_CASE("SINR under loads <= 1 is never below full-load SINR") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t L = 3 + trial % 6;
        const auto m = oracle::random_model(rng, L, 10, 10, 30.0);
        const auto x = oracle::random_topology(rng, L);
        std::vector<double> loads(L), ones(L, 1.0);
        for (auto& v : loads) v = u(rng);
        const auto cov = link_budget_coverage(m, x);
        const auto lc = sinr(m, x, loads, cov);
        const auto fl = sinr(m, x, ones, cov);
        for (std::size_t a = 0; a < m.num_pixels(); ++a) REQUIRE(lc[a] >= fl[a]);
    }
}

TEST_CASE("link-budget outage is a subset of full coverage outage") {
    std::mt19937_64 rng(8);
    for (int trial = 0; trial < 10; ++trial) {
        const auto m = oracle::random_model(rng, 6, 10, 10, 40.0);
        const auto x = oracle::random_topology(rng, 6);
        const auto lb = link_budget_coverage(m, x);
        const auto full = coverage(m, x);
        CHECK(lb.sinr.empty());
        for (std::size_t a = 0; a < m.num_pixels(); ++a)
            if (lb.outage[a]) CHECK(full.outage[a]);
    }
}

TEST_CASE("serving matrix has one entry per covered pixel") {
    std::mt19937_64 rng(9);
    const auto m = oracle::random_model(rng, 5, 8, 8, 30.0);
    const auto x = Topology::from_string("10110");
    const auto cov = coverage(m, x);
    const auto s = cov.serving_matrix(5);
    for (std::size_t a = 0; a < m.num_pixels(); ++a) {
        double sum = 0.0;
        for (std::size_t l = 0; l < 5; ++l) sum += s(a, l);
        CHECK(sum == (cov.covered(a) ? 1.0 : 0.0));
        CHECK(s(a, 1) == 0.0);
    }
    const auto r = received_power(m, x);
    for (std::size_t a = 0; a < m.num_pixels(); ++a) {
        CHECK(r(a, 1) == 0.0);
        CHECK(r(a, 0) == m.gain()(a, 0) * m.pilot_power()[0]);
    }
}

TEST_CASE("spectral efficiency is zero in outage") {
    const std::vector<double> psi{0.0, 1.0, 3.0};
    const std::vector<std::uint8_t> out{1, 0, 1};
    const auto h = spectral_efficiency(psi, out);
    CHECK(h[0] == 0.0);
    CHECK(h[1] == doctest::Approx(1.0));
    CHECK(h[2] == 0.0);
}

TEST_CASE("model construction validates its inputs") {
    Matrix g(4, 2, 1e-9);
    RadioThresholds r;
    CHECK_THROWS_AS(NetworkModel(2, 3, 10.0, {}, g, {1.0, 1.0}, {1.0, 1.0}, r), DimensionError);
    CHECK_THROWS_AS(NetworkModel(2, 2, 10.0, {}, g, {1.0}, {1.0, 1.0}, r), DimensionError);
    CHECK_NOTHROW(NetworkModel(2, 2, 10.0, {}, g, {1.0, 1.0}, {1.0, 1.0}, r));
}

TEST_CASE("hexagonal layout") {
    CHECK(hexagonal_rings(1) == 0);
    CHECK(hexagonal_rings(7) == 1);
    CHECK(hexagonal_rings(37) == 3);
    CHECK(hexagonal_rings(10) == -1);
    const double isd = std::sqrt(3.0) * 100.0;
    const auto pts = hexagonal_positions(19, 100.0, {0.0, 0.0});
    REQUIRE(pts.size() == 19);
    CHECK(pts[0] == Point{0.0, 0.0});
    for (std::size_t i = 1; i < 7; ++i) CHECK(std::hypot(pts[i].x, pts[i].y) == doctest::Approx(isd));
    for (std::size_t i = 7; i < 19; ++i) CHECK(std::hypot(pts[i].x, pts[i].y) > isd * 1.5);
    // Sites are distinct and no two closer than the inter-site distance.
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = i + 1; j < pts.size(); ++j)
            CHECK(std::hypot(pts[i].x - pts[j].x, pts[i].y - pts[j].y) >= isd * (1 - 1e-12));
}

TEST_CASE("log-distance path loss") {
    ChannelConfig ch;
    CHECK(log_distance_pathloss_db(ch, 100.0) == doctest::Approx(31.3 + 36.7 * 2.0));
    CHECK(log_distance_pathloss_db(ch, 1.0) == log_distance_pathloss_db(ch, 10.0));
}

TEST_CASE("default scenario dimensions and pilot power") {
    NetworkConfig cfg;
    cfg.geometry.pixel_size_m = 20.0;
    const auto m = generate_scenario(cfg);
    CHECK(m.num_cells() == 37);
    CHECK(m.num_pixels() == 2500);
    CHECK(watt_to_dbm(m.data_power()[0]) == doctest::Approx(30.0));
    CHECK(watt_to_dbm(m.pilot_power()[0]) == doctest::Approx(30.0 - 24.77));
    CHECK(coverage(m, Topology::all_on(37)).outage_fraction <= 0.02);
}

TEST_CASE("scenario generation is deterministic per seed") {
    NetworkConfig cfg;
    cfg.geometry.pixel_size_m = 50.0;
    const auto a = generate_scenario(cfg);
    const auto b = generate_scenario(cfg);
    CHECK(a.gain() == b.gain());
    cfg.channel.seed = 2;
    CHECK_FALSE(generate_scenario(cfg).gain() == a.gain());
}

namespace {

// Full-load SINR at the pixel holding each site, in dB. Outer-ring sites can
// sit outside the square area and are skipped.
std::vector<double> site_sinr_db(const NetworkModel& m) {
    const auto cov = coverage(m, Topology::all_on(m.num_cells()));
    const double w = m.grid_cols() * m.pixel_size_m(), h = m.grid_rows() * m.pixel_size_m();
    std::vector<double> out;
    for (const auto& p : m.cell_positions()) {
        if (p.x < 0.0 || p.y < 0.0 || p.x >= w || p.y >= h) continue;
        const auto col = static_cast<std::size_t>(p.x / m.pixel_size_m());
        const auto row = static_cast<std::size_t>(p.y / m.pixel_size_m());
        out.push_back(linear_to_db(cov.sinr[row * m.grid_cols() + col]));
    }
    return out;
}

double spread(const std::vector<double>& v) {
    return *std::max_element(v.begin(), v.end()) - *std::min_element(v.begin(), v.end());
}

}  // namespace

TEST_CASE("wraparound gives every site the same interference surroundings") {
    NetworkConfig cfg;
    cfg.geometry.pixel_size_m = 10.0;
    cfg.channel.shadowing_sigma_db = 0.0;
    CHECK(spread(site_sinr_db(generate_scenario(cfg))) < 0.5);
    cfg.geometry.wraparound = false;
    CHECK(spread(site_sinr_db(generate_scenario(cfg))) > 3.0);
}

TEST_CASE("hexagonal wraparound needs complete rings") {
    NetworkConfig cfg;
    cfg.geometry.num_cells = 10;
    CHECK_THROWS_AS(generate_scenario(cfg), ConfigError);
    cfg.geometry.wraparound = false;
    cfg.geometry.pixel_size_m = 50.0;
    CHECK_NOTHROW(generate_scenario(cfg));
}

TEST_CASE("explicit layout needs one position per cell") {
    NetworkConfig cfg;
    cfg.geometry.layout = Layout::Explicit;
    cfg.geometry.num_cells = 2;
    cfg.geometry.pixel_size_m = 50.0;
    cfg.geometry.positions = {{100.0, 100.0}};
    CHECK_THROWS_AS(generate_scenario(cfg), ConfigError);
    cfg.geometry.positions.push_back({800.0, 800.0});
    const auto m = generate_scenario(cfg);
    CHECK(m.cell_positions()[1] == Point{800.0, 800.0});
}

TEST_CASE("gain matrix files round-trip") {
    const auto dir = std::filesystem::temp_directory_path() / "cso_test_gmat";
    std::filesystem::create_directories(dir);
    NetworkConfig cfg;
    cfg.geometry.pixel_size_m = 50.0;
    const auto m = generate_scenario(cfg);
    const auto file = to_gain_matrix_file(m);
    save_gain_matrix_binary(dir / "g.bin", file);
    save_gain_matrix_text(dir / "g.txt", file);
    const auto b = load_gain_matrix(dir / "g.bin");
    const auto t = load_gain_matrix(dir / "g.txt");
    CHECK(b.gain_db == file.gain_db);
    CHECK(t.gain_db == file.gain_db);
    CHECK(t.num_pixels == m.num_pixels());
    CHECK(t.pixel_size_m == 50.0);

    // A model built from the file matches the generated one.
    NetworkConfig from_file = cfg;
    from_file.channel.gmatrix_path = (dir / "g.bin").string();
    const auto m2 = generate_scenario(from_file);
    for (std::size_t i = 0; i < m.gain().data().size(); ++i)
        REQUIRE(m2.gain().data()[i] == doctest::Approx(m.gain().data()[i]).epsilon(1e-12));

    from_file.geometry.pixel_size_m = 25.0;
    CHECK_THROWS_AS(generate_scenario(from_file), ConfigError);

    {
        std::ofstream bad(dir / "bad.txt");
        bad << "GAINMATRIX A=2 L=2 pixel_size_m=5\n1,2\n3\n";
    }
    CHECK_THROWS_AS(load_gain_matrix(dir / "bad.txt"), FormatError);
    {
        std::ofstream bad(dir / "trunc.bin", std::ios::binary);
        bad << "CSOGMAT1";
    }
    CHECK_THROWS_AS(load_gain_matrix(dir / "trunc.bin"), FormatError);
    std::filesystem::remove_all(dir);
}
