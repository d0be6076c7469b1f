#include <algorithm>
#include <cmath>
#include <random>

#include "cso/coupling.hpp"
#include "doctest.h"
#include "oracles.hpp"

using namespace cso;
using namespace cso::coupling;

namespace {

// Two cells on a 1x6 strip; pixels 0..2 hear cell 0 best, 3..5 cell 1.
struct Toy {
    net::NetworkModel model;
    demand::DemandProfile profile;
};

Toy two_cell_toy(double users) {
    const std::vector<double> g0{1e-9, 5e-10, 2e-10, 8e-11, 3e-11, 1e-11};
    Matrix g(6, 2);
    for (std::size_t a = 0; a < 6; ++a) {
        g(a, 0) = g0[a];
        g(a, 1) = g0[5 - a];
    }
    net::RadioThresholds r;
    r.bandwidth_hz = 5e6;
    r.noise_w = 2e-14;
    r.min_rx_power_w = 1e-18;
    r.min_sinr = 0.2;
    r.max_ul_attenuation = 1e30;
    Toy t{net::NetworkModel(1, 6, 10.0, {}, std::move(g), {0.01, 0.01}, {1.0, 1.0}, r), {}};
    t.profile.gamma = {0.3, 0.1, 0.1, 0.15, 0.15, 0.2};
    t.profile.mean_session_s = 100.0;
    t.profile.mean_interarrival_s = 100.0 / users;
    t.profile.min_rate_bps = 1e6;
    return t;
}

// Raw load of `cell` when the other cell transmits at load `other`,
// written out from the definitions.
double toy_load(const Toy& t, std::size_t cell, double other) {
    const auto& m = t.model;
    const std::size_t o = 1 - cell;
    const double B = m.radio().bandwidth_hz;
    double sum = 0.0;
    for (std::size_t a = 0; a < 6; ++a) {
        const bool mine = m.gain()(a, cell) * m.pilot_power()[cell] > m.gain()(a, o) * m.pilot_power()[o];
        if (!mine) continue;
        const double psi =
            m.gain()(a, cell) * m.data_power()[cell] / (other * m.gain()(a, o) * m.data_power()[o] + m.radio().noise_w);
        sum += t.profile.gamma[a] * std::min(B, t.profile.min_rate_bps / std::log2(1.0 + psi));
    }
    return t.profile.mean_users() * sum / B;
}

// Fixed point of the two-cell system by bisection on the composed map.
std::array<double, 2> toy_fixed_point(const Toy& t) {
    auto phi = [&](double a0) { return std::min(1.0, toy_load(t, 0, std::min(1.0, toy_load(t, 1, a0)))); };
    double lo = 0.0, hi = 1.0;
    if (phi(1.0) >= 1.0) lo = hi = 1.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
        const double mid = 0.5 * (lo + hi);
        (mid - phi(mid) < 0.0 ? lo : hi) = mid;
    }
    const double a0 = 0.5 * (lo + hi);
    return {a0, std::min(1.0, toy_load(t, 1, a0))};
}

demand::DemandProfile random_profile(std::mt19937_64& rng, std::size_t A, double users) {
    demand::DemandProfile p;
    p.gamma = oracle::random_gamma(rng, A);
    p.mean_interarrival_s = p.mean_session_s / users;
    return p;
}

}  // namespace

TEST_CASE("two-cell fixed point matches the bisection oracle") {
    for (double users : {2.0, 8.0, 15.0, 25.0}) {
        const auto t = two_cell_toy(users);
        const auto expect = toy_fixed_point(t);
        const auto got = solve_loads(t.model, Topology::all_on(2), t.profile, {1e-12, 1000});
        CHECK(got.loads.load[0] == doctest::Approx(expect[0]).epsilon(1e-6));
        CHECK(got.loads.load[1] == doctest::Approx(expect[1]).epsilon(1e-6));
    }
}

TEST_CASE("cell_load matches the definition on the toy") {
    const auto t = two_cell_toy(10.0);
    const auto x = Topology::all_on(2);
    const auto cov = net::link_budget_coverage(t.model, x);
    for (double other : {0.0, 0.3, 1.0}) {
        const std::vector<double> loads{other, other};
        const auto raw = cell_load(t.model, x, cov, t.profile, loads);
        CHECK(raw[0] == doctest::Approx(toy_load(t, 0, other)));
        CHECK(raw[1] == doctest::Approx(toy_load(t, 1, other)));
    }
}

TEST_CASE("solutions satisfy the clamped fixed-point equations") {
    std::mt19937_64 rng(21);
    for (int trial = 0; trial < 15; ++trial) {
        const std::size_t L = 3 + trial % 5;
        const auto m = oracle::random_model(rng, L, 10, 10, 40.0);
        const auto x = oracle::random_topology(rng, L);
        const auto p = random_profile(rng, m.num_pixels(), 5.0 + 10.0 * trial);
        const auto res = solve_loads(m, x, p, {1e-10, 500});
        const auto cov = net::link_budget_coverage(m, x);
        const auto raw = cell_load(m, x, cov, p, res.loads.load);
        for (std::size_t l = 0; l < L; ++l) {
            if (!x[l]) {
                CHECK(res.loads.load[l] == 0.0);
                continue;
            }
            CHECK(res.loads.load[l] >= 0.0);
            CHECK(res.loads.load[l] <= 1.0);
            CHECK(res.loads.load[l] == doctest::Approx(std::min(1.0, raw[l])).epsilon(1e-8));
        }
    }
}

TEST_CASE("load-coupled loads never exceed full-load loads") {
    std::mt19937_64 rng(22);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t L = 4;
        const auto m = oracle::random_model(rng, L, 10, 10, 40.0);
        const auto x = oracle::random_topology(rng, L);
        const auto p = random_profile(rng, m.num_pixels(), 20.0);
        const auto fl = raw_loads(m, x, p, IciModel::FullLoad);
        const auto lc = raw_loads(m, x, p, IciModel::LoadCoupled);
        for (std::size_t l = 0; l < L; ++l) CHECK(lc[l] <= fl[l] * (1 + 1e-12));
    }
}

TEST_CASE("raw loads grow with traffic volume") {
    std::mt19937_64 rng(23);
    const auto m = oracle::random_model(rng, 5, 10, 10, 40.0);
    const auto x = Topology::all_on(5);
    const auto p = random_profile(rng, m.num_pixels(), 10.0);
    auto prev = raw_loads(m, x, p, IciModel::LoadCoupled);
    for (double k : {1.5, 2.0, 4.0}) {
        const auto next = raw_loads(m, x, p.scaled(k), IciModel::LoadCoupled);
        for (std::size_t l = 0; l < 5; ++l) CHECK(next[l] >= prev[l]);
        prev = next;
    }
}

TEST_CASE("non-convergence reports the last iterate") {
    const auto t = two_cell_toy(15.0);
    try {
        (void)solve_loads(t.model, Topology::all_on(2), t.profile, {1e-14, 1});
        FAIL("expected NonConvergenceError");
    } catch (const NonConvergenceError& e) {
        CHECK(e.sweeps == 1);
        REQUIRE(e.last_iterate.load.size() == 2);
        CHECK(e.last_iterate.load[0] > 0.0);
    }
}

TEST_CASE("solver input checks") {
    const auto t = two_cell_toy(5.0);
    CHECK_THROWS_AS(solve_loads(t.model, Topology(2), t.profile), InfeasibleError);
    CHECK_THROWS_AS(solve_loads(t.model, Topology(3, true), t.profile), DimensionError);
    CHECK_THROWS_AS(solve_loads(t.model, Topology::all_on(2), t.profile, {0.0, 10}), ConfigError);
}

TEST_CASE("capacity and saturation volumes bracket the load limits") {
    std::mt19937_64 rng(24);
    for (int trial = 0; trial < 6; ++trial) {
        const auto m = oracle::random_model(rng, 4, 10, 10, 40.0, 0.0);
        const auto x = Topology::all_on(4);
        const auto p = random_profile(rng, m.num_pixels(), 3.0);
        for (auto ici : {IciModel::FullLoad, IciModel::LoadCoupled}) {
            const auto cap = find_volume(m, x, p, VolumeTarget::Capacity, ici);
            const auto below = raw_loads(m, x, p.scaled(cap.multiplier), ici);
            const auto above = raw_loads(m, x, p.scaled(cap.multiplier * (1 + 1e-5)), ici);
            CHECK(*std::max_element(below.begin(), below.end()) <= 1.0);
            CHECK(*std::max_element(above.begin(), above.end()) > 1.0);
            CHECK(above[cap.binding_cell] == doctest::Approx(1.0).epsilon(1e-4));
            CHECK(cap.mean_interarrival_s == doctest::Approx(p.mean_interarrival_s / cap.multiplier));

            const auto sat = find_volume(m, x, p, VolumeTarget::Saturation, ici);
            CHECK(sat.multiplier >= cap.multiplier);
            const auto at = raw_loads(m, x, p.scaled(sat.multiplier), ici);
            const auto under = raw_loads(m, x, p.scaled(sat.multiplier * (1 - 1e-5)), ici);
            for (std::size_t l = 0; l < 4; ++l)
                if (coupling::service_areas(net::link_budget_coverage(m, x), 4, p.gamma).mass[l] > 0.0)
                    CHECK(at[l] >= 1.0);
            CHECK(*std::min_element(under.begin(), under.end()) < 1.0);
        }
    }
}

TEST_CASE("saturation is unreachable when an active cell carries no demand") {
    const auto t = two_cell_toy(5.0);
    auto p = t.profile;
    p.gamma = {0.5, 0.3, 0.2, 0.0, 0.0, 0.0};
    CHECK_THROWS_WITH_AS(find_volume(t.model, Topology::all_on(2), p, VolumeTarget::Saturation, IciModel::FullLoad),
                         doctest::Contains("cell 1"), InfeasibleError);
    CHECK_NOTHROW(find_volume(t.model, Topology::all_on(2), p, VolumeTarget::Capacity, IciModel::FullLoad));
}

TEST_CASE("service areas group covered demand by server") {
    const auto t = two_cell_toy(5.0);
    const auto areas = service_areas(net::link_budget_coverage(t.model, Topology::all_on(2)), 2, t.profile.gamma);
    CHECK(areas.pixels[0] == std::vector<std::size_t>{0, 1, 2});
    CHECK(areas.pixels[1] == std::vector<std::size_t>{3, 4, 5});
    CHECK(areas.mass[0] == doctest::Approx(0.5));
}

TEST_CASE("fixed point does not depend on the starting loads") {
    std::mt19937_64 rng(25);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t L = 3 + trial % 4;
        const auto m = oracle::random_model(rng, L, 10, 10, 40.0);
        const auto x = oracle::random_topology(rng, L);
        const auto p = random_profile(rng, m.num_pixels(), 5.0 + 8.0 * trial);
        const auto ref = solve_loads(m, x, p, {1e-12, 2000});
        for (int start = 0; start < 5; ++start) {
            std::vector<double> s(L);
            for (auto& v : s) v = start == 0 ? 0.0 : u(rng);
            const auto got = solve_loads_from(m, x, p, s, {1e-12, 2000});
            for (std::size_t l = 0; l < L; ++l) CHECK(got.loads.load[l] == doctest::Approx(ref.loads.load[l]).epsilon(1e-8));
        }
    }
}
