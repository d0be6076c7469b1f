#include <algorithm>
#include <atomic>
#include <numeric>
#include <random>

#include "cso/mda.hpp"
#include "cso/moea.hpp"
#include "doctest.h"
#include "problems.hpp"

using namespace cso;

namespace {

// Greedy reference written directly from the construction rule.
std::vector<Topology> greedy_oracle(const ProblemView& p) {
    std::vector<Topology> out;
    Topology cur(p.num_cells);
    for (std::size_t step = 0; step < p.num_cells; ++step) {
        std::size_t best = p.num_cells;
        double best_val = 0.0;
        for (std::size_t l = 0; l < p.num_cells; ++l) {
            if (cur[l]) continue;
            auto t = cur;
            t.set(l, true);
            const double v = p.evaluate(t).objectives[1];
            const double s = p.senses[1] == Sense::Maximize ? v : -v;
            if (best == p.num_cells || s > best_val) {
                best = l;
                best_val = s;
            }
        }
        cur.set(best, true);
        out.push_back(cur);
    }
    return out;
}

}  // namespace

TEST_CASE("chain members grow by one switch per step") {
    for (std::uint64_t seed = 1; seed <= 8; ++seed) {
        const auto p = synthetic::interacting(7 + seed, seed);
        const auto res = mda::run_mda(p);
        REQUIRE(res.chain.size() == p.num_cells);
        REQUIRE(res.evals.size() == p.num_cells);
        for (std::size_t j = 0; j < res.chain.size(); ++j) {
            CHECK(res.chain[j].active_count() == j + 1);
            if (j > 0) {
                CHECK(hamming_distance(res.chain[j - 1], res.chain[j]) == 1);
                for (std::size_t l = 0; l < p.num_cells; ++l)
                    if (res.chain[j - 1][l]) CHECK(res.chain[j][l]);
            }
        }
        CHECK(res.chain == greedy_oracle(p));
    }
}

TEST_CASE("evaluation count is L(L+1)/2") {
    for (std::size_t L : {1, 2, 5, 13}) {
        std::atomic<std::size_t> calls{0};
        auto p = synthetic::additive(std::vector<double>(L, 1.0));
        auto inner = p.evaluate;
        p.evaluate = [&calls, inner](const Topology& t) {
            ++calls;
            return inner(t);
        };
        const auto res = mda::run_mda(p);
        CHECK(res.evaluations == L * (L + 1) / 2);
        CHECK(calls.load() == L * (L + 1) / 2);
        CHECK(std::accumulate(res.step_evaluations.begin(), res.step_evaluations.end(), std::size_t{0}) ==
              res.evaluations);
        CHECK(res.step_evaluations.front() == L);
    }
}

TEST_CASE("additive objectives give the optimal chain") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<double> w(3 + trial % 10);
        for (auto& v : w) v = u(rng);
        const auto p = synthetic::additive(w);
        const auto res = mda::run_mda(p);
        std::vector<double> sorted = w;
        std::sort(sorted.rbegin(), sorted.rend());
        double best = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) {
            best += sorted[j];
            CHECK(res.evals[j].objectives[1] == doctest::Approx(best));
        }
        // On an additive problem the chain is exactly the exhaustive front.
        const auto ex = moea::exhaustive_front(p);
        CHECK(ex.size() == w.size());
    }
}

TEST_CASE("ties go to the lowest index") {
    const auto p = synthetic::additive({1.0, 2.0, 2.0, 1.0});
    const auto res = mda::run_mda(p);
    CHECK(res.chain[0].to_string() == "0100");
    CHECK(res.chain[1].to_string() == "0110");
    CHECK(res.chain[2].to_string() == "1110");
    CHECK(res.chain[3].to_string() == "1111");
}

TEST_CASE("minimized second objectives are handled") {
    auto p = synthetic::additive({3.0, 1.0, 2.0});
    p.senses = {Sense::Minimize, Sense::Minimize};
    const auto res = mda::run_mda(p);
    CHECK(res.chain[0].to_string() == "010");
    CHECK(res.chain[1].to_string() == "011");
}

TEST_CASE("thread count does not change the chain") {
    const auto p = synthetic::interacting(15, 3);
    CHECK(mda::run_mda(p, 1).chain == mda::run_mda(p, 4).chain);
}
