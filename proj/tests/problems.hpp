#pragma once

// Synthetic bi-objective problems with known structure, for the optimizers.

#include <random>
#include <vector>

#include "cso/problem.hpp"

namespace synthetic {

/// f1 = active cells (min), f2 = sum of the active weights (max).
/// Topologies with fewer than `min_active` cells are infeasible, with an
/// outage that shrinks as cells are added.
inline cso::ProblemView additive(std::vector<double> weights, std::size_t min_active = 1) {
    const std::size_t L = weights.size();
    return {L,
            {cso::Sense::Minimize, cso::Sense::Maximize},
            [weights, min_active](const cso::Topology& t) {
                cso::Evaluation e;
                double s = 0.0;
                for (std::size_t l = 0; l < t.size(); ++l)
                    if (t[l]) s += weights[l];
                const auto n = t.active_count();
                e.objectives = {static_cast<double>(n), s};
                e.feasible = n >= min_active && n > 0;
                e.outage_fraction = e.feasible ? 0.0 : 1.0 - static_cast<double>(n) / static_cast<double>(min_active + 1);
                return e;
            }};
}

/// Weights plus pairwise penalties between neighbours in a random graph, so
/// that greedy growth is not optimal.
inline cso::ProblemView interacting(std::size_t L, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> w(L);
    for (auto& v : w) v = 0.5 + u(rng);
    std::vector<double> pen(L * L, 0.0);
    for (std::size_t i = 0; i < L; ++i)
        for (std::size_t j = i + 1; j < L; ++j)
            if (u(rng) < 0.4) pen[i * L + j] = pen[j * L + i] = 0.6 * u(rng);
    return {L,
            {cso::Sense::Minimize, cso::Sense::Maximize},
            [w, pen, L](const cso::Topology& t) {
                cso::Evaluation e;
                double s = 0.0;
                for (std::size_t i = 0; i < L; ++i) {
                    if (!t[i]) continue;
                    s += w[i];
                    for (std::size_t j = i + 1; j < L; ++j)
                        if (t[j]) s -= pen[i * L + j];
                }
                e.objectives = {static_cast<double>(t.active_count()), s};
                e.feasible = t.active_count() > 0;
                e.outage_fraction = e.feasible ? 0.0 : 1.0;
                return e;
            }};
}

}  // namespace synthetic
