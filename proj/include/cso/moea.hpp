#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "cso/problem.hpp"

namespace cso::moea {

using Objectives = std::array<double, 2>;

struct Individual {
    Topology genome;
    Evaluation eval;
    Objectives min_obj{0.0, 0.0};  // objectives mapped to minimization
    std::size_t rank{0};
    double crowding{0.0};
};

struct MoeaConfig {
    std::size_t population_size{100};
    double crossover_prob{1.0};
    std::optional<double> mutation_prob;  // default 1/L
    double hv_threshold{1e-5};            // relative, 0.001 %
    std::size_t hv_patience{20};
    std::size_t max_generations{500};
    std::uint64_t seed{1};
    std::size_t threads{1};
    std::vector<Topology> initial;  // injected into generation 0 before random members
};

struct GenerationStats {
    std::size_t generation{0};
    std::size_t evaluations{0};      // offspring evaluated this generation
    std::size_t new_evaluations{0};  // of which not served from the cache
    double hypervolume{0.0};
    std::size_t front_size{0};
};

struct MoeaResult {
    std::vector<Individual> front;  // feasible, nondominated, sorted by first objective
    std::vector<GenerationStats> history;
    std::size_t generations{0};
    double final_hypervolume{0.0};
    Objectives reference{0.0, 0.0};  // minimization space
    bool reference_set{false};
};

Objectives to_minimization(const Objectives& natural, const std::array<Sense, 2>& senses);

/// Pareto dominance between two minimization vectors.
bool dominates(const Objectives& a, const Objectives& b);
/// Feasible beats infeasible; infeasibles compare by outage fraction;
/// feasibles by Pareto dominance.
bool constrained_dominates(const Individual& a, const Individual& b);

/// Fronts F0, F1, ... as index lists into `pop`.
std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<Individual>& pop);

/// Normalized crowding distance of a set of points; extremes get +inf.
std::vector<double> crowding_distance(const std::vector<Objectives>& points);

/// Exact area dominated by `points` and bounded by `reference` (minimization).
/// Points not strictly better than the reference in both coordinates are ignored.
double hypervolume_2d(std::vector<Objectives> points, const Objectives& reference);

MoeaResult evolve(const ProblemView& problem, const MoeaConfig& config);

/// Feasible nondominated set by enumerating all nonzero topologies (L <= 20).
std::vector<Individual> exhaustive_front(const ProblemView& problem, std::size_t threads = 1);

/// Keeps feasible members, drops repeated genomes and repeated objective
/// vectors (keeping the lexicographically smallest bitstring), removes
/// dominated members and sorts by the first objective.
std::vector<Individual> pareto_filter(std::vector<Individual> candidates);

}  // namespace cso::moea
