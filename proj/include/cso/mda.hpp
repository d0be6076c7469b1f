#pragma once

#include <vector>

#include "cso/problem.hpp"

namespace cso::mda {

/// x_1..x_L with x_j holding j active cells and consecutive members one
/// switch apart.
struct MdaChain {
    std::vector<Topology> chain;
    std::vector<Evaluation> evals;
    std::vector<std::size_t> step_evaluations;  // candidates scored at each step
    std::size_t evaluations{0};
};

/// Greedy chain that starts from the best single cell and repeatedly adds
/// the cell giving the best second objective (ties: lowest index).
MdaChain run_mda(const ProblemView& problem, std::size_t threads = 1);

}  // namespace cso::mda
