#include "cso/mda.hpp"

#include "cso/parallel.hpp"

namespace cso::mda {

MdaChain run_mda(const ProblemView& problem, std::size_t threads) {
    const std::size_t L = problem.num_cells;
    if (L == 0) throw ConfigError("problem has no cells");
    const bool maximize = problem.senses[1] == Sense::Maximize;
    auto better = [&](double a, double b) { return maximize ? a > b : a < b; };

    MdaChain out;
    Topology current(L);
    for (std::size_t step = 1; step <= L; ++step) {
        const auto candidates = [&] {
            std::vector<std::size_t> c;
            for (std::size_t l = 0; l < L; ++l)
                if (!current[l]) c.push_back(l);
            return c;
        }();
        std::vector<Evaluation> evals(candidates.size());
        parallel_for(candidates.size(), threads, [&](std::size_t i) {
            Topology t = current;
            t.set(candidates[i], true);
            evals[i] = problem.evaluate(t);
        });
        std::size_t best = 0;
        for (std::size_t i = 1; i < candidates.size(); ++i)
            if (better(evals[i].objectives[1], evals[best].objectives[1])) best = i;
        current.set(candidates[best], true);
        out.chain.push_back(current);
        out.evals.push_back(evals[best]);
        out.step_evaluations.push_back(candidates.size());
        out.evaluations += candidates.size();
    }
    return out;
}

}  // namespace cso::mda
