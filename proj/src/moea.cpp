#include "cso/moea.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>
#include <unordered_map>

#include "cso/parallel.hpp"

namespace cso::moea {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Objectives to_minimization(const Objectives& natural, const std::array<Sense, 2>& senses) {
    Objectives m{};
    for (std::size_t k = 0; k < 2; ++k) m[k] = senses[k] == Sense::Maximize ? -natural[k] : natural[k];
    return m;
}

bool dominates(const Objectives& a, const Objectives& b) {
    return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
}

bool constrained_dominates(const Individual& a, const Individual& b) {
    if (a.eval.feasible != b.eval.feasible) return a.eval.feasible;
    if (!a.eval.feasible) return a.eval.outage_fraction < b.eval.outage_fraction;
    return dominates(a.min_obj, b.min_obj);
}

std::vector<std::vector<std::size_t>> nondominated_sort(const std::vector<Individual>& pop) {
    const std::size_t n = pop.size();
    std::vector<std::vector<std::size_t>> dominated(n);
    std::vector<std::size_t> count(n, 0);
    std::vector<std::vector<std::size_t>> fronts(1);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (constrained_dominates(pop[i], pop[j])) {
                dominated[i].push_back(j);
                ++count[j];
            } else if (constrained_dominates(pop[j], pop[i])) {
                dominated[j].push_back(i);
                ++count[i];
            }
        }
    }
    for (std::size_t i = 0; i < n; ++i)
        if (count[i] == 0) fronts[0].push_back(i);
    while (!fronts.back().empty()) {
        std::vector<std::size_t> next;
        for (auto i : fronts.back())
            for (auto j : dominated[i])
                if (--count[j] == 0) next.push_back(j);
        std::sort(next.begin(), next.end());
        fronts.push_back(std::move(next));
    }
    fronts.pop_back();
    return fronts;
}

std::vector<double> crowding_distance(const std::vector<Objectives>& points) {
    const std::size_t n = points.size();
    std::vector<double> d(n, 0.0);
    if (n <= 2) {
        std::fill(d.begin(), d.end(), kInf);
        return d;
    }
    std::vector<std::size_t> idx(n);
    for (std::size_t k = 0; k < 2; ++k) {
        std::iota(idx.begin(), idx.end(), std::size_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::size_t a, std::size_t b) { return points[a][k] < points[b][k]; });
        d[idx.front()] = kInf;
        d[idx.back()] = kInf;
        const double range = points[idx.back()][k] - points[idx.front()][k];
        if (!(range > 0.0) || !std::isfinite(range)) continue;
        for (std::size_t i = 1; i + 1 < n; ++i)
            d[idx[i]] += (points[idx[i + 1]][k] - points[idx[i - 1]][k]) / range;
    }
    return d;
}

double hypervolume_2d(std::vector<Objectives> points, const Objectives& reference) {
    std::erase_if(points, [&](const Objectives& p) { return !(p[0] < reference[0] && p[1] < reference[1]); });
    std::sort(points.begin(), points.end());
    double area = 0.0;
    double level = reference[1];
    for (const auto& p : points) {
        if (p[1] >= level) continue;
        area += (reference[0] - p[0]) * (level - p[1]);
        level = p[1];
    }
    return area;
}

std::vector<Individual> pareto_filter(std::vector<Individual> candidates) {
    std::erase_if(candidates, [](const Individual& i) { return !i.eval.feasible; });
    std::vector<std::string> keys(candidates.size());
    for (std::size_t i = 0; i < candidates.size(); ++i) keys[i] = candidates[i].genome.to_string();
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (candidates[a].min_obj != candidates[b].min_obj) return candidates[a].min_obj < candidates[b].min_obj;
        return keys[a] < keys[b];
    });
    // Ascending first objective; a point survives only if it strictly improves
    // the second objective over everything before it.
    std::vector<Individual> out;
    double best = kInf;
    for (auto i : order) {
        if (!(candidates[i].min_obj[1] < best)) continue;
        best = candidates[i].min_obj[1];
        out.push_back(std::move(candidates[i]));
    }
    for (auto& ind : out) {
        ind.rank = 0;
        ind.crowding = 0.0;
    }
    const auto cd = [&] {
        std::vector<Objectives> pts;
        for (const auto& ind : out) pts.push_back(ind.min_obj);
        return crowding_distance(pts);
    }();
    for (std::size_t i = 0; i < out.size(); ++i) out[i].crowding = cd[i];
    return out;
}

namespace {

class EvaluationCache {
public:
    EvaluationCache(const ProblemView& problem, std::size_t threads) : problem_(problem), threads_(threads) {}

    /// Evaluates the genomes, reusing earlier results. Returns the number of new evaluations.
    std::size_t fill(std::vector<Individual>& inds, std::size_t generation) {
        std::vector<const Topology*> missing;
        std::unordered_map<Topology, std::size_t, TopologyHash> pending;
        for (const auto& ind : inds)
            if (!cache_.contains(ind.genome) && pending.emplace(ind.genome, missing.size()).second)
                missing.push_back(&ind.genome);
        std::vector<Evaluation> results(missing.size());
        try {
            parallel_for(missing.size(), threads_, [&](std::size_t i) { results[i] = problem_.evaluate(*missing[i]); });
        } catch (const std::exception& e) {
            throw std::runtime_error("evaluation failed in generation " + std::to_string(generation) + ": " + e.what());
        }
        for (std::size_t i = 0; i < missing.size(); ++i) cache_.emplace(*missing[i], results[i]);
        for (auto& ind : inds) {
            ind.eval = cache_.at(ind.genome);
            ind.min_obj = to_minimization(ind.eval.objectives, problem_.senses);
        }
        return missing.size();
    }

private:
    const ProblemView& problem_;
    std::size_t threads_;
    std::unordered_map<Topology, Evaluation, TopologyHash> cache_;
};

void repair(Topology& t, std::mt19937_64& rng) {
    if (!t.none()) return;
    std::uniform_int_distribution<std::size_t> pick(0, t.size() - 1);
    t.set(pick(rng), true);
}

// Ranks the merged population and keeps the best `n` by (rank, crowding).
std::vector<Individual> survive(std::vector<Individual> merged, std::size_t n) {
    const auto fronts = nondominated_sort(merged);
    std::vector<Individual> next;
    next.reserve(n);
    for (std::size_t r = 0; r < fronts.size() && next.size() < n; ++r) {
        std::vector<Objectives> pts;
        for (auto i : fronts[r]) pts.push_back(merged[i].min_obj);
        const auto cd = crowding_distance(pts);
        std::vector<std::size_t> order(fronts[r].size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        if (next.size() + order.size() > n)
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return cd[a] > cd[b]; });
        for (auto k : order) {
            if (next.size() == n) break;
            Individual ind = merged[fronts[r][k]];
            ind.rank = r;
            ind.crowding = cd[k];
            next.push_back(std::move(ind));
        }
    }
    return next;
}

std::size_t tournament(const std::vector<Individual>& pop, std::mt19937_64& rng) {
    std::uniform_int_distribution<std::size_t> pick(0, pop.size() - 1);
    const std::size_t a = pick(rng);
    const std::size_t b = pick(rng);
    if (pop[a].rank != pop[b].rank) return pop[a].rank < pop[b].rank ? a : b;
    if (pop[a].crowding != pop[b].crowding) return pop[a].crowding > pop[b].crowding ? a : b;
    return std::min(a, b);
}

double front_hypervolume(const std::vector<Individual>& pop, const Objectives& reference) {
    std::vector<Objectives> pts;
    for (const auto& ind : pop)
        if (ind.rank == 0 && ind.eval.feasible) pts.push_back(ind.min_obj);
    return hypervolume_2d(std::move(pts), reference);
}

}  // namespace

MoeaResult evolve(const ProblemView& problem, const MoeaConfig& config) {
    const std::size_t L = problem.num_cells;
    const std::size_t N = config.population_size;
    if (L == 0) throw ConfigError("problem has no cells");
    if (N < 4 || N % 2 != 0) throw ConfigError("population size must be even and at least 4");
    const double pm = config.mutation_prob.value_or(1.0 / static_cast<double>(L));
    if (pm < 0.0 || pm > 1.0) throw ConfigError("mutation probability must be in [0,1]");
    if (config.crossover_prob < 0.0 || config.crossover_prob > 1.0)
        throw ConfigError("crossover probability must be in [0,1]");
    if (config.initial.size() > N) throw ConfigError("more injected topologies than population slots");

    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    EvaluationCache cache(problem, config.threads);

    // Generation 0: injected members, then random genomes whose density of
    // active cells spans (0, 1) so every NAC region is sampled.
    std::vector<Individual> pop(N);
    const std::size_t injected = config.initial.size();
    for (std::size_t i = 0; i < N; ++i) {
        if (i < injected) {
            if (config.initial[i].size() != L) throw DimensionError("injected topology has the wrong size");
            pop[i].genome = config.initial[i];
        } else {
            const double density = (static_cast<double>(i - injected) + 0.5) / static_cast<double>(N - injected);
            pop[i].genome = Topology(L);
            for (std::size_t l = 0; l < L; ++l) pop[i].genome.set(l, u01(rng) < density);
        }
        repair(pop[i].genome, rng);
    }
    MoeaResult result;
    std::size_t fresh = cache.fill(pop, 0);
    pop = survive(std::move(pop), N);

    auto update_reference = [&] {
        if (result.reference_set) return;
        Objectives nadir{-kInf, -kInf};
        bool any = false;
        for (const auto& ind : pop) {
            if (!ind.eval.feasible) continue;
            any = true;
            for (std::size_t k = 0; k < 2; ++k) nadir[k] = std::max(nadir[k], ind.min_obj[k]);
        }
        if (!any) return;
        result.reference = nadir;
        result.reference_set = true;
    };
    auto record = [&](std::size_t gen, std::size_t evals) {
        update_reference();
        GenerationStats s;
        s.generation = gen;
        s.evaluations = evals;
        s.new_evaluations = fresh;
        s.hypervolume = result.reference_set ? front_hypervolume(pop, result.reference) : 0.0;
        for (const auto& ind : pop) s.front_size += (ind.rank == 0 && ind.eval.feasible);
        result.history.push_back(s);
    };
    record(0, N);

    std::size_t gen = 0;
    while (gen < config.max_generations) {
        ++gen;
        std::vector<Individual> offspring;
        offspring.reserve(N);
        while (offspring.size() < N) {
            Topology c1 = pop[tournament(pop, rng)].genome;
            Topology c2 = pop[tournament(pop, rng)].genome;
            if (u01(rng) < config.crossover_prob) {
                for (std::size_t l = 0; l < L; ++l) {
                    if (u01(rng) < 0.5) {
                        const bool b1 = c1[l];
                        c1.set(l, c2[l]);
                        c2.set(l, b1);
                    }
                }
            }
            for (auto* c : {&c1, &c2}) {
                for (std::size_t l = 0; l < L; ++l)
                    if (u01(rng) < pm) c->flip(l);
                repair(*c, rng);
                offspring.push_back(Individual{std::move(*c), {}, {}, 0, 0.0});
            }
        }
        fresh = cache.fill(offspring, gen);
        std::vector<Individual> merged = std::move(pop);
        merged.insert(merged.end(), std::make_move_iterator(offspring.begin()),
                      std::make_move_iterator(offspring.end()));
        pop = survive(std::move(merged), N);
        record(gen, N);

        if (gen >= config.hv_patience) {
            const double before = result.history[gen - config.hv_patience].hypervolume;
            const double now = result.history[gen].hypervolume;
            if (before > 0.0 && (now - before) / before < config.hv_threshold) break;
        }
    }

    result.generations = gen;
    result.final_hypervolume = result.history.back().hypervolume;
    std::vector<Individual> rank0;
    for (const auto& ind : pop)
        if (ind.rank == 0) rank0.push_back(ind);
    result.front = pareto_filter(std::move(rank0));
    return result;
}

std::vector<Individual> exhaustive_front(const ProblemView& problem, std::size_t threads) {
    const std::size_t L = problem.num_cells;
    if (L == 0 || L > 20) throw DimensionError("exhaustive enumeration is limited to 1..20 cells");
    const std::size_t count = (std::size_t{1} << L) - 1;
    std::vector<Individual> all(count);
    parallel_for(count, threads, [&](std::size_t i) {
        all[i].genome = Topology::from_mask(i + 1, L);
        all[i].eval = problem.evaluate(all[i].genome);
        all[i].min_obj = to_minimization(all[i].eval.objectives, problem.senses);
    });
    return pareto_filter(std::move(all));
}

}  // namespace cso::moea
