#include "cso/coupling.hpp"

#include <algorithm>
#include <functional>

namespace cso::coupling {

ServiceAreas service_areas(const net::CoverageResult& cov, std::size_t num_cells, const std::vector<double>& gamma) {
    if (gamma.size() != cov.num_pixels()) throw DimensionError("service_areas: demand size mismatch");
    ServiceAreas areas;
    areas.pixels.resize(num_cells);
    areas.mass.assign(num_cells, 0.0);
    for (std::size_t a = 0; a < cov.num_pixels(); ++a) {
        if (!cov.covered(a)) continue;
        const auto l = static_cast<std::size_t>(cov.serving[a]);
        areas.pixels[l].push_back(a);
        areas.mass[l] += gamma[a];
    }
    return areas;
}

double cell_load(const net::NetworkModel& model, const ServiceAreas& areas, const demand::DemandProfile& profile,
                 std::span<const double> weights, std::size_t cell) {
    const double B = model.radio().bandwidth_hz;
    const double noise = model.radio().noise_w;
    const double r_min = profile.min_rate_bps;
    double sum = 0.0;
    for (std::size_t a : areas.pixels[cell]) {
        const double g = profile.gamma[a];
        if (g == 0.0) continue;
        const auto row = model.data_rx().row(a);
        const double psi = row[cell] / (net::interference_at(row, weights, cell) + noise);
        const double h = std::log2(1.0 + psi);
        sum += g * std::min(B, r_min / h);
    }
    return profile.mean_users() * sum / B;
}

std::vector<double> cell_load(const net::NetworkModel& model, const Topology& topo, const net::CoverageResult& cov,
                              const demand::DemandProfile& profile, std::span<const double> others) {
    const std::size_t L = model.num_cells();
    if (topo.size() != L || others.size() != L) throw DimensionError("cell_load: size mismatch");
    const auto areas = service_areas(cov, L, profile.gamma);
    std::vector<double> weights(L, 0.0);
    for (std::size_t l = 0; l < L; ++l) weights[l] = topo[l] ? others[l] : 0.0;
    std::vector<double> raw(L, 0.0);
    for (std::size_t l = 0; l < L; ++l)
        if (topo[l]) raw[l] = cell_load(model, areas, profile, weights, l);
    return raw;
}

SolveResult solve_loads_from(const net::NetworkModel& model, const Topology& topo,
                             const demand::DemandProfile& profile, std::vector<double> start,
                             const SolveOptions& options) {
    const std::size_t L = model.num_cells();
    if (topo.size() != L || start.size() != L) throw DimensionError("solve_loads: size mismatch");
    if (profile.gamma.size() != model.num_pixels()) throw DimensionError("solve_loads: demand size mismatch");
    if (!(options.tolerance > 0.0)) throw ConfigError("load tolerance must be positive");
    if (topo.none()) throw InfeasibleError("solve_loads needs at least one active cell");

    const auto areas = service_areas(net::link_budget_coverage(model, topo), L, profile.gamma);
    const auto active = topo.active_cells();
    std::vector<double> alpha(L, 0.0);
    for (auto l : active) alpha[l] = std::clamp(start[l], 0.0, 1.0);

    std::vector<double> raw(L, 0.0);
    for (std::size_t sweep = 1; sweep <= options.max_sweeps; ++sweep) {
        double max_change = 0.0;
        for (auto l : active) {
            const double next = std::min(1.0, cell_load(model, areas, profile, alpha, l));
            const double scale = std::max(next, alpha[l]);
            if (scale > 0.0) max_change = std::max(max_change, std::abs(next - alpha[l]) / scale);
            alpha[l] = next;
        }
        if (max_change > options.tolerance) continue;

        // Jacobi residual of the clamped fixed-point map at the current iterate.
        double norm = 0.0;
        double residual = 0.0;
        for (auto l : active) {
            raw[l] = cell_load(model, areas, profile, alpha, l);
            residual = std::max(residual, std::abs(alpha[l] - std::min(1.0, raw[l])));
            norm = std::max(norm, alpha[l]);
        }
        const double relative = norm > 0.0 ? residual / norm : residual;
        if (relative <= options.tolerance) return {{alpha, raw}, sweep, relative};
    }
    for (auto l : active) raw[l] = cell_load(model, areas, profile, alpha, l);
    throw NonConvergenceError("load iteration did not converge within " + std::to_string(options.max_sweeps) +
                                  " sweeps",
                              {alpha, raw}, options.max_sweeps);
}

SolveResult solve_loads(const net::NetworkModel& model, const Topology& topo, const demand::DemandProfile& profile,
                        const SolveOptions& options) {
    std::vector<double> start(model.num_cells(), 0.0);
    for (std::size_t l = 0; l < start.size(); ++l) start[l] = topo[l] ? 1.0 : 0.0;
    return solve_loads_from(model, topo, profile, std::move(start), options);
}

std::vector<double> raw_loads(const net::NetworkModel& model, const Topology& topo,
                              const demand::DemandProfile& profile, IciModel ici, const SolveOptions& options) {
    if (ici == IciModel::LoadCoupled) return solve_loads(model, topo, profile, options).loads.raw;
    std::vector<double> full(model.num_cells(), 1.0);
    return cell_load(model, topo, net::link_budget_coverage(model, topo), profile, full);
}

VolumeScale find_volume(const net::NetworkModel& model, const Topology& topo, const demand::DemandProfile& profile,
                        VolumeTarget target, IciModel ici, const VolumeOptions& options) {
    if (topo.none()) throw InfeasibleError("find_volume needs at least one active cell");
    const auto active = topo.active_cells();
    const bool capacity = target == VolumeTarget::Capacity;
    if (!capacity) {
        const auto areas = service_areas(net::link_budget_coverage(model, topo), model.num_cells(), profile.gamma);
        for (auto l : active)
            if (areas.mass[l] <= 0.0)
                throw InfeasibleError("saturation unreachable; cell " + std::to_string(l) + " carries no demand");
    }

    auto loads_at = [&](double m) { return raw_loads(model, topo, profile.scaled(m), ici, options.solve); };
    // Capacity: every raw load <= 1. Saturation: every active raw load >= 1.
    auto holds = [&](const std::vector<double>& raw) {
        for (auto l : active)
            if (capacity ? raw[l] > 1.0 : raw[l] < 1.0) return false;
        return true;
    };
    auto binding = [&](const std::vector<double>& raw) {
        std::size_t best = active.front();
        for (auto l : active)
            if (capacity ? raw[l] > raw[best] : raw[l] < raw[best]) best = l;
        return best;
    };

    // For capacity the predicate holds below the answer; for saturation above it.
    auto good = [&](double m) { return holds(loads_at(m)) == capacity; };
    double lo = 1.0;
    double hi = 1.0;
    if (good(1.0)) {
        hi = 2.0;
        while (good(hi)) {
            lo = hi;
            hi *= 2.0;
            if (hi > options.max_multiplier) {
                const auto raw = loads_at(lo);
                throw InfeasibleError("volume target unreachable; binding cell " + std::to_string(binding(raw)));
            }
        }
    } else {
        lo = 0.5;
        while (!good(lo)) {
            hi = lo;
            lo *= 0.5;
            if (lo < 1.0 / options.max_multiplier) {
                const auto raw = loads_at(hi);
                throw InfeasibleError("volume target unreachable; binding cell " + std::to_string(binding(raw)));
            }
        }
    }
    while (hi - lo > options.rel_tolerance * lo) {
        const double mid = 0.5 * (lo + hi);
        (good(mid) ? lo : hi) = mid;
    }
    const double m = capacity ? lo : hi;
    const auto raw = loads_at(m);
    return {m, profile.mean_interarrival_s / m, binding(raw)};
}

}  // namespace cso::coupling
