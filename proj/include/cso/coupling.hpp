#pragma once

#include <stdexcept>
#include <vector>

#include "cso/demand.hpp"
#include "cso/net_model.hpp"

namespace cso::coupling {

enum class IciModel { FullLoad, LoadCoupled };

struct LoadVector {
    std::vector<double> load;  // clamped to [0,1], zero for off cells
    std::vector<double> raw;   // unclamped demand load
};

struct SolveOptions {
    double tolerance{1e-4};
    std::size_t max_sweeps{100};
};

struct SolveResult {
    LoadVector loads;
    std::size_t sweeps{0};
    double residual{0.0};  // max_l |a_l - min(1, Load_l(a))|, relative to max_l a_l
};

struct NonConvergenceError : std::runtime_error {
    NonConvergenceError(const std::string& what, LoadVector last, std::size_t sweeps)
        : std::runtime_error(what), last_iterate(std::move(last)), sweeps(sweeps) {}
    LoadVector last_iterate;
    std::size_t sweeps;
};

/// Cells' service areas A_l for load computation: pixels that pass the
/// received-power and uplink criteria, grouped by serving cell.
struct ServiceAreas {
    std::vector<std::vector<std::size_t>> pixels;  // per cell
    std::vector<double> mass;                      // sum of gamma per cell
};

ServiceAreas service_areas(const net::CoverageResult& cov, std::size_t num_cells, const std::vector<double>& gamma);

/// Raw load of one cell given the loads of the others:
/// (E{mu}/E{lambda}) * sum_{a in A_l} gamma(a) * b_u(a) / B with
/// b_u(a) = min(B, r_min / log2(1 + psi(a))).
double cell_load(const net::NetworkModel& model, const ServiceAreas& areas, const demand::DemandProfile& profile,
                 std::span<const double> weights, std::size_t cell);

/// Raw loads of every cell, all evaluated at the same `others` (zero for off cells).
std::vector<double> cell_load(const net::NetworkModel& model, const Topology& topo, const net::CoverageResult& cov,
                              const demand::DemandProfile& profile, std::span<const double> others);

/// Fixed point of the load-coupling equations by in-place sweeps in cell
/// index order from loads = 1 on active cells.
SolveResult solve_loads(const net::NetworkModel& model, const Topology& topo, const demand::DemandProfile& profile,
                        const SolveOptions& options = {});

/// Same, starting from a given load vector (values for off cells are ignored).
SolveResult solve_loads_from(const net::NetworkModel& model, const Topology& topo,
                             const demand::DemandProfile& profile, std::vector<double> start,
                             const SolveOptions& options = {});

/// Raw loads under the chosen interference model: full load uses
/// others = x, load coupling uses the fixed point.
std::vector<double> raw_loads(const net::NetworkModel& model, const Topology& topo,
                              const demand::DemandProfile& profile, IciModel ici, const SolveOptions& options = {});

enum class VolumeTarget { Capacity, Saturation };

struct VolumeScale {
    double multiplier{1.0};
    double mean_interarrival_s{0.0};  // realized E{lambda} after scaling
    std::size_t binding_cell{0};
};

struct VolumeOptions {
    double rel_tolerance{1e-6};
    double max_multiplier{1e12};
    SolveOptions solve{};
};

/// V_Cap: largest multiplier with every raw load <= 1.
/// V_Sat: smallest multiplier with every active cell's raw load >= 1.
/// Throws InfeasibleError naming the binding cell when the target cannot be reached.
VolumeScale find_volume(const net::NetworkModel& model, const Topology& topo, const demand::DemandProfile& profile,
                        VolumeTarget target, IciModel ici, const VolumeOptions& options = {});

}  // namespace cso::coupling
