#pragma once

#include <memory>
#include <mutex>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "cso/net_model.hpp"
#include "cso/simulator.hpp"

namespace cso::sim {

/// Memoized full-load outage fraction per topology. Thread-safe.
class CoverageOracle {
public:
    CoverageOracle(const net::NetworkModel& model, double kappa_cov) : model_(&model), kappa_cov_(kappa_cov) {}

    double outage(const Topology& topo) const;
    bool feasible(const Topology& topo) const { return !topo.none() && outage(topo) <= kappa_cov_; }
    double kappa_cov() const { return kappa_cov_; }
    std::size_t size() const;

private:
    const net::NetworkModel* model_;
    double kappa_cov_;
    mutable std::mutex mu_;
    mutable std::unordered_map<Topology, double, TopologyHash> cache_;
};

/// Snapshot association of a user set under full-load interference.
struct UserState {
    std::vector<std::int32_t> serving;
    std::vector<std::uint8_t> satisfied;
    std::vector<double> cell_load;  // bandwidth asked by the cell's users / B; outage users ask B
};

UserState assess_users(const net::NetworkModel& model, const Topology& topo, std::span<const std::size_t> users,
                       double min_rate_bps);

/// Switches off the lowest-loaded cell while its users can be re-associated
/// without anyone losing service; stops at the first failure.
Topology cell_zooming(const net::NetworkModel& model, std::span<const std::size_t> users, double min_rate_bps,
                      const CoverageOracle& oracle);

/// Like cell_zooming, but a failed candidate only moves the scan on to the
/// next-lowest-loaded cell.
Topology improved_cell_zooming(const net::NetworkModel& model, std::span<const std::size_t> users,
                               double min_rate_bps, const CoverageOracle& oracle);

struct LoadInterferenceSettings {
    double load_threshold{0.3};
    double interference_weight{0.5};

    bool operator==(const LoadInterferenceSettings&) const = default;
};

/// Mean interference power over the pixels each cell serves with every cell on.
std::vector<double> cell_interference(const net::NetworkModel& model);

/// One pass over cells below the load threshold, ranked by
/// load + w * interference / max interference, switching each off when
/// coverage allows. Users are re-associated best effort.
Topology load_interference_aware(const net::NetworkModel& model, std::span<const std::size_t> users,
                                 double min_rate_bps, const CoverageOracle& oracle,
                                 const std::vector<double>& interference, const LoadInterferenceSettings& settings);

/// Greedy switch-on of the cell that can serve the most unserved users at
/// acceptable SNR within its bandwidth, then cells that best reduce outage
/// until coverage holds.
Topology set_cover(const net::NetworkModel& model, std::span<const std::size_t> users, double min_rate_bps,
                   const CoverageOracle& oracle);

enum class Benchmark { CellZooming, ImprovedCellZooming, LoadInterferenceAware, SetCover };

std::string to_string(Benchmark b);
std::vector<Benchmark> all_benchmarks();

/// Policy that recomputes the benchmark's topology from each snapshot.
Policy benchmark_policy(Benchmark b, const net::NetworkModel& model, std::shared_ptr<const CoverageOracle> oracle,
                        const LoadInterferenceSettings& lia = {});

}  // namespace cso::sim
