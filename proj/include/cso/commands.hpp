#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cso/config.hpp"
#include "cso/demand.hpp"
#include "cso/io.hpp"
#include "cso/net_model.hpp"
#include "cso/simulator.hpp"

namespace cso {

/// Command-line overrides shared by every subcommand.
struct CommandOptions {
    std::filesystem::path config_path;  // empty: built-in defaults
    std::optional<std::uint64_t> seed;  // replaces both the optimization and simulation seeds
    std::size_t threads{1};
    std::filesystem::path out_dir{"."};
    std::optional<std::vector<double>> volume_multipliers;
    std::optional<std::string> ici;
    std::optional<std::string> objectives;  // objective pair
    std::optional<bool> normalize_demand;
    std::string algorithm{"moea"};  // or "mda"
    bool exhaustive{false};
    std::filesystem::path front_path;  // evaluate/compare; empty: <out>/front.csv
};

/// Loads the config file (if any) and applies the overrides.
ScenarioConfig resolve_config(const CommandOptions& options);

struct Scenario {
    ScenarioConfig config;
    net::NetworkModel model;
    demand::DemandProfile profile;  // base volume

    io::RunStamp stamp() const;
};

Scenario build_scenario(const ScenarioConfig& config);

/// Spatial distribution of one source on the model's grid. `hotspot_seed`
/// replaces the hotspot seed when set.
std::vector<double> spatial_gamma(const DemandSourceConfig& source, const net::NetworkModel& model,
                                  std::optional<std::uint64_t> hotspot_seed = std::nullopt);

/// Base profile, possibly redrawn with another hotspot seed.
demand::DemandProfile build_profile(const ScenarioConfig& config, const net::NetworkModel& model,
                                    std::optional<std::uint64_t> hotspot_seed = std::nullopt);

/// Simulation phases at base volume (one constant phase when none are configured).
sim::DemandSchedule build_schedule(const Scenario& scenario);

/// Profile used by the optimizer: base gamma at lc_volume_fraction times the
/// load-coupled V_Cap of the all-on topology.
demand::DemandProfile optimization_profile(const Scenario& scenario);

/// Arrival-rate multipliers (relative to base) for the configured sweep.
std::vector<double> volume_scales(const Scenario& scenario);

int cmd_generate(const CommandOptions& options);
int cmd_optimize(const CommandOptions& options);
int cmd_evaluate(const CommandOptions& options);
int cmd_compare(const CommandOptions& options);
int cmd_coverage_report(const CommandOptions& options);

}  // namespace cso
