#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cso/benchmarks.hpp"
#include "cso/coupling.hpp"
#include "cso/demand.hpp"
#include "cso/metrics.hpp"
#include "cso/net_model.hpp"
#include "cso/problem.hpp"

namespace cso {

/// Where a spatial distribution comes from: "hotspots", "uniform" or "file".
struct DemandSourceConfig {
    std::string source{"hotspots"};
    std::string file;
    bool normalize{true};
    demand::HotspotConfig hotspots{};

    bool operator==(const DemandSourceConfig&) const = default;
};

struct ServiceConfig {
    DemandSourceConfig spatial{};
    double mean_interarrival_s{0.115};
    double mean_session_s{119.2};
    double min_rate_bps{400e3};

    bool operator==(const ServiceConfig&) const = default;
};

struct DemandConfig {
    DemandSourceConfig spatial{};
    double mean_interarrival_s{0.115};
    double mean_session_s{119.2};
    double min_rate_bps{400e3};
    std::vector<ServiceConfig> services;  // when non-empty, replaces the single class above

    bool operator==(const DemandConfig&) const = default;
};

struct OptimizationConfig {
    ObjectivePair pair{ObjectivePair::F1F2};
    std::size_t population_size{100};
    double crossover_prob{1.0};
    std::optional<double> mutation_prob;  // null: 1/L
    double hv_threshold{1e-5};
    std::size_t hv_patience{20};
    std::size_t max_generations{500};
    std::uint64_t seed{1};
    std::string initialization{"mda_chain"};  // or "random"
    double lc_volume_fraction{0.6};            // (f5, f6) volume, fraction of the load-coupled V_Cap
    double load_tolerance{1e-4};
    std::size_t max_load_sweeps{100};

    bool operator==(const OptimizationConfig&) const = default;
};

/// A demand phase of a time-varying run. The phase multiplies the arrival
/// rate and may redraw the hotspot layout with another seed.
struct PhaseConfig {
    double start_s{0.0};
    double volume_scale{1.0};
    std::optional<std::uint64_t> hotspot_seed;

    bool operator==(const PhaseConfig&) const = default;
};

struct SimulationConfig {
    double duration_s{5400.0};
    std::size_t num_experiments{100};
    double qos_check_interval_s{1.0};
    double target_qos{0.975};
    std::uint64_t seed{1};
    coupling::IciModel ici{coupling::IciModel::FullLoad};
    std::vector<double> volume_multipliers{0.2, 0.6, 1.0, 1.4};
    std::string volume_reference{"vcap"};  // multipliers relative to all-on V_Cap, or "base"
    std::string selection{"min_nac"};      // or "min_power"
    std::vector<PhaseConfig> phases;       // empty: one constant phase

    bool operator==(const SimulationConfig&) const = default;
};

struct PowerConfig {
    metrics::PowerModel model{};
    metrics::UplinkModel uplink{};

    bool operator==(const PowerConfig&) const = default;
};

struct CoverageReportConfig {
    std::vector<double> power_dbm{-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0, 25.0, 30.0};
    double candidate_window_db{3.0};

    bool operator==(const CoverageReportConfig&) const = default;
};

struct ScenarioConfig {
    net::NetworkConfig network{};
    DemandConfig demand{};
    OptimizationConfig optimization{};
    SimulationConfig simulation{};
    PowerConfig power{};
    double kappa_cov{0.02};
    sim::LoadInterferenceSettings benchmarks{};
    CoverageReportConfig coverage_report{};

    bool operator==(const ScenarioConfig&) const = default;
};

/// Strict parse: unknown keys and wrong types raise ConfigError. Missing keys take defaults.
ScenarioConfig parse_config(std::string_view json_text);
ScenarioConfig load_config(const std::filesystem::path& path);
/// Complete JSON with every field, stable key order.
std::string to_json_string(const ScenarioConfig& config, int indent = 2);
/// FNV-1a of the compact canonical JSON.
std::string config_hash(const ScenarioConfig& config);

std::string to_string(coupling::IciModel ici);
coupling::IciModel parse_ici(const std::string& text);

}  // namespace cso
