#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "cso/coupling.hpp"
#include "cso/demand.hpp"
#include "cso/metrics.hpp"
#include "cso/net_model.hpp"

namespace cso::sim {

struct SimConfig {
    double duration_s{5400.0};
    std::size_t num_experiments{100};
    double qos_check_interval_s{1.0};
    double target_qos{0.975};
    std::uint64_t seed{1};
    coupling::IciModel ici{coupling::IciModel::FullLoad};
    double volume_multiplier{1.0};  // applied to every phase's arrival rate
    std::size_t threads{1};

    void validate() const;
};

/// Demand in effect from `start_s` until the next phase starts.
struct Phase {
    double start_s{0.0};
    demand::DemandProfile profile;
};

/// Piecewise-constant demand over the run; the first phase starts at 0.
struct DemandSchedule {
    std::vector<Phase> phases;

    static DemandSchedule constant(demand::DemandProfile profile);
    std::size_t phase_at(double t) const;
    void validate(std::size_t num_pixels) const;
};

struct UserSession {
    std::size_t pixel{0};
    double arrival_s{0.0};
    double departure_s{0.0};
};

/// What a topology policy sees at a QoS check.
struct Snapshot {
    double time_s{0.0};
    std::span<const std::size_t> user_pixels;
    const demand::DemandProfile* profile{nullptr};  // phase in effect
    const Topology* current{nullptr};               // topology before this check
};

/// Called at every QoS check; returns the topology to apply. Must be thread-safe.
using Policy = std::function<Topology(const Snapshot&)>;

Policy static_policy(Topology topo);

struct Allocation {
    std::vector<std::uint8_t> satisfied;  // per user, input order
    double used_bandwidth_hz{0.0};
};

/// Serves users in descending spectral efficiency with b_u = r_min / gamma
/// until the next user no longer fits. Users with gamma = 0 are skipped and
/// left unsatisfied.
Allocation schedule_cell(std::span<const double> spectral_efficiency, double bandwidth_hz, double min_rate_bps);

struct CheckRecord {
    double time_s{0.0};
    std::size_t users{0};
    std::size_t satisfied{0};
    double satisfied_fraction{1.0};
    std::size_t nac{0};
    std::size_t transitions{0};  // cumulative
    std::size_t handovers{0};    // cumulative
    double handover_mass{0.0};   // cumulative
    double power_w{0.0};
};

struct ExperimentReport {
    std::vector<CheckRecord> trace;
    std::size_t arrivals{0};
    double mean_satisfied{1.0};
    double qos_pass_fraction{1.0};  // share of checks with satisfied fraction >= Q
    double mean_nac{0.0};
    std::size_t transitions{0};
    std::size_t handovers{0};
    double handover_mass{0.0};
    double mean_power_w{0.0};
};

struct SimReport {
    std::vector<ExperimentReport> experiments;
    double mean_satisfied{1.0};
    double qos_pass_fraction{1.0};
    bool qos_pass{true};  // qos_pass_fraction >= Q
    double mean_nac{0.0};
    double transitions{0.0};    // mean per experiment
    double handovers{0.0};      // mean per experiment
    double handover_mass{0.0};  // mean per experiment
    double mean_power_w{0.0};
};

/// Per-user spectral efficiency under `topo`: strongest active pilot, zero in
/// outage, interferers weighted by `weights` (zero for off cells).
struct UserLink {
    std::int32_t serving{net::kNoCell};
    double efficiency{0.0};
};
UserLink user_link(const net::NetworkModel& model, const Topology& topo, std::span<const double> weights,
                   std::size_t pixel);

/// One Monte-Carlo run; experiment `index` draws from its own seeded stream.
ExperimentReport run_experiment(const net::NetworkModel& model, const DemandSchedule& schedule, const Policy& policy,
                                const SimConfig& config, const metrics::PowerModel& power, std::size_t index);

/// config.num_experiments runs (in parallel up to config.threads) and their aggregate.
SimReport run_simulation(const net::NetworkModel& model, const DemandSchedule& schedule, const Policy& policy,
                         const SimConfig& config, const metrics::PowerModel& power);

enum class SelectionCriterion { MinActiveCells, MinPower };

struct Candidate {
    Topology topo;
    double f1{0.0};
    double f5{0.0};
};

/// First candidate in ascending criterion order whose QoS pass fraction is
/// >= Q; all-on when none passes. `qos_pass_fraction[i]` belongs to `candidates[i]`.
Topology select_topology(const std::vector<Candidate>& candidates, const std::vector<double>& qos_pass_fraction,
                         double target_qos, SelectionCriterion criterion = SelectionCriterion::MinActiveCells);

struct SelectionResult {
    Topology topo;
    std::size_t index{0};  // into candidates; == candidates.size() for the all-on fallback
    std::vector<double> qos_pass_fraction;  // simulated members only, NaN for skipped
};

/// Simulates candidates in ascending criterion order and stops at the first that passes.
SelectionResult select_by_simulation(const net::NetworkModel& model, const DemandSchedule& schedule,
                                     const std::vector<Candidate>& candidates, const SimConfig& config,
                                     const metrics::PowerModel& power,
                                     SelectionCriterion criterion = SelectionCriterion::MinActiveCells);

}  // namespace cso::sim
