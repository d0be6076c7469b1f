#pragma once

#include <vector>

#include "cso/common.hpp"
#include "cso/net_model.hpp"

namespace cso::metrics {

/// Load-dependent base-station power: P0 + slope * load when on, P_sleep when off.
struct PowerModel {
    double p0_w{6.8};
    double sleep_w{4.3};
    double slope_w{4.0};
    double max_total_w{10.8};

    /// Throws ConfigError unless sleep <= P0 <= max and P0 + slope == max.
    void validate() const;
    bool operator==(const PowerModel&) const = default;
};

enum class UplinkDomain { Linear, Decibel };

/// Open-loop uplink power estimate P0 + kappa * PL.
struct UplinkModel {
    double p0{0.0};  // watts in the linear domain, dBm in the decibel domain
    double kappa{1.0};
    UplinkDomain domain{UplinkDomain::Linear};

    bool operator==(const UplinkModel&) const = default;
};

/// Full objective record of one topology, as exported in front files.
struct ObjectiveVector {
    double f1{0.0};
    double f2{0.0};
    double f3{0.0};
    double f4{0.0};
    double f5{0.0};
    double f6{0.0};
    bool feasible{false};
    double outage_fraction{1.0};
};

double f1_active_cells(const Topology& topo);

/// B * A * sum_l n(l) * sum_{a in A_l} h(a) * gamma(a).
double f2_avg_capacity(const net::NetworkModel& model, const net::CoverageResult& cov, const std::vector<double>& h,
                       const std::vector<double>& gamma);

/// Per-pixel rate r(a) = A * h(a) * gamma(a) * B * n(serving(a)); zero for outage pixels.
std::vector<double> pixel_rates(const net::NetworkModel& model, const net::CoverageResult& cov,
                                const std::vector<double>& h, const std::vector<double>& gamma);

/// 5th percentile of r over covered pixels (index floor(0.05 * count) of the
/// ascending order, the minimum below 20 covered pixels, 0 with none).
double f3_cell_edge(const net::NetworkModel& model, const net::CoverageResult& cov, const std::vector<double>& h,
                    const std::vector<double>& gamma);

/// Demand-weighted mean uplink power over covered pixels. Throws
/// InfeasibleError when no demand mass is covered.
double f4_uplink_power(const net::NetworkModel& model, const net::CoverageResult& cov,
                       const std::vector<double>& gamma, const UplinkModel& uplink);

double f5_power_consumption(const std::vector<double>& loads, const Topology& topo, const PowerModel& pm);

/// Coefficient of variation (population std / mean) over active cells; 0 if the mean is 0.
double f6_load_dispersion(const std::vector<double>& loads, const Topology& topo);

struct TransitionCost {
    std::size_t transitions{0};
    double handover_mass{0.0};
};

/// Hamming distance and demand mass of pixels covered in both states whose server changes.
TransitionCost transition_cost(const Topology& from, const Topology& to, const net::CoverageResult& cov_from,
                               const net::CoverageResult& cov_to, const std::vector<double>& gamma);

bool coverage_constraint(const net::CoverageResult& cov, double kappa_cov);

}  // namespace cso::metrics
