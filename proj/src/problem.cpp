#include "cso/problem.hpp"

#include <limits>

namespace cso {

std::array<Sense, 2> senses_of(ObjectivePair pair) {
    switch (pair) {
        case ObjectivePair::F1F2:
        case ObjectivePair::F1F3:
            return {Sense::Minimize, Sense::Maximize};
        case ObjectivePair::F1F4:
        case ObjectivePair::F5F6:
            return {Sense::Minimize, Sense::Minimize};
    }
    return {Sense::Minimize, Sense::Minimize};
}

std::string to_string(ObjectivePair pair) {
    switch (pair) {
        case ObjectivePair::F1F2: return "f1f2";
        case ObjectivePair::F1F3: return "f1f3";
        case ObjectivePair::F1F4: return "f1f4";
        case ObjectivePair::F5F6: return "f5f6";
    }
    return "?";
}

ObjectivePair parse_objective_pair(const std::string& text) {
    if (text == "f1f2") return ObjectivePair::F1F2;
    if (text == "f1f3") return ObjectivePair::F1F3;
    if (text == "f1f4") return ObjectivePair::F1F4;
    if (text == "f5f6") return ObjectivePair::F5F6;
    throw ConfigError("unknown objective pair '" + text + "' (expected f1f2, f1f3, f1f4 or f5f6)");
}

Problem::Problem(const net::NetworkModel& model, demand::DemandProfile profile, ProblemSettings settings)
    : model_(&model), profile_(std::move(profile)), settings_(settings) {
    if (profile_.gamma.size() != model.num_pixels()) throw DimensionError("demand grid does not match the network");
    profile_.validate();
    if (settings_.kappa_cov < 0.0 || settings_.kappa_cov > 1.0) throw ConfigError("kappa_cov must be in [0,1]");
    if (settings_.uplink.kappa < 0.0 || settings_.uplink.kappa > 1.0) throw ConfigError("kappa_ul must be in [0,1]");
    settings_.power.validate();
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct LoadState {
    std::vector<double> loads;
    net::CoverageResult cov;
    bool converged{true};
};

LoadState load_coupled_state(const net::NetworkModel& model, const Topology& topo,
                             const demand::DemandProfile& profile, const coupling::SolveOptions& options) {
    LoadState s;
    try {
        s.loads = coupling::solve_loads(model, topo, profile, options).loads.load;
    } catch (const coupling::NonConvergenceError& e) {
        s.loads = e.last_iterate.load;
        s.converged = false;
    }
    s.cov = net::coverage(model, topo, s.loads);
    return s;
}

double uplink_or_inf(const net::NetworkModel& model, const net::CoverageResult& cov, const std::vector<double>& gamma,
                     const metrics::UplinkModel& uplink) {
    try {
        return metrics::f4_uplink_power(model, cov, gamma, uplink);
    } catch (const InfeasibleError&) {
        return kInf;
    }
}

}  // namespace

Evaluation Problem::evaluate(const Topology& topo) const {
    if (topo.size() != num_cells()) throw DimensionError("topology size does not match the network");
    Evaluation e;
    const auto& gamma = profile_.gamma;
    if (settings_.pair == ObjectivePair::F5F6) {
        const double L = static_cast<double>(num_cells());
        if (topo.none()) {
            e.objectives = {L * settings_.power.sleep_w, 0.0};
            return e;
        }
        const auto s = load_coupled_state(*model_, topo, profile_, settings_.solve);
        e.outage_fraction = s.cov.outage_fraction;
        e.feasible = s.converged && metrics::coverage_constraint(s.cov, settings_.kappa_cov);
        e.objectives = {metrics::f5_power_consumption(s.loads, topo, settings_.power),
                        metrics::f6_load_dispersion(s.loads, topo)};
        return e;
    }

    const auto cov = net::coverage(*model_, topo);
    e.outage_fraction = cov.outage_fraction;
    e.feasible = !topo.none() && metrics::coverage_constraint(cov, settings_.kappa_cov);
    const double f1 = metrics::f1_active_cells(topo);
    switch (settings_.pair) {
        case ObjectivePair::F1F2:
            e.objectives = {f1, metrics::f2_avg_capacity(*model_, cov, net::spectral_efficiency(cov.sinr, cov.outage),
                                                         gamma)};
            break;
        case ObjectivePair::F1F3:
            e.objectives = {f1, metrics::f3_cell_edge(*model_, cov, net::spectral_efficiency(cov.sinr, cov.outage),
                                                      gamma)};
            break;
        case ObjectivePair::F1F4:
            e.objectives = {f1, uplink_or_inf(*model_, cov, gamma, settings_.uplink)};
            break;
        case ObjectivePair::F5F6:
            break;
    }
    return e;
}

metrics::ObjectiveVector Problem::objectives(const Topology& topo) const {
    if (topo.size() != num_cells()) throw DimensionError("topology size does not match the network");
    metrics::ObjectiveVector v;
    const auto& gamma = profile_.gamma;
    const auto cov = net::coverage(*model_, topo);
    const auto h = net::spectral_efficiency(cov.sinr, cov.outage);
    v.f1 = metrics::f1_active_cells(topo);
    v.f2 = metrics::f2_avg_capacity(*model_, cov, h, gamma);
    v.f3 = metrics::f3_cell_edge(*model_, cov, h, gamma);
    v.f4 = uplink_or_inf(*model_, cov, gamma, settings_.uplink);
    v.outage_fraction = cov.outage_fraction;
    v.feasible = !topo.none() && metrics::coverage_constraint(cov, settings_.kappa_cov);
    if (topo.none()) {
        v.f5 = static_cast<double>(num_cells()) * settings_.power.sleep_w;
        return v;
    }
    const auto s = load_coupled_state(*model_, topo, profile_, settings_.solve);
    v.f5 = metrics::f5_power_consumption(s.loads, topo, settings_.power);
    v.f6 = metrics::f6_load_dispersion(s.loads, topo);
    if (settings_.pair == ObjectivePair::F5F6) {
        v.outage_fraction = s.cov.outage_fraction;
        v.feasible = s.converged && metrics::coverage_constraint(s.cov, settings_.kappa_cov);
    }
    return v;
}

ProblemView Problem::view() const {
    return {num_cells(), senses(), [this](const Topology& t) { return evaluate(t); }};
}

}  // namespace cso
