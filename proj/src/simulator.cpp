#include "cso/simulator.hpp"

#include <algorithm>
#include <limits>
#include <numeric>
#include <random>

#include "cso/parallel.hpp"

namespace cso::sim {

void SimConfig::validate() const {
    if (!(duration_s > 0.0)) throw ConfigError("simulation duration must be positive");
    if (num_experiments == 0) throw ConfigError("at least one experiment is required");
    if (!(qos_check_interval_s > 0.0)) throw ConfigError("QoS check interval must be positive");
    if (!(target_qos > 0.0 && target_qos <= 1.0)) throw ConfigError("target QoS must be in (0,1]");
    if (!(volume_multiplier >= 0.0) || !std::isfinite(volume_multiplier))
        throw ConfigError("volume multiplier must be finite and nonnegative");
}

DemandSchedule DemandSchedule::constant(demand::DemandProfile profile) {
    DemandSchedule s;
    s.phases.push_back({0.0, std::move(profile)});
    return s;
}

std::size_t DemandSchedule::phase_at(double t) const {
    std::size_t p = 0;
    while (p + 1 < phases.size() && phases[p + 1].start_s <= t) ++p;
    return p;
}

void DemandSchedule::validate(std::size_t num_pixels) const {
    if (phases.empty()) throw ConfigError("demand schedule has no phases");
    if (phases.front().start_s != 0.0) throw ConfigError("first demand phase must start at 0");
    for (std::size_t i = 0; i < phases.size(); ++i) {
        phases[i].profile.validate();
        if (phases[i].profile.num_pixels() != num_pixels) throw DimensionError("demand phase does not match the grid");
        if (i > 0 && !(phases[i].start_s > phases[i - 1].start_s))
            throw ConfigError("demand phases must start in increasing order");
    }
}

Policy static_policy(Topology topo) {
    return [topo = std::move(topo)](const Snapshot&) { return topo; };
}

Allocation schedule_cell(std::span<const double> spectral_efficiency, double bandwidth_hz, double min_rate_bps) {
    Allocation out;
    out.satisfied.assign(spectral_efficiency.size(), 0);
    std::vector<std::size_t> order(spectral_efficiency.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return spectral_efficiency[a] > spectral_efficiency[b];
    });
    double remaining = std::max(0.0, bandwidth_hz);
    for (auto u : order) {
        const double gamma = spectral_efficiency[u];
        if (!(gamma > 0.0)) continue;
        const double need = min_rate_bps / gamma;
        if (need > remaining) break;
        remaining -= need;
        out.used_bandwidth_hz += need;
        out.satisfied[u] = 1;
    }
    return out;
}

UserLink user_link(const net::NetworkModel& model, const Topology& topo, std::span<const double> weights,
                   std::size_t pixel) {
    UserLink link;
    link.serving = net::best_server(model, topo, pixel);
    if (link.serving == net::kNoCell) return link;
    const auto s = static_cast<std::size_t>(link.serving);
    const auto& radio = model.radio();
    if (model.pilot_rx(pixel, s) <= radio.min_rx_power_w || 1.0 / model.gain()(pixel, s) >= radio.max_ul_attenuation)
        return link;
    const auto row = model.data_rx().row(pixel);
    const double psi = row[s] / (net::interference_at(row, weights, s) + radio.noise_w);
    if (psi <= radio.min_sinr) return link;
    link.efficiency = std::log2(1.0 + psi);
    return link;
}

namespace {

std::uint64_t mix(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    std::uint32_t words[2];
    seq.generate(words, words + 2);
    return (std::uint64_t{words[0]} << 32) | words[1];
}

struct PhaseSampler {
    double rate{0.0};  // arrivals per second
    double mean_session_s{1.0};
    std::discrete_distribution<std::size_t> pixel;
};

}  // namespace

ExperimentReport run_experiment(const net::NetworkModel& model, const DemandSchedule& schedule, const Policy& policy,
                                const SimConfig& config, const metrics::PowerModel& power, std::size_t index) {
    config.validate();
    schedule.validate(model.num_pixels());
    const std::size_t L = model.num_cells();
    const double B = model.radio().bandwidth_hz;
    std::mt19937_64 rng(mix(config.seed, index));
    std::uniform_real_distribution<double> u01(0.0, 1.0);

    std::vector<PhaseSampler> phases;
    double max_rate = 0.0;
    for (const auto& p : schedule.phases) {
        PhaseSampler s;
        s.rate = config.volume_multiplier / p.profile.mean_interarrival_s;
        s.mean_session_s = p.profile.mean_session_s;
        s.pixel = std::discrete_distribution<std::size_t>(p.profile.gamma.begin(), p.profile.gamma.end());
        max_rate = std::max(max_rate, s.rate);
        phases.push_back(std::move(s));
    }
    auto session = [&](double mean) { return std::exponential_distribution<double>(1.0 / mean)(rng); };

    ExperimentReport rep;
    std::vector<UserSession> users;
    // Start in steady state: the number of sessions in progress is Poisson with
    // mean rate * E{mu}, and residual session times are again exponential.
    {
        auto& p0 = phases.front();
        const double mean_users = p0.rate * p0.mean_session_s;
        if (mean_users > 0.0) {
            const auto n0 = std::poisson_distribution<std::size_t>(mean_users)(rng);
            for (std::size_t i = 0; i < n0; ++i) {
                const std::size_t pixel = p0.pixel(rng);
                users.push_back({pixel, 0.0, session(p0.mean_session_s)});
            }
        }
    }
    double next_arrival = std::numeric_limits<double>::infinity();
    if (max_rate > 0.0) next_arrival = std::exponential_distribution<double>(max_rate)(rng);

    std::vector<std::size_t> pixels;
    auto snapshot_at = [&](double t, const Topology& current) {
        pixels.clear();
        for (const auto& u : users) pixels.push_back(u.pixel);
        return Snapshot{t, pixels, &schedule.phases[schedule.phase_at(t)].profile, &current};
    };

    const Topology none(L);
    Topology current = policy(snapshot_at(0.0, none));
    if (current.size() != L) throw DimensionError("policy returned a topology of the wrong size");
    net::CoverageResult current_cov = net::coverage(model, current);
    std::vector<double> utilization(L, 0.0);
    for (std::size_t l = 0; l < L; ++l) utilization[l] = current[l] ? 1.0 : 0.0;

    const auto checks = static_cast<std::size_t>(std::floor(config.duration_s / config.qos_check_interval_s + 1e-9));
    rep.trace.reserve(checks);
    std::vector<double> weights(L);
    std::vector<UserLink> links;
    std::vector<std::vector<std::size_t>> per_cell(L);
    std::vector<double> eff;
    double sat_sum = 0.0, nac_sum = 0.0, power_sum = 0.0;
    std::size_t passes = 0;

    for (std::size_t k = 1; k <= checks; ++k) {
        const double t = static_cast<double>(k) * config.qos_check_interval_s;
        while (next_arrival <= t) {
            auto& ph = phases[schedule.phase_at(next_arrival)];
            if (u01(rng) * max_rate < ph.rate) {
                const std::size_t pixel = ph.pixel(rng);
                users.push_back({pixel, next_arrival, next_arrival + session(ph.mean_session_s)});
                ++rep.arrivals;
            }
            next_arrival += std::exponential_distribution<double>(max_rate)(rng);
        }
        std::erase_if(users, [t](const UserSession& u) { return u.departure_s <= t; });

        const auto& profile = schedule.phases[schedule.phase_at(t)].profile;
        Topology next = policy(snapshot_at(t, current));
        if (next.size() != L) throw DimensionError("policy returned a topology of the wrong size");
        if (next != current) {
            auto next_cov = net::coverage(model, next);
            const auto cost = metrics::transition_cost(current, next, current_cov, next_cov, profile.gamma);
            rep.transitions += cost.transitions;
            rep.handover_mass += cost.handover_mass;
            for (const auto& u : users) {
                const auto before = net::best_server(model, current, u.pixel);
                const auto after = net::best_server(model, next, u.pixel);
                if (before != net::kNoCell && after != net::kNoCell && before != after) ++rep.handovers;
            }
            for (std::size_t l = 0; l < L; ++l)
                if (next[l] && !current[l]) utilization[l] = 1.0;
            current = std::move(next);
            current_cov = std::move(next_cov);
        }

        for (std::size_t l = 0; l < L; ++l) {
            const double w = config.ici == coupling::IciModel::FullLoad ? 1.0 : utilization[l];
            weights[l] = current[l] ? w : 0.0;
        }
        links.resize(users.size());
        for (auto& c : per_cell) c.clear();
        for (std::size_t i = 0; i < users.size(); ++i) {
            links[i] = user_link(model, current, weights, users[i].pixel);
            if (links[i].serving != net::kNoCell) per_cell[static_cast<std::size_t>(links[i].serving)].push_back(i);
        }
        std::size_t satisfied = 0;
        for (std::size_t l = 0; l < L; ++l) {
            utilization[l] = 0.0;
            if (per_cell[l].empty()) continue;
            eff.clear();
            for (auto i : per_cell[l]) eff.push_back(links[i].efficiency);
            const auto alloc = schedule_cell(eff, B, profile.min_rate_bps);
            for (auto s : alloc.satisfied) satisfied += s;
            utilization[l] = std::min(1.0, alloc.used_bandwidth_hz / B);
        }

        CheckRecord rec;
        rec.time_s = t;
        rec.users = users.size();
        rec.satisfied = satisfied;
        rec.satisfied_fraction = users.empty() ? 1.0 : static_cast<double>(satisfied) / static_cast<double>(users.size());
        rec.nac = current.active_count();
        rec.transitions = rep.transitions;
        rec.handovers = rep.handovers;
        rec.handover_mass = rep.handover_mass;
        rec.power_w = metrics::f5_power_consumption(utilization, current, power);
        sat_sum += rec.satisfied_fraction;
        nac_sum += static_cast<double>(rec.nac);
        power_sum += rec.power_w;
        passes += rec.satisfied_fraction >= config.target_qos;
        rep.trace.push_back(rec);
    }
    if (checks > 0) {
        const double n = static_cast<double>(checks);
        rep.mean_satisfied = sat_sum / n;
        rep.qos_pass_fraction = static_cast<double>(passes) / n;
        rep.mean_nac = nac_sum / n;
        rep.mean_power_w = power_sum / n;
    }
    return rep;
}

SimReport run_simulation(const net::NetworkModel& model, const DemandSchedule& schedule, const Policy& policy,
                         const SimConfig& config, const metrics::PowerModel& power) {
    config.validate();
    SimReport rep;
    rep.experiments.resize(config.num_experiments);
    parallel_for(config.num_experiments, config.threads, [&](std::size_t i) {
        rep.experiments[i] = run_experiment(model, schedule, policy, config, power, i);
    });
    const double n = static_cast<double>(config.num_experiments);
    rep.mean_satisfied = rep.qos_pass_fraction = 0.0;
    for (const auto& e : rep.experiments) {
        rep.mean_satisfied += e.mean_satisfied / n;
        rep.qos_pass_fraction += e.qos_pass_fraction / n;
        rep.mean_nac += e.mean_nac / n;
        rep.transitions += static_cast<double>(e.transitions) / n;
        rep.handovers += static_cast<double>(e.handovers) / n;
        rep.handover_mass += e.handover_mass / n;
        rep.mean_power_w += e.mean_power_w / n;
    }
    rep.qos_pass = rep.qos_pass_fraction >= config.target_qos;
    return rep;
}

namespace {
std::vector<std::size_t> selection_order(const std::vector<Candidate>& candidates, SelectionCriterion criterion) {
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return criterion == SelectionCriterion::MinActiveCells ? candidates[a].f1 < candidates[b].f1
                                                               : candidates[a].f5 < candidates[b].f5;
    });
    return order;
}
}  // namespace

Topology select_topology(const std::vector<Candidate>& candidates, const std::vector<double>& qos_pass_fraction,
                         double target_qos, SelectionCriterion criterion) {
    if (candidates.empty()) throw ConfigError("cannot select from an empty topology set");
    if (qos_pass_fraction.size() != candidates.size()) throw DimensionError("one QoS value per candidate is required");
    for (auto i : selection_order(candidates, criterion))
        if (qos_pass_fraction[i] >= target_qos) return candidates[i].topo;
    return Topology::all_on(candidates.front().topo.size());
}

SelectionResult select_by_simulation(const net::NetworkModel& model, const DemandSchedule& schedule,
                                     const std::vector<Candidate>& candidates, const SimConfig& config,
                                     const metrics::PowerModel& power, SelectionCriterion criterion) {
    if (candidates.empty()) throw ConfigError("cannot select from an empty topology set");
    SelectionResult out;
    out.qos_pass_fraction.assign(candidates.size(), std::numeric_limits<double>::quiet_NaN());
    for (auto i : selection_order(candidates, criterion)) {
        const auto rep = run_simulation(model, schedule, static_policy(candidates[i].topo), config, power);
        out.qos_pass_fraction[i] = rep.qos_pass_fraction;
        if (rep.qos_pass_fraction >= config.target_qos) {
            out.topo = candidates[i].topo;
            out.index = i;
            return out;
        }
    }
    out.topo = Topology::all_on(model.num_cells());
    out.index = candidates.size();
    return out;
}

}  // namespace cso::sim
