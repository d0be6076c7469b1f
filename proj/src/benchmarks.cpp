#include "cso/benchmarks.hpp"

#include <algorithm>
#include <numeric>

namespace cso::sim {

double CoverageOracle::outage(const Topology& topo) const {
    {
        std::lock_guard lock(mu_);
        if (auto it = cache_.find(topo); it != cache_.end()) return it->second;
    }
    const double o = net::coverage(*model_, topo).outage_fraction;
    std::lock_guard lock(mu_);
    cache_.emplace(topo, o);
    return o;
}

std::size_t CoverageOracle::size() const {
    std::lock_guard lock(mu_);
    return cache_.size();
}

UserState assess_users(const net::NetworkModel& model, const Topology& topo, std::span<const std::size_t> users,
                       double min_rate_bps) {
    const std::size_t L = model.num_cells();
    const double B = model.radio().bandwidth_hz;
    std::vector<double> weights(L);
    for (std::size_t l = 0; l < L; ++l) weights[l] = topo[l] ? 1.0 : 0.0;

    UserState st;
    st.serving.resize(users.size());
    st.satisfied.assign(users.size(), 0);
    st.cell_load.assign(L, 0.0);
    std::vector<std::vector<std::size_t>> members(L);
    std::vector<double> eff(users.size());
    for (std::size_t i = 0; i < users.size(); ++i) {
        const auto link = user_link(model, topo, weights, users[i]);
        st.serving[i] = link.serving;
        eff[i] = link.efficiency;
        if (link.serving == net::kNoCell) continue;
        const auto l = static_cast<std::size_t>(link.serving);
        members[l].push_back(i);
        st.cell_load[l] += (eff[i] > 0.0 ? std::min(B, min_rate_bps / eff[i]) : B) / B;
    }
    std::vector<double> cell_eff;
    for (std::size_t l = 0; l < L; ++l) {
        if (members[l].empty()) continue;
        cell_eff.clear();
        for (auto i : members[l]) cell_eff.push_back(eff[i]);
        const auto alloc = schedule_cell(cell_eff, B, min_rate_bps);
        for (std::size_t k = 0; k < members[l].size(); ++k) st.satisfied[members[l][k]] = alloc.satisfied[k];
    }
    return st;
}

namespace {

std::vector<std::size_t> by_load(const Topology& topo, const std::vector<double>& load) {
    auto cells = topo.active_cells();
    std::stable_sort(cells.begin(), cells.end(), [&](std::size_t a, std::size_t b) { return load[a] < load[b]; });
    return cells;
}

// Every user of `removed` ends up satisfied and nobody satisfied before loses service.
bool reallocation_succeeds(const UserState& before, const UserState& after, std::size_t removed) {
    for (std::size_t i = 0; i < before.serving.size(); ++i) {
        const bool moved = before.serving[i] == static_cast<std::int32_t>(removed);
        if ((moved || before.satisfied[i]) && !after.satisfied[i]) return false;
    }
    return true;
}

Topology zooming(const net::NetworkModel& model, std::span<const std::size_t> users, double min_rate_bps,
                 const CoverageOracle& oracle, bool continue_after_failure) {
    Topology topo = Topology::all_on(model.num_cells());
    UserState state = assess_users(model, topo, users, min_rate_bps);
    for (;;) {
        bool removed = false;
        for (auto c : by_load(topo, state.cell_load)) {
            Topology next = topo;
            next.set(c, false);
            if (!oracle.feasible(next)) continue;
            UserState next_state = assess_users(model, next, users, min_rate_bps);
            if (reallocation_succeeds(state, next_state, c)) {
                topo = std::move(next);
                state = std::move(next_state);
                removed = true;
                break;
            }
            if (!continue_after_failure) return topo;
        }
        if (!removed) return topo;
    }
}

}  // namespace

Topology cell_zooming(const net::NetworkModel& model, std::span<const std::size_t> users, double min_rate_bps,
                      const CoverageOracle& oracle) {
    return zooming(model, users, min_rate_bps, oracle, false);
}

Topology improved_cell_zooming(const net::NetworkModel& model, std::span<const std::size_t> users,
                               double min_rate_bps, const CoverageOracle& oracle) {
    return zooming(model, users, min_rate_bps, oracle, true);
}

std::vector<double> cell_interference(const net::NetworkModel& model) {
    const std::size_t L = model.num_cells();
    const auto all = Topology::all_on(L);
    const std::vector<double> weights(L, 1.0);
    std::vector<double> sum(L, 0.0);
    std::vector<double> count(L, 0.0);
    for (std::size_t a = 0; a < model.num_pixels(); ++a) {
        const auto s = static_cast<std::size_t>(net::best_server(model, all, a));
        sum[s] += net::interference_at(model.data_rx().row(a), weights, s);
        count[s] += 1.0;
    }
    for (std::size_t l = 0; l < L; ++l) sum[l] = count[l] > 0.0 ? sum[l] / count[l] : 0.0;
    return sum;
}

Topology load_interference_aware(const net::NetworkModel& model, std::span<const std::size_t> users,
                                 double min_rate_bps, const CoverageOracle& oracle,
                                 const std::vector<double>& interference, const LoadInterferenceSettings& settings) {
    const std::size_t L = model.num_cells();
    if (interference.size() != L) throw DimensionError("one interference value per cell is required");
    Topology topo = Topology::all_on(L);
    const auto state = assess_users(model, topo, users, min_rate_bps);
    const double max_i = *std::max_element(interference.begin(), interference.end());
    std::vector<double> score(L);
    for (std::size_t l = 0; l < L; ++l)
        score[l] = state.cell_load[l] + settings.interference_weight * (max_i > 0.0 ? interference[l] / max_i : 0.0);
    std::vector<std::size_t> order;
    for (std::size_t l = 0; l < L; ++l)
        if (state.cell_load[l] < settings.load_threshold) order.push_back(l);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return score[a] < score[b]; });
    for (auto c : order) {
        Topology next = topo;
        next.set(c, false);
        if (oracle.feasible(next)) topo = std::move(next);
    }
    return topo;
}

Topology set_cover(const net::NetworkModel& model, std::span<const std::size_t> users, double min_rate_bps,
                   const CoverageOracle& oracle) {
    const std::size_t L = model.num_cells();
    const auto& radio = model.radio();
    const double B = radio.bandwidth_hz;

    // SNR-regime candidate cells per user.
    std::vector<std::vector<std::pair<std::size_t, double>>> servable(L);  // cell -> (user, efficiency)
    for (std::size_t i = 0; i < users.size(); ++i) {
        const std::size_t a = users[i];
        for (std::size_t l = 0; l < L; ++l) {
            if (model.pilot_rx(a, l) <= radio.min_rx_power_w) continue;
            if (1.0 / model.gain()(a, l) >= radio.max_ul_attenuation) continue;
            const double snr = model.data_rx()(a, l) / radio.noise_w;
            if (snr <= radio.min_sinr) continue;
            servable[l].emplace_back(i, std::log2(1.0 + snr));
        }
    }
    for (auto& s : servable)
        std::stable_sort(s.begin(), s.end(), [](const auto& x, const auto& y) { return x.second > y.second; });

    Topology topo(L);
    std::vector<std::uint8_t> served(users.size(), 0);
    auto fit = [&](std::size_t l, std::vector<std::size_t>* picked) {
        double used = 0.0;
        std::size_t n = 0;
        for (const auto& [i, eff] : servable[l]) {
            if (served[i]) continue;
            const double need = min_rate_bps / eff;
            if (used + need > B) break;
            used += need;
            ++n;
            if (picked) picked->push_back(i);
        }
        return n;
    };
    for (;;) {
        std::size_t best = L;
        std::size_t best_count = 0;
        for (std::size_t l = 0; l < L; ++l) {
            if (topo[l]) continue;
            const std::size_t n = fit(l, nullptr);
            if (n > best_count) {
                best = l;
                best_count = n;
            }
        }
        if (best == L) break;
        std::vector<std::size_t> picked;
        fit(best, &picked);
        for (auto i : picked) served[i] = 1;
        topo.set(best, true);
    }

    // Coverage floor.
    while (!oracle.feasible(topo)) {
        std::size_t best = L;
        double best_outage = 2.0;
        for (std::size_t l = 0; l < L; ++l) {
            if (topo[l]) continue;
            Topology next = topo;
            next.set(l, true);
            const double o = oracle.outage(next);
            if (o < best_outage) {
                best = l;
                best_outage = o;
            }
        }
        if (best == L) break;
        topo.set(best, true);
    }
    return topo;
}

std::string to_string(Benchmark b) {
    switch (b) {
        case Benchmark::CellZooming: return "cell_zooming";
        case Benchmark::ImprovedCellZooming: return "improved_cell_zooming";
        case Benchmark::LoadInterferenceAware: return "load_interference_aware";
        case Benchmark::SetCover: return "set_cover";
    }
    return "?";
}

std::vector<Benchmark> all_benchmarks() {
    return {Benchmark::CellZooming, Benchmark::ImprovedCellZooming, Benchmark::LoadInterferenceAware,
            Benchmark::SetCover};
}

Policy benchmark_policy(Benchmark b, const net::NetworkModel& model, std::shared_ptr<const CoverageOracle> oracle,
                        const LoadInterferenceSettings& lia) {
    const auto* m = &model;
    switch (b) {
        case Benchmark::CellZooming:
            return [m, oracle](const Snapshot& s) {
                return cell_zooming(*m, s.user_pixels, s.profile->min_rate_bps, *oracle);
            };
        case Benchmark::ImprovedCellZooming:
            return [m, oracle](const Snapshot& s) {
                return improved_cell_zooming(*m, s.user_pixels, s.profile->min_rate_bps, *oracle);
            };
        case Benchmark::LoadInterferenceAware: {
            auto interference = std::make_shared<const std::vector<double>>(cell_interference(model));
            return [m, oracle, interference, lia](const Snapshot& s) {
                return load_interference_aware(*m, s.user_pixels, s.profile->min_rate_bps, *oracle, *interference,
                                               lia);
            };
        }
        case Benchmark::SetCover:
            return [m, oracle](const Snapshot& s) {
                return set_cover(*m, s.user_pixels, s.profile->min_rate_bps, *oracle);
            };
    }
    throw ConfigError("unknown benchmark");
}

}  // namespace cso::sim
