#include "cso/metrics.hpp"

#include <algorithm>

namespace cso::metrics {

void PowerModel::validate() const {
    if (!(sleep_w >= 0.0) || !(slope_w >= 0.0)) throw ConfigError("power model values must be nonnegative");
    if (!(sleep_w <= p0_w && p0_w <= max_total_w)) throw ConfigError("power model needs sleep <= P0 <= P_max");
    if (std::abs(p0_w + slope_w - max_total_w) > 1e-9 * max_total_w)
        throw ConfigError("power model needs P0 + slope == P_max");
}

double f1_active_cells(const Topology& topo) { return static_cast<double>(topo.active_count()); }

namespace {
void check_sizes(const net::CoverageResult& cov, const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() != cov.num_pixels() || b.size() != cov.num_pixels()) throw DimensionError("metric input size mismatch");
}
}  // namespace

double f2_avg_capacity(const net::NetworkModel& model, const net::CoverageResult& cov, const std::vector<double>& h,
                       const std::vector<double>& gamma) {
    check_sizes(cov, h, gamma);
    std::vector<double> per_cell(model.num_cells(), 0.0);
    for (std::size_t a = 0; a < cov.num_pixels(); ++a)
        if (cov.covered(a)) per_cell[static_cast<std::size_t>(cov.serving[a])] += h[a] * gamma[a];
    double sum = 0.0;
    for (std::size_t l = 0; l < per_cell.size(); ++l) sum += cov.inverse_size[l] * per_cell[l];
    return model.radio().bandwidth_hz * static_cast<double>(cov.num_pixels()) * sum;
}

std::vector<double> pixel_rates(const net::NetworkModel& model, const net::CoverageResult& cov,
                                const std::vector<double>& h, const std::vector<double>& gamma) {
    check_sizes(cov, h, gamma);
    const double k = static_cast<double>(cov.num_pixels()) * model.radio().bandwidth_hz;
    std::vector<double> r(cov.num_pixels(), 0.0);
    for (std::size_t a = 0; a < r.size(); ++a)
        if (cov.covered(a)) r[a] = k * h[a] * gamma[a] * cov.inverse_size[static_cast<std::size_t>(cov.serving[a])];
    return r;
}

double f3_cell_edge(const net::NetworkModel& model, const net::CoverageResult& cov, const std::vector<double>& h,
                    const std::vector<double>& gamma) {
    const auto r = pixel_rates(model, cov, h, gamma);
    std::vector<double> covered;
    covered.reserve(r.size());
    for (std::size_t a = 0; a < r.size(); ++a)
        if (cov.covered(a)) covered.push_back(r[a]);
    if (covered.empty()) return 0.0;
    if (covered.size() < 20) return *std::min_element(covered.begin(), covered.end());
    const auto k = static_cast<std::size_t>(0.05 * static_cast<double>(covered.size()));
    std::nth_element(covered.begin(), covered.begin() + static_cast<std::ptrdiff_t>(k), covered.end());
    return covered[k];
}

double f4_uplink_power(const net::NetworkModel& model, const net::CoverageResult& cov,
                       const std::vector<double>& gamma, const UplinkModel& uplink) {
    if (gamma.size() != cov.num_pixels()) throw DimensionError("f4: demand size mismatch");
    double mass = 0.0;
    double sum = 0.0;
    for (std::size_t a = 0; a < cov.num_pixels(); ++a) {
        if (!cov.covered(a) || gamma[a] == 0.0) continue;
        const double g = model.gain()(a, static_cast<std::size_t>(cov.serving[a]));
        const double pl = uplink.domain == UplinkDomain::Linear ? 1.0 / g : -linear_to_db(g);
        sum += gamma[a] * (uplink.p0 + uplink.kappa * pl);
        mass += gamma[a];
    }
    if (!(mass > 0.0)) throw InfeasibleError("uplink power undefined: no demand mass is covered");
    return sum / mass;
}

double f5_power_consumption(const std::vector<double>& loads, const Topology& topo, const PowerModel& pm) {
    if (loads.size() != topo.size()) throw DimensionError("f5: size mismatch");
    double p = 0.0;
    for (std::size_t l = 0; l < topo.size(); ++l) p += topo[l] ? pm.p0_w + pm.slope_w * loads[l] : pm.sleep_w;
    return p;
}

double f6_load_dispersion(const std::vector<double>& loads, const Topology& topo) {
    if (loads.size() != topo.size()) throw DimensionError("f6: size mismatch");
    double n = 0.0;
    double mean = 0.0;
    for (std::size_t l = 0; l < topo.size(); ++l) {
        if (!topo[l]) continue;
        n += 1.0;
        mean += loads[l];
    }
    if (n == 0.0) return 0.0;
    mean /= n;
    if (mean == 0.0) return 0.0;
    double var = 0.0;
    for (std::size_t l = 0; l < topo.size(); ++l)
        if (topo[l]) var += (loads[l] - mean) * (loads[l] - mean);
    return std::sqrt(var / n) / mean;
}

TransitionCost transition_cost(const Topology& from, const Topology& to, const net::CoverageResult& cov_from,
                               const net::CoverageResult& cov_to, const std::vector<double>& gamma) {
    if (cov_from.num_pixels() != cov_to.num_pixels() || gamma.size() != cov_to.num_pixels())
        throw DimensionError("transition_cost: size mismatch");
    TransitionCost c;
    c.transitions = hamming_distance(from, to);
    for (std::size_t a = 0; a < gamma.size(); ++a)
        if (cov_from.covered(a) && cov_to.covered(a) && cov_from.serving[a] != cov_to.serving[a])
            c.handover_mass += gamma[a];
    return c;
}

bool coverage_constraint(const net::CoverageResult& cov, double kappa_cov) {
    return cov.outage_fraction <= kappa_cov;
}

}  // namespace cso::metrics
