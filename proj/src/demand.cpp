#include "cso/demand.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace cso::demand {

void DemandProfile::validate() const {
    if (gamma.empty()) throw ConfigError("demand distribution is empty");
    double sum = 0.0;
    for (double g : gamma) {
        if (!(g >= 0.0) || !std::isfinite(g)) throw ConfigError("demand distribution has a negative or non-finite entry");
        sum += g;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw ConfigError("demand distribution does not sum to 1");
    if (!(mean_interarrival_s > 0.0)) throw ConfigError("mean inter-arrival time must be positive");
    if (!(mean_session_s > 0.0)) throw ConfigError("mean session time must be positive");
    if (!(min_rate_bps > 0.0)) throw ConfigError("minimum rate must be positive");
}

DemandProfile DemandProfile::scaled(double multiplier) const {
    if (!(multiplier > 0.0)) throw ConfigError("volume multiplier must be positive");
    DemandProfile p = *this;
    p.mean_interarrival_s = mean_interarrival_s / multiplier;
    return p;
}

std::vector<double> pixel_demand(const DemandProfile& profile) {
    const double k = profile.mean_users() * profile.min_rate_bps;
    std::vector<double> r(profile.gamma.size());
    for (std::size_t a = 0; a < r.size(); ++a) r[a] = k * profile.gamma[a];
    return r;
}

double total_demand(const DemandProfile& profile) {
    double sum = 0.0;
    for (double r : pixel_demand(profile)) sum += r;
    return sum;
}

DemandProfile aggregate_services(const std::vector<DemandProfile>& services) {
    if (services.empty()) throw ConfigError("service mix is empty");
    const std::size_t A = services.front().num_pixels();
    std::vector<double> rate(A, 0.0);
    double users = 0.0;
    double user_seconds = 0.0;
    for (const auto& s : services) {
        s.validate();
        if (s.num_pixels() != A) throw DimensionError("service classes cover different pixel grids");
        const auto r = pixel_demand(s);
        for (std::size_t a = 0; a < A; ++a) rate[a] += r[a];
        users += s.mean_users();
        user_seconds += s.mean_users() * s.mean_session_s;
    }
    double total = 0.0;
    for (double r : rate) total += r;
    if (!(total > 0.0)) throw ConfigError("aggregate service demand is zero");

    DemandProfile out;
    out.gamma.resize(A);
    for (std::size_t a = 0; a < A; ++a) out.gamma[a] = rate[a] / total;
    out.mean_session_s = user_seconds / users;
    out.mean_interarrival_s = out.mean_session_s / users;
    out.min_rate_bps = total / users;
    return out;
}

std::vector<double> uniform_gamma(std::size_t num_pixels) {
    if (num_pixels == 0) throw ConfigError("uniform demand needs at least one pixel");
    return std::vector<double>(num_pixels, 1.0 / static_cast<double>(num_pixels));
}

std::vector<double> normalized(std::vector<double> weights) {
    double sum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) throw FormatError("demand weights must be finite and nonnegative");
        sum += w;
    }
    if (!(sum > 0.0)) throw FormatError("demand weights are all zero");
    for (double& w : weights) w /= sum;
    return weights;
}

std::vector<double> hotspot_gamma(std::size_t grid_rows, std::size_t grid_cols, double pixel_size_m,
                                  const HotspotConfig& config) {
    if (grid_rows == 0 || grid_cols == 0) throw ConfigError("demand grid has zero size");
    if (config.background < 0.0 || config.background > 1.0) throw ConfigError("hotspot background must be in [0,1]");
    if (!(config.sigma_min_m > 0.0) || config.sigma_max_m < config.sigma_min_m)
        throw ConfigError("hotspot sigma range is invalid");
    const std::size_t A = grid_rows * grid_cols;
    if (config.count == 0) return uniform_gamma(A);

    const double width = static_cast<double>(grid_cols) * pixel_size_m;
    const double height = static_cast<double>(grid_rows) * pixel_size_m;
    std::mt19937_64 rng(config.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    struct Spot {
        double x, y, sigma, weight;
    };
    std::vector<Spot> spots(config.count);
    double weight_sum = 0.0;
    for (auto& s : spots) {
        s.x = u01(rng) * width;
        s.y = u01(rng) * height;
        s.sigma = config.sigma_min_m + u01(rng) * (config.sigma_max_m - config.sigma_min_m);
        s.weight = 0.25 + u01(rng);
        weight_sum += s.weight;
    }

    // Each hotspot contributes weight/weight_sum of the non-background mass.
    std::vector<double> spot_mass(A, 0.0);
    for (const auto& s : spots) {
        std::vector<double> density(A);
        double sum = 0.0;
        for (std::size_t a = 0; a < A; ++a) {
            const double x = (static_cast<double>(a % grid_cols) + 0.5) * pixel_size_m;
            const double y = (static_cast<double>(a / grid_cols) + 0.5) * pixel_size_m;
            const double d2 = (x - s.x) * (x - s.x) + (y - s.y) * (y - s.y);
            density[a] = std::exp(-0.5 * d2 / (s.sigma * s.sigma));
            sum += density[a];
        }
        for (std::size_t a = 0; a < A; ++a) spot_mass[a] += (s.weight / weight_sum) * density[a] / sum;
    }
    std::vector<double> gamma(A);
    const double uniform = 1.0 / static_cast<double>(A);
    for (std::size_t a = 0; a < A; ++a)
        gamma[a] = config.background * uniform + (1.0 - config.background) * spot_mass[a];
    return normalized(std::move(gamma));
}

double kl_to_uniform(const std::vector<double>& gamma) {
    if (gamma.empty()) return 0.0;
    const double logA = std::log(static_cast<double>(gamma.size()));
    double d = 0.0;
    for (double g : gamma)
        if (g > 0.0) d += g * (std::log(g) + logA);
    return std::max(0.0, d);
}

DemandGrid load_demand_grid(const std::filesystem::path& path, bool normalize) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open demand grid " + path.string());
    DemandGrid grid;
    std::string line;
    if (!std::getline(in, line)) throw FormatError("demand grid " + path.string() + " is empty");
    {
        std::istringstream header(line);
        if (!(header >> grid.rows >> grid.cols) || grid.rows == 0 || grid.cols == 0)
            throw FormatError("demand grid header must be 'rows cols'");
    }
    std::vector<double> w;
    w.reserve(grid.rows * grid.cols);
    for (std::size_t r = 0; r < grid.rows; ++r) {
        if (!std::getline(in, line)) throw FormatError("demand grid ends early at row " + std::to_string(r));
        std::replace(line.begin(), line.end(), ',', ' ');
        std::istringstream row(line);
        double v = 0.0;
        std::size_t c = 0;
        while (row >> v) {
            w.push_back(v);
            ++c;
        }
        if (!row.eof()) throw FormatError("non-numeric value in demand grid row " + std::to_string(r));
        if (c != grid.cols) throw FormatError("demand grid row " + std::to_string(r) + " has wrong column count");
    }
    double sum = 0.0;
    for (double v : w) {
        if (!(v >= 0.0)) throw FormatError("demand grid has a negative weight");
        sum += v;
    }
    if (!normalize && std::abs(sum - 1.0) > 1e-9) throw FormatError("demand grid is not normalized");
    grid.gamma = normalized(std::move(w));
    return grid;
}

void save_demand_grid(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
                      const std::vector<double>& gamma) {
    if (rows * cols != gamma.size()) throw DimensionError("demand grid size mismatch");
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    out << rows << ' ' << cols << '\n';
    char buf[32];
    for (std::size_t r = 0; r < rows; ++r) {
        for (std::size_t c = 0; c < cols; ++c) {
            std::snprintf(buf, sizeof buf, "%.17g", gamma[r * cols + c]);
            if (c) out << ' ';
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace cso::demand
