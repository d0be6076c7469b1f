#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "cso/common.hpp"

namespace cso::demand {

/// Spatial demand distribution plus the traffic parameters that set its volume.
struct DemandProfile {
    std::vector<double> gamma;          // per pixel, sums to 1
    double mean_interarrival_s{0.115};  // E{lambda}
    double mean_session_s{119.2};       // E{mu}
    double min_rate_bps{400e3};         // r_min

    std::size_t num_pixels() const { return gamma.size(); }
    /// Average number of simultaneous sessions, E{mu}/E{lambda}.
    double mean_users() const { return mean_session_s / mean_interarrival_s; }
    /// Throws ConfigError when a field is out of range or gamma is not normalized.
    void validate() const;
    /// Same distribution with the arrival rate multiplied by `multiplier`.
    DemandProfile scaled(double multiplier) const;
};

/// r_a = (E{mu}/E{lambda}) * gamma(a) * r_min.
std::vector<double> pixel_demand(const DemandProfile& profile);
/// R = sum_a r_a.
double total_demand(const DemandProfile& profile);

/// Folds several service classes into one profile with the same per-pixel
/// demand. The equivalent keeps the total number of sessions and the mean
/// session time; r_min becomes the per-session average rate.
DemandProfile aggregate_services(const std::vector<DemandProfile>& services);

std::vector<double> uniform_gamma(std::size_t num_pixels);

struct HotspotConfig {
    std::size_t count{5};
    double sigma_min_m{40.0};
    double sigma_max_m{160.0};
    double background{0.15};  // share of mass spread uniformly
    std::uint64_t seed{7};

    bool operator==(const HotspotConfig&) const = default;
};

/// Mixture of 2-D Gaussian hotspots evaluated at pixel centers.
std::vector<double> hotspot_gamma(std::size_t grid_rows, std::size_t grid_cols, double pixel_size_m,
                                  const HotspotConfig& config);

/// Kullback-Leibler divergence D(gamma || uniform) in nats.
double kl_to_uniform(const std::vector<double>& gamma);

/// Returns gamma scaled to unit sum. Throws FormatError on negative or all-zero input.
std::vector<double> normalized(std::vector<double> weights);

struct DemandGrid {
    std::size_t rows{0};
    std::size_t cols{0};
    std::vector<double> gamma;  // row-major
};

/// Text grid: first line "rows cols", then `rows` lines of `cols`
/// whitespace- or comma-separated nonnegative weights. With normalize=false a
/// grid whose sum differs from 1 by more than 1e-9 is rejected.
DemandGrid load_demand_grid(const std::filesystem::path& path, bool normalize = true);
void save_demand_grid(const std::filesystem::path& path, std::size_t rows, std::size_t cols,
                      const std::vector<double>& gamma);

}  // namespace cso::demand
