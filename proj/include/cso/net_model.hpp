#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "cso/common.hpp"

namespace cso::net {

enum class Layout { Hexagonal, Explicit };

struct GeometryConfig {
    std::size_t num_cells{37};
    Layout layout{Layout::Hexagonal};
    double cell_radius_m{100.0};
    std::vector<Point> positions;  // Layout::Explicit only
    double pixel_size_m{5.0};
    double area_width_m{1000.0};
    double area_height_m{1000.0};
    bool wraparound{true};

    bool operator==(const GeometryConfig&) const = default;
};

struct ChannelConfig {
    // Log-distance path loss: PL(d) = intercept + 10 * exponent * log10(d / d0).
    double pathloss_intercept_db{31.3};
    double pathloss_exponent{3.67};
    double reference_distance_m{1.0};
    double min_distance_m{10.0};
    double shadowing_sigma_db{4.0};
    double antenna_gain_db{0.0};
    std::string gmatrix_path;  // when set, G is read from file instead
    std::uint64_t seed{1};

    bool operator==(const ChannelConfig&) const = default;
};

struct RadioConfig {
    double bandwidth_hz{5e6};
    double max_tx_power_dbm{30.0};
    // Pilot power relative to the total transmit power (one resource element
    // out of 300 subcarriers in a 5 MHz carrier).
    double pilot_power_offset_db{-24.77};
    double noise_psd_dbm_hz{-174.0};
    double noise_figure_db{0.0};
    double min_rx_power_dbm{-123.0};
    double min_sinr_db{-7.0};
    double max_ul_pathloss_db{163.0};

    bool operator==(const RadioConfig&) const = default;
};

struct NetworkConfig {
    GeometryConfig geometry;
    ChannelConfig channel;
    RadioConfig radio;

    bool operator==(const NetworkConfig&) const = default;
};

struct RadioThresholds {
    double bandwidth_hz{5e6};
    double noise_w{1e-14};
    double min_rx_power_w{0.0};
    double min_sinr{0.0};             // linear
    double max_ul_attenuation{1e300};  // linear, 1/G bound
};

/// Pixelized network: geometry, channel gains, and per-cell powers.
///
/// Immutable after construction. Besides the raw inputs it keeps two derived
/// tables used on every evaluation: the data-channel received power
/// G(a,l)*p_D(l) and, per pixel, the cells ordered by pilot received power
/// (descending, ties by lower index).
class NetworkModel {
public:
    NetworkModel(std::size_t grid_rows, std::size_t grid_cols, double pixel_size_m,
                 std::vector<Point> cell_positions, Matrix gain, std::vector<double> pilot_power_w,
                 std::vector<double> data_power_w, RadioThresholds radio);

    std::size_t num_cells() const { return gain_.cols(); }
    std::size_t num_pixels() const { return gain_.rows(); }
    std::size_t grid_rows() const { return rows_; }
    std::size_t grid_cols() const { return cols_; }
    double pixel_size_m() const { return pixel_size_m_; }
    Point pixel_center(std::size_t a) const;

    const std::vector<Point>& cell_positions() const { return positions_; }
    const Matrix& gain() const { return gain_; }
    const Matrix& data_rx() const { return data_rx_; }
    const std::vector<double>& pilot_power() const { return pilot_w_; }
    const std::vector<double>& data_power() const { return data_w_; }
    const RadioThresholds& radio() const { return radio_; }

    double pilot_rx(std::size_t a, std::size_t l) const { return gain_(a, l) * pilot_w_[l]; }
    std::span<const std::uint16_t> pilot_order(std::size_t a) const {
        return {order_.data() + a * num_cells(), num_cells()};
    }

    /// Copy of this model with different transmit powers.
    NetworkModel with_powers(std::vector<double> pilot_power_w, std::vector<double> data_power_w) const;

private:
    std::size_t rows_;
    std::size_t cols_;
    double pixel_size_m_;
    std::vector<Point> positions_;
    Matrix gain_;
    std::vector<double> pilot_w_;
    std::vector<double> data_w_;
    RadioThresholds radio_;
    Matrix data_rx_;
    std::vector<std::uint16_t> order_;
};

inline constexpr std::int32_t kNoCell = -1;

struct CoverageResult {
    std::vector<std::int32_t> serving;      // strongest active pilot, kNoCell if none
    std::vector<std::uint8_t> outage;       // v(a) = 1 in outage
    std::vector<double> sinr;               // linear; 0 for outage pixels
    std::vector<std::size_t> pixel_count;   // covered pixels per cell
    std::vector<double> inverse_size;       // n(l), 0 for empty cells
    double outage_fraction{1.0};

    std::size_t num_pixels() const { return serving.size(); }
    bool covered(std::size_t a) const { return outage[a] == 0; }
    /// S(a,l): pixel a is covered and served by l.
    bool in_cell(std::size_t a, std::size_t l) const {
        return outage[a] == 0 && serving[a] == static_cast<std::int32_t>(l);
    }
    /// Explicit S matrix, A x L. Intended for tests and export.
    Matrix serving_matrix(std::size_t num_cells) const;
};

/// R_PS = G * diag(p_PS .* x).
Matrix received_power(const NetworkModel& model, const Topology& topo);

/// Coverage under the full-load interference model.
CoverageResult coverage(const NetworkModel& model, const Topology& topo);

/// Coverage with interference weighted by the given average loads.
CoverageResult coverage(const NetworkModel& model, const Topology& topo, std::span<const double> loads);

/// Coverage from the received-power and uplink-attenuation criteria only.
/// The SINR criterion is not applied and `sinr` is left empty.
CoverageResult link_budget_coverage(const NetworkModel& model, const Topology& topo);

/// Per-pixel average SINR with interferers weighted by `loads`.
std::vector<double> sinr(const NetworkModel& model, const Topology& topo, std::span<const double> loads,
                         const CoverageResult& cov);

/// h(a) = (1 - v(a)) * log2(1 + psi(a)).
std::vector<double> spectral_efficiency(std::span<const double> sinr, std::span<const std::uint8_t> outage);

/// Interference at a pixel from every cell except `serving`, summed in index
/// order. `weights` already carries the on/off mask.
inline double interference_at(std::span<const double> rx_row, std::span<const double> weights,
                              std::size_t serving) {
    double sum = 0.0;
    for (std::size_t j = 0; j < serving; ++j) sum += weights[j] * rx_row[j];
    for (std::size_t j = serving + 1; j < rx_row.size(); ++j) sum += weights[j] * rx_row[j];
    return sum;
}

/// Strongest active pilot for pixel a, or kNoCell.
inline std::int32_t best_server(const NetworkModel& model, const Topology& topo, std::size_t a) {
    for (auto l : model.pilot_order(a))
        if (topo[l]) return static_cast<std::int32_t>(l);
    return kNoCell;
}

// Scenario generation ------------------------------------------------------

NetworkModel generate_scenario(const NetworkConfig& config);

/// Hexagonal site positions: center first, then rings in angular order.
std::vector<Point> hexagonal_positions(std::size_t num_cells, double cell_radius_m, Point center);

/// Number of complete hexagonal rings n with 3n(n+1)+1 == num_cells, or -1.
int hexagonal_rings(std::size_t num_cells);

/// Path loss in dB of the log-distance model (no shadowing).
double log_distance_pathloss_db(const ChannelConfig& channel, double distance_m);

// G-matrix files -------------------------------------------------------------

struct GainMatrixFile {
    std::size_t num_pixels{0};
    std::size_t num_cells{0};
    double pixel_size_m{0.0};
    Matrix gain_db;  // A x L, dB values of G (negative for attenuation)
};

void save_gain_matrix_text(const std::filesystem::path& path, const GainMatrixFile& file);
void save_gain_matrix_binary(const std::filesystem::path& path, const GainMatrixFile& file);
/// Detects the format from the leading bytes.
GainMatrixFile load_gain_matrix(const std::filesystem::path& path);

GainMatrixFile to_gain_matrix_file(const NetworkModel& model);

}  // namespace cso::net
