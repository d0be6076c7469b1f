#include "cso/net_model.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

namespace cso::net {

NetworkModel::NetworkModel(std::size_t grid_rows, std::size_t grid_cols, double pixel_size_m,
                           std::vector<Point> cell_positions, Matrix gain, std::vector<double> pilot_power_w,
                           std::vector<double> data_power_w, RadioThresholds radio)
    : rows_(grid_rows),
      cols_(grid_cols),
      pixel_size_m_(pixel_size_m),
      positions_(std::move(cell_positions)),
      gain_(std::move(gain)),
      pilot_w_(std::move(pilot_power_w)),
      data_w_(std::move(data_power_w)),
      radio_(radio) {
    const std::size_t A = gain_.rows();
    const std::size_t L = gain_.cols();
    if (A == 0 || L == 0) throw ConfigError("network model needs at least one pixel and one cell");
    if (rows_ * cols_ != A) throw DimensionError("grid rows*cols does not match the number of pixels");
    if (L > std::numeric_limits<std::uint16_t>::max()) throw ConfigError("too many cells");
    if (pilot_w_.size() != L || data_w_.size() != L) throw DimensionError("power vectors must have one entry per cell");
    if (!positions_.empty() && positions_.size() != L) throw DimensionError("cell positions must have one entry per cell");
    for (double p : pilot_w_)
        if (!(p > 0.0)) throw ConfigError("pilot powers must be strictly positive");
    for (double p : data_w_)
        if (!(p > 0.0)) throw ConfigError("data powers must be strictly positive");
    for (double g : gain_.data())
        if (!(g > 0.0) || !std::isfinite(g)) throw ConfigError("channel gains must be finite and strictly positive");
    if (!(radio_.bandwidth_hz > 0.0)) throw ConfigError("bandwidth must be positive");
    if (!(radio_.noise_w > 0.0)) throw ConfigError("noise power must be positive");

    data_rx_ = Matrix(A, L);
    order_.resize(A * L);
    std::vector<std::uint16_t> idx(L);
    for (std::size_t a = 0; a < A; ++a) {
        for (std::size_t l = 0; l < L; ++l) data_rx_(a, l) = gain_(a, l) * data_w_[l];
        std::iota(idx.begin(), idx.end(), std::uint16_t{0});
        std::stable_sort(idx.begin(), idx.end(),
                         [&](std::uint16_t i, std::uint16_t j) { return pilot_rx(a, i) > pilot_rx(a, j); });
        std::copy(idx.begin(), idx.end(), order_.begin() + static_cast<std::ptrdiff_t>(a * L));
    }
}

Point NetworkModel::pixel_center(std::size_t a) const {
    const std::size_t r = a / cols_;
    const std::size_t c = a % cols_;
    return {(static_cast<double>(c) + 0.5) * pixel_size_m_, (static_cast<double>(r) + 0.5) * pixel_size_m_};
}

NetworkModel NetworkModel::with_powers(std::vector<double> pilot_power_w, std::vector<double> data_power_w) const {
    return NetworkModel(rows_, cols_, pixel_size_m_, positions_, gain_, std::move(pilot_power_w),
                        std::move(data_power_w), radio_);
}

Matrix CoverageResult::serving_matrix(std::size_t num_cells) const {
    Matrix s(num_pixels(), num_cells, 0.0);
    for (std::size_t a = 0; a < num_pixels(); ++a)
        if (covered(a) && serving[a] != kNoCell) s(a, static_cast<std::size_t>(serving[a])) = 1.0;
    return s;
}

Matrix received_power(const NetworkModel& model, const Topology& topo) {
    if (topo.size() != model.num_cells()) throw DimensionError("received_power: topology size mismatch");
    Matrix r(model.num_pixels(), model.num_cells(), 0.0);
    for (std::size_t a = 0; a < model.num_pixels(); ++a)
        for (std::size_t l = 0; l < model.num_cells(); ++l)
            if (topo[l]) r(a, l) = model.pilot_rx(a, l);
    return r;
}

namespace {

enum class SinrCriterion { Apply, Skip };

CoverageResult coverage_impl(const NetworkModel& model, const Topology& topo, std::span<const double> loads,
                             SinrCriterion criterion) {
    const std::size_t A = model.num_pixels();
    const std::size_t L = model.num_cells();
    if (topo.size() != L) throw DimensionError("coverage: topology size mismatch");
    const auto& radio = model.radio();

    std::vector<double> weights(L, 0.0);
    for (std::size_t l = 0; l < L; ++l) weights[l] = topo[l] ? loads[l] : 0.0;

    CoverageResult cov;
    cov.serving.assign(A, kNoCell);
    cov.outage.assign(A, 1);
    if (criterion == SinrCriterion::Apply) cov.sinr.assign(A, 0.0);
    cov.pixel_count.assign(L, 0);
    cov.inverse_size.assign(L, 0.0);

    std::size_t outages = 0;
    for (std::size_t a = 0; a < A; ++a) {
        const std::int32_t s = best_server(model, topo, a);
        cov.serving[a] = s;
        if (s == kNoCell) {
            ++outages;
            continue;
        }
        const auto ls = static_cast<std::size_t>(s);
        const double g = model.gain()(a, ls);
        bool out = model.pilot_rx(a, ls) <= radio.min_rx_power_w || 1.0 / g >= radio.max_ul_attenuation;
        double psi = 0.0;
        if (criterion == SinrCriterion::Apply) {
            const auto row = model.data_rx().row(a);
            psi = row[ls] / (interference_at(row, weights, ls) + radio.noise_w);
            out = out || psi <= radio.min_sinr;
        }
        if (out) {
            ++outages;
            continue;
        }
        cov.outage[a] = 0;
        if (criterion == SinrCriterion::Apply) cov.sinr[a] = psi;
        ++cov.pixel_count[ls];
    }
    for (std::size_t l = 0; l < L; ++l)
        if (cov.pixel_count[l] > 0) cov.inverse_size[l] = 1.0 / static_cast<double>(cov.pixel_count[l]);
    cov.outage_fraction = static_cast<double>(outages) / static_cast<double>(A);
    return cov;
}

}  // namespace

CoverageResult coverage(const NetworkModel& model, const Topology& topo) {
    std::vector<double> full(model.num_cells(), 1.0);
    return coverage_impl(model, topo, full, SinrCriterion::Apply);
}

CoverageResult coverage(const NetworkModel& model, const Topology& topo, std::span<const double> loads) {
    if (loads.size() != model.num_cells()) throw DimensionError("coverage: load vector size mismatch");
    return coverage_impl(model, topo, loads, SinrCriterion::Apply);
}

CoverageResult link_budget_coverage(const NetworkModel& model, const Topology& topo) {
    std::vector<double> full(model.num_cells(), 1.0);
    return coverage_impl(model, topo, full, SinrCriterion::Skip);
}

std::vector<double> sinr(const NetworkModel& model, const Topology& topo, std::span<const double> loads,
                         const CoverageResult& cov) {
    const std::size_t L = model.num_cells();
    if (topo.size() != L || loads.size() != L) throw DimensionError("sinr: size mismatch");
    if (cov.num_pixels() != model.num_pixels()) throw DimensionError("sinr: coverage size mismatch");
    std::vector<double> weights(L, 0.0);
    for (std::size_t l = 0; l < L; ++l) weights[l] = topo[l] ? loads[l] : 0.0;
    std::vector<double> psi(model.num_pixels(), 0.0);
    for (std::size_t a = 0; a < model.num_pixels(); ++a) {
        if (cov.serving[a] == kNoCell || !cov.covered(a)) continue;
        const auto s = static_cast<std::size_t>(cov.serving[a]);
        const auto row = model.data_rx().row(a);
        psi[a] = row[s] / (interference_at(row, weights, s) + model.radio().noise_w);
    }
    return psi;
}

std::vector<double> spectral_efficiency(std::span<const double> sinr, std::span<const std::uint8_t> outage) {
    if (sinr.size() != outage.size()) throw DimensionError("spectral_efficiency: size mismatch");
    std::vector<double> h(sinr.size(), 0.0);
    for (std::size_t a = 0; a < sinr.size(); ++a)
        if (!outage[a]) h[a] = std::log2(1.0 + sinr[a]);
    return h;
}

// Scenario generation ------------------------------------------------------

int hexagonal_rings(std::size_t num_cells) {
    for (int n = 0; 3 * n * (n + 1) + 1 <= static_cast<int>(num_cells); ++n)
        if (static_cast<std::size_t>(3 * n * (n + 1) + 1) == num_cells) return n;
    return -1;
}

namespace {

constexpr std::array<std::array<int, 2>, 6> kAxialDirections{{{1, 0}, {1, -1}, {0, -1}, {-1, 0}, {-1, 1}, {0, 1}}};

Point axial_to_point(int q, int r, double isd, Point center) {
    return {center.x + isd * (q + 0.5 * r), center.y + isd * (std::sqrt(3.0) / 2.0) * r};
}

std::vector<std::array<int, 2>> hex_spiral(std::size_t count) {
    std::vector<std::array<int, 2>> out{{0, 0}};
    for (int k = 1; out.size() < count; ++k) {
        int q = kAxialDirections[4][0] * k;
        int r = kAxialDirections[4][1] * k;
        for (int side = 0; side < 6; ++side) {
            for (int step = 0; step < k; ++step) {
                out.push_back({q, r});
                q += kAxialDirections[side][0];
                r += kAxialDirections[side][1];
            }
        }
    }
    out.resize(count);
    return out;
}

}  // namespace

std::vector<Point> hexagonal_positions(std::size_t num_cells, double cell_radius_m, Point center) {
    const double isd = std::sqrt(3.0) * cell_radius_m;
    std::vector<Point> pts;
    for (auto [q, r] : hex_spiral(num_cells)) pts.push_back(axial_to_point(q, r, isd, center));
    return pts;
}

double log_distance_pathloss_db(const ChannelConfig& channel, double distance_m) {
    const double d = std::max(distance_m, channel.min_distance_m);
    return channel.pathloss_intercept_db +
           10.0 * channel.pathloss_exponent * std::log10(d / channel.reference_distance_m);
}

namespace {

RadioThresholds thresholds_from(const RadioConfig& radio) {
    RadioThresholds t;
    t.bandwidth_hz = radio.bandwidth_hz;
    t.noise_w = dbm_to_watt(radio.noise_psd_dbm_hz + radio.noise_figure_db) * radio.bandwidth_hz;
    t.min_rx_power_w = dbm_to_watt(radio.min_rx_power_dbm);
    t.min_sinr = db_to_linear(radio.min_sinr_db);
    t.max_ul_attenuation = db_to_linear(radio.max_ul_pathloss_db);
    return t;
}

// Translation vectors of the periodic layout used for wraparound distances.
std::vector<Point> wrap_images(const GeometryConfig& geo, std::size_t num_cells) {
    std::vector<Point> images{{0.0, 0.0}};
    if (!geo.wraparound) return images;
    if (geo.layout == Layout::Hexagonal) {
        const int n = hexagonal_rings(num_cells);
        if (n < 0) throw ConfigError("hexagonal wraparound needs a complete ring count (1, 7, 19, 37, ...)");
        const double isd = std::sqrt(3.0) * geo.cell_radius_m;
        // Cluster lattice spanned by the shift (n+1, n) and its 60-degree rotation.
        std::array<int, 2> s1{n + 1, n};
        std::array<int, 2> s2{-s1[1], s1[0] + s1[1]};
        for (int i = -2; i <= 2; ++i) {
            for (int j = -2; j <= 2; ++j) {
                if (i == 0 && j == 0) continue;
                const int q = i * s1[0] + j * s2[0];
                const int r = i * s1[1] + j * s2[1];
                images.push_back(axial_to_point(q, r, isd, {0.0, 0.0}));
            }
        }
    } else {
        for (int i = -1; i <= 1; ++i)
            for (int j = -1; j <= 1; ++j)
                if (i != 0 || j != 0) images.push_back({i * geo.area_width_m, j * geo.area_height_m});
    }
    return images;
}

}  // namespace

NetworkModel generate_scenario(const NetworkConfig& config) {
    const auto& geo = config.geometry;
    const auto& ch = config.channel;
    const auto& radio = config.radio;
    if (!(radio.bandwidth_hz > 0.0)) throw ConfigError("bandwidth must be positive");
    if (!(geo.pixel_size_m > 0.0)) throw ConfigError("pixel size must be positive");
    if (!(geo.area_width_m > 0.0) || !(geo.area_height_m > 0.0)) throw ConfigError("area must be non-empty");
    const auto cols = static_cast<std::size_t>(std::llround(geo.area_width_m / geo.pixel_size_m));
    const auto rows = static_cast<std::size_t>(std::llround(geo.area_height_m / geo.pixel_size_m));
    if (rows == 0 || cols == 0) throw ConfigError("pixel grid has zero size");
    if (geo.num_cells == 0) throw ConfigError("at least one cell is required");
    if (!std::isfinite(radio.max_tx_power_dbm)) throw ConfigError("transmit power must be finite");

    std::vector<double> data_w(geo.num_cells, dbm_to_watt(radio.max_tx_power_dbm));
    std::vector<double> pilot_w(geo.num_cells, dbm_to_watt(radio.max_tx_power_dbm + radio.pilot_power_offset_db));
    const std::size_t A = rows * cols;

    if (!ch.gmatrix_path.empty()) {
        const auto file = load_gain_matrix(ch.gmatrix_path);
        if (file.num_cells != geo.num_cells || file.num_pixels != A)
            throw ConfigError("gain matrix dimensions do not match the configured grid and cell count");
        Matrix g(A, geo.num_cells);
        for (std::size_t i = 0; i < g.data().size(); ++i) g.data()[i] = db_to_linear(file.gain_db.data()[i]);
        std::vector<Point> positions;
        if (geo.layout == Layout::Explicit) positions = geo.positions;
        return NetworkModel(rows, cols, geo.pixel_size_m, positions, std::move(g), pilot_w, data_w,
                            thresholds_from(radio));
    }

    if (!(ch.pathloss_exponent > 0.0) || !(ch.reference_distance_m > 0.0))
        throw ConfigError("path-loss exponent and reference distance must be positive");
    if (ch.shadowing_sigma_db < 0.0) throw ConfigError("shadowing sigma must be nonnegative");

    const Point center{geo.area_width_m / 2.0, geo.area_height_m / 2.0};
    std::vector<Point> positions;
    if (geo.layout == Layout::Hexagonal) {
        if (!(geo.cell_radius_m > 0.0)) throw ConfigError("cell radius must be positive");
        positions = hexagonal_positions(geo.num_cells, geo.cell_radius_m, center);
    } else {
        if (geo.positions.size() != geo.num_cells) throw ConfigError("explicit layout needs one position per cell");
        positions = geo.positions;
    }
    const auto images = wrap_images(geo, geo.num_cells);

    std::mt19937_64 rng(ch.seed);
    std::normal_distribution<double> shadow(0.0, 1.0);
    Matrix g(A, geo.num_cells);
    for (std::size_t a = 0; a < A; ++a) {
        const Point p{(static_cast<double>(a % cols) + 0.5) * geo.pixel_size_m,
                      (static_cast<double>(a / cols) + 0.5) * geo.pixel_size_m};
        for (std::size_t l = 0; l < geo.num_cells; ++l) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& img : images) {
                const double dx = p.x - (positions[l].x + img.x);
                const double dy = p.y - (positions[l].y + img.y);
                best = std::min(best, dx * dx + dy * dy);
            }
            const double s = ch.shadowing_sigma_db > 0.0 ? ch.shadowing_sigma_db * shadow(rng) : 0.0;
            const double gain_db = ch.antenna_gain_db - log_distance_pathloss_db(ch, std::sqrt(best)) - s;
            g(a, l) = db_to_linear(gain_db);
        }
    }
    return NetworkModel(rows, cols, geo.pixel_size_m, std::move(positions), std::move(g), std::move(pilot_w),
                        std::move(data_w), thresholds_from(radio));
}

// G-matrix files -------------------------------------------------------------

namespace {
constexpr char kBinaryMagic[8] = {'C', 'S', 'O', 'G', 'M', 'A', 'T', '1'};
constexpr const char* kTextTag = "GAINMATRIX";
}  // namespace

GainMatrixFile to_gain_matrix_file(const NetworkModel& model) {
    GainMatrixFile f;
    f.num_pixels = model.num_pixels();
    f.num_cells = model.num_cells();
    f.pixel_size_m = model.pixel_size_m();
    f.gain_db = Matrix(f.num_pixels, f.num_cells);
    for (std::size_t i = 0; i < f.gain_db.data().size(); ++i) f.gain_db.data()[i] = linear_to_db(model.gain().data()[i]);
    return f;
}

void save_gain_matrix_text(const std::filesystem::path& path, const GainMatrixFile& file) {
    std::ofstream out(path);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", file.pixel_size_m);
    out << kTextTag << " A=" << file.num_pixels << " L=" << file.num_cells << " pixel_size_m=" << buf << '\n';
    for (std::size_t a = 0; a < file.num_pixels; ++a) {
        for (std::size_t l = 0; l < file.num_cells; ++l) {
            std::snprintf(buf, sizeof buf, "%.17g", file.gain_db(a, l));
            if (l) out << ',';
            out << buf;
        }
        out << '\n';
    }
}

void save_gain_matrix_binary(const std::filesystem::path& path, const GainMatrixFile& file) {
    static_assert(std::endian::native == std::endian::little, "binary gain files are little-endian");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw FormatError("cannot open " + path.string() + " for writing");
    const std::uint64_t a = file.num_pixels;
    const std::uint64_t l = file.num_cells;
    out.write(kBinaryMagic, sizeof kBinaryMagic);
    out.write(reinterpret_cast<const char*>(&a), sizeof a);
    out.write(reinterpret_cast<const char*>(&l), sizeof l);
    out.write(reinterpret_cast<const char*>(&file.pixel_size_m), sizeof file.pixel_size_m);
    out.write(reinterpret_cast<const char*>(file.gain_db.data().data()),
              static_cast<std::streamsize>(file.gain_db.data().size() * sizeof(double)));
}

GainMatrixFile load_gain_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot open gain matrix " + path.string());
    char magic[8] = {};
    in.read(magic, sizeof magic);
    GainMatrixFile f;
    if (in.gcount() == 8 && std::memcmp(magic, kBinaryMagic, 8) == 0) {
        std::uint64_t a = 0, l = 0;
        in.read(reinterpret_cast<char*>(&a), sizeof a);
        in.read(reinterpret_cast<char*>(&l), sizeof l);
        in.read(reinterpret_cast<char*>(&f.pixel_size_m), sizeof f.pixel_size_m);
        if (!in || a == 0 || l == 0) throw FormatError("truncated gain matrix header in " + path.string());
        f.num_pixels = a;
        f.num_cells = l;
        f.gain_db = Matrix(a, l);
        in.read(reinterpret_cast<char*>(f.gain_db.data().data()),
                static_cast<std::streamsize>(f.gain_db.data().size() * sizeof(double)));
        if (!in) throw FormatError("truncated gain matrix body in " + path.string());
        return f;
    }

    in.clear();
    in.seekg(0);
    std::string line;
    if (!std::getline(in, line)) throw FormatError("empty gain matrix file " + path.string());
    std::istringstream header(line);
    std::string tag, a_field, l_field, ps_field;
    header >> tag >> a_field >> l_field >> ps_field;
    if (tag != kTextTag || a_field.rfind("A=", 0) != 0 || l_field.rfind("L=", 0) != 0 ||
        ps_field.rfind("pixel_size_m=", 0) != 0)
        throw FormatError("bad gain matrix header in " + path.string());
    try {
        f.num_pixels = std::stoull(a_field.substr(2));
        f.num_cells = std::stoull(l_field.substr(2));
        f.pixel_size_m = std::stod(ps_field.substr(13));
    } catch (const std::exception&) {
        throw FormatError("bad gain matrix header in " + path.string());
    }
    if (f.num_pixels == 0 || f.num_cells == 0) throw FormatError("gain matrix must be non-empty");
    f.gain_db = Matrix(f.num_pixels, f.num_cells);
    for (std::size_t a = 0; a < f.num_pixels; ++a) {
        if (!std::getline(in, line)) throw FormatError("gain matrix ends early at row " + std::to_string(a));
        std::istringstream row(line);
        std::string cell;
        std::size_t l = 0;
        while (std::getline(row, cell, ',')) {
            if (l >= f.num_cells) throw FormatError("too many columns in gain matrix row " + std::to_string(a));
            try {
                f.gain_db(a, l++) = std::stod(cell);
            } catch (const std::exception&) {
                throw FormatError("bad value in gain matrix row " + std::to_string(a));
            }
        }
        if (l != f.num_cells) throw FormatError("too few columns in gain matrix row " + std::to_string(a));
    }
    return f;
}

}  // namespace cso::net
