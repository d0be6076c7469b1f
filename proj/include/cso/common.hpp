#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace cso {

// Error hierarchy. Each maps onto one CLI exit code (see tools/cso.cpp).
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct FormatError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Point {
    double x{0.0};
    double y{0.0};

    bool operator==(const Point&) const = default;
};

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double lin) { return 10.0 * std::log10(lin); }
inline double dbm_to_watt(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watt_to_dbm(double w) { return 10.0 * std::log10(w) + 30.0; }

/// Dense row-major matrix of doubles.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_{0};
    std::size_t cols_{0};
    std::vector<double> data_;
};

/// Binary on/off pattern over the cells of a network.
class Topology {
public:
    Topology() = default;
    explicit Topology(std::size_t num_cells, bool on = false) : bits_(num_cells, on ? 1 : 0) {}
    explicit Topology(std::vector<std::uint8_t> bits);

    static Topology all_on(std::size_t num_cells) { return Topology(num_cells, true); }
    static Topology single(std::size_t num_cells, std::size_t cell);
    /// Parses a '0'/'1' string; character i is cell i.
    static Topology from_string(std::string_view bits);
    /// Cell i is bit i of `mask` (num_cells <= 64).
    static Topology from_mask(std::uint64_t mask, std::size_t num_cells);

    std::size_t size() const { return bits_.size(); }
    bool operator[](std::size_t i) const { return bits_[i] != 0; }
    void set(std::size_t i, bool on) { bits_[i] = on ? 1 : 0; }
    void flip(std::size_t i) { bits_[i] ^= 1; }

    std::size_t active_count() const;
    bool none() const { return active_count() == 0; }
    std::vector<std::size_t> active_cells() const;

    std::string to_string() const;
    /// Only valid for size() <= 64.
    std::uint64_t mask() const;

    const std::vector<std::uint8_t>& bits() const { return bits_; }

    auto operator<=>(const Topology&) const = default;

private:
    std::vector<std::uint8_t> bits_;
};

std::size_t hamming_distance(const Topology& a, const Topology& b);

struct TopologyHash {
    std::size_t operator()(const Topology& t) const noexcept;
};

/// 64-bit FNV-1a, used for config fingerprints embedded in output files.
std::uint64_t fnv1a64(std::string_view data);
std::string hex64(std::uint64_t v);

}  // namespace cso
