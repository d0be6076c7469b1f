#include "cso/common.hpp"

#include <algorithm>
#include <cstdio>

namespace cso {

Topology::Topology(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (auto& b : bits_) b = b ? 1 : 0;
}

Topology Topology::single(std::size_t num_cells, std::size_t cell) {
    if (cell >= num_cells) throw DimensionError("cell index out of range");
    Topology t(num_cells);
    t.set(cell, true);
    return t;
}

Topology Topology::from_string(std::string_view bits) {
    Topology t(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1') {
            t.set(i, true);
        } else if (bits[i] != '0') {
            throw FormatError("invalid topology bitstring '" + std::string(bits) + "'");
        }
    }
    return t;
}

Topology Topology::from_mask(std::uint64_t mask, std::size_t num_cells) {
    if (num_cells > 64) throw DimensionError("mask topologies limited to 64 cells");
    Topology t(num_cells);
    for (std::size_t i = 0; i < num_cells; ++i) t.set(i, (mask >> i) & 1U);
    return t;
}

std::size_t Topology::active_count() const {
    return static_cast<std::size_t>(std::count(bits_.begin(), bits_.end(), std::uint8_t{1}));
}

std::vector<std::size_t> Topology::active_cells() const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) out.push_back(i);
    return out;
}

std::string Topology::to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) s[i] = '1';
    return s;
}

std::uint64_t Topology::mask() const {
    if (bits_.size() > 64) throw DimensionError("mask topologies limited to 64 cells");
    std::uint64_t m = 0;
    for (std::size_t i = 0; i < bits_.size(); ++i)
        if (bits_[i]) m |= (std::uint64_t{1} << i);
    return m;
}

std::size_t hamming_distance(const Topology& a, const Topology& b) {
    if (a.size() != b.size()) throw DimensionError("hamming_distance: topology sizes differ");
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
    return d;
}

std::size_t TopologyHash::operator()(const Topology& t) const noexcept {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto b : t.bits()) {
        h ^= b;
        h *= 0x100000001b3ULL;
    }
    return static_cast<std::size_t>(h);
}

std::uint64_t fnv1a64(std::string_view data) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hex64(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

}  // namespace cso
