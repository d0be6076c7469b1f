#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "cso/common.hpp"
#include "cso/metrics.hpp"
#include "cso/simulator.hpp"

namespace cso::io {

/// Provenance stamped on the first line of every CSV.
struct RunStamp {
    std::string config_hash;
    std::uint64_t optimization_seed{0};
    std::uint64_t simulation_seed{0};

    std::string line() const;  // "# config_hash=... optimization_seed=... simulation_seed=..."
};

/// Shortest text that reads back to the same double (%.17g; inf, -inf, nan).
std::string fmt(double v);

/// Parses a number as written by fmt. Throws FormatError naming `what`.
double parse_double(const std::string& text, const std::string& what);

using Row = std::vector<std::string>;

/// Writes the stamp, a header and the rows. The file is replaced atomically
/// enough for our purposes: written to a temporary and renamed.
void write_csv(const std::filesystem::path& path, const RunStamp& stamp, const Row& header,
               const std::vector<Row>& rows);

struct CsvTable {
    std::optional<RunStamp> stamp;
    Row header;
    std::vector<Row> rows;
    std::vector<std::size_t> line_numbers;  // 1-based file line of each row
};

/// Reads a file written by write_csv. Lines starting with '#' are skipped;
/// every row must have as many fields as the header.
CsvTable read_csv(const std::filesystem::path& path);

struct FrontRow {
    Topology topo;
    metrics::ObjectiveVector obj;
};

/// Columns: [order,] topology, nac, f1..f6, feasible, outage_fraction.
void write_front_csv(const std::filesystem::path& path, const RunStamp& stamp, const std::vector<FrontRow>& rows,
                     bool with_order = false);

/// Reads a front or chain file. Throws FormatError naming the offending row.
std::vector<FrontRow> read_front_csv(const std::filesystem::path& path);

/// Time series of every experiment: experiment, t, users, satisfied,
/// satisfied_fraction, nac, transitions, handovers, handover_mass, power_w.
void write_sim_trace_csv(const std::filesystem::path& path, const RunStamp& stamp, const sim::SimReport& report);
/// Aggregate and per-experiment summaries as JSON.
std::string sim_summary_json(const RunStamp& stamp, const sim::SimReport& report);

void write_text(const std::filesystem::path& path, const std::string& text);

}  // namespace cso::io
