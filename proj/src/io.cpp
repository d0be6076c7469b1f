#include "cso/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace cso::io {

std::string RunStamp::line() const {
    return "# config_hash=" + config_hash + " optimization_seed=" + std::to_string(optimization_seed) +
           " simulation_seed=" + std::to_string(simulation_seed);
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double parse_double(const std::string& text, const std::string& what) {
    if (text == "nan") return std::nan("");
    if (text == "inf") return INFINITY;
    if (text == "-inf") return -INFINITY;
    if (text.empty()) throw FormatError(what + ": empty number");
    char* end = nullptr;
    double v = std::strtod(text.c_str(), &end);
    if (end != text.c_str() + text.size()) throw FormatError(what + ": '" + text + "' is not a number");
    return v;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot write " + path.string());
        out << text;
        if (!out) throw std::runtime_error("write failed for " + path.string());
    }
    std::filesystem::rename(tmp, path);
}

namespace {

std::string join(const Row& row) {
    std::string s;
    for (std::size_t i = 0; i < row.size(); ++i) {
        if (i) s += ',';
        s += row[i];
    }
    return s;
}

Row split(const std::string& line) {
    Row out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(cur);
            cur.clear();
        } else if (c != '\r') {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::optional<RunStamp> parse_stamp(const std::string& line) {
    std::istringstream ss(line.substr(1));
    RunStamp s;
    bool any = false;
    std::string tok;
    while (ss >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) continue;
        auto key = tok.substr(0, eq);
        auto val = tok.substr(eq + 1);
        try {
            if (key == "config_hash") {
                s.config_hash = val;
                any = true;
            } else if (key == "optimization_seed") {
                s.optimization_seed = std::stoull(val);
            } else if (key == "simulation_seed") {
                s.simulation_seed = std::stoull(val);
            }
        } catch (const std::exception&) {
            throw FormatError("malformed stamp line '" + line + "'");
        }
    }
    if (!any) return std::nullopt;
    return s;
}

}  // namespace

void write_csv(const std::filesystem::path& path, const RunStamp& stamp, const Row& header,
               const std::vector<Row>& rows) {
    std::string text = stamp.line() + "\n" + join(header) + "\n";
    for (const auto& r : rows) text += join(r) + "\n";
    write_text(path, text);
}

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw FormatError("cannot open " + path.string());
    CsvTable t;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line[0] == '#') {
            if (!t.stamp) t.stamp = parse_stamp(line);
            continue;
        }
        Row r = split(line);
        if (!have_header) {
            t.header = std::move(r);
            have_header = true;
            continue;
        }
        if (r.size() != t.header.size())
            throw FormatError(path.string() + ": row at line " + std::to_string(lineno) + " has " +
                              std::to_string(r.size()) + " fields, expected " + std::to_string(t.header.size()));
        t.rows.push_back(std::move(r));
        t.line_numbers.push_back(lineno);
    }
    if (!have_header) throw FormatError(path.string() + ": missing header");
    return t;
}

namespace {

const Row kFrontColumns = {"topology", "nac", "f1", "f2", "f3", "f4", "f5", "f6", "feasible", "outage_fraction"};

}  // namespace

void write_front_csv(const std::filesystem::path& path, const RunStamp& stamp, const std::vector<FrontRow>& rows,
                     bool with_order) {
    Row header;
    if (with_order) header.push_back("order");
    header.insert(header.end(), kFrontColumns.begin(), kFrontColumns.end());
    std::vector<Row> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto& r = rows[i];
        Row row;
        if (with_order) row.push_back(std::to_string(i + 1));
        row.push_back(r.topo.to_string());
        row.push_back(std::to_string(r.topo.active_count()));
        for (double f : {r.obj.f1, r.obj.f2, r.obj.f3, r.obj.f4, r.obj.f5, r.obj.f6}) row.push_back(fmt(f));
        row.push_back(r.obj.feasible ? "1" : "0");
        row.push_back(fmt(r.obj.outage_fraction));
        out.push_back(std::move(row));
    }
    write_csv(path, stamp, header, out);
}

std::vector<FrontRow> read_front_csv(const std::filesystem::path& path) {
    CsvTable t = read_csv(path);
    auto col = [&](const std::string& name) {
        for (std::size_t i = 0; i < t.header.size(); ++i)
            if (t.header[i] == name) return i;
        throw FormatError(path.string() + ": missing column '" + name + "'");
    };
    std::vector<std::size_t> idx;
    for (const auto& name : kFrontColumns) idx.push_back(col(name));

    std::vector<FrontRow> out;
    std::size_t num_cells = 0;
    for (std::size_t k = 0; k < t.rows.size(); ++k) {
        const Row& r = t.rows[k];
        std::string where = path.string() + ": row " + std::to_string(k + 1) + " (line " +
                            std::to_string(t.line_numbers[k]) + ")";
        FrontRow fr;
        try {
            fr.topo = Topology::from_string(r[idx[0]]);
        } catch (const FormatError& e) {
            throw FormatError(where + ": " + e.what());
        }
        if (fr.topo.size() == 0) throw FormatError(where + ": empty topology");
        if (k == 0) num_cells = fr.topo.size();
        if (fr.topo.size() != num_cells) throw FormatError(where + ": topology length differs from the first row");
        double nac = parse_double(r[idx[1]], where + " nac");
        if (nac != static_cast<double>(fr.topo.active_count()))
            throw FormatError(where + ": nac does not match the topology");
        double* fs[] = {&fr.obj.f1, &fr.obj.f2, &fr.obj.f3, &fr.obj.f4, &fr.obj.f5, &fr.obj.f6};
        for (std::size_t j = 0; j < 6; ++j) *fs[j] = parse_double(r[idx[2 + j]], where + " " + kFrontColumns[2 + j]);
        const std::string& feas = r[idx[8]];
        if (feas != "0" && feas != "1") throw FormatError(where + ": feasible must be 0 or 1");
        fr.obj.feasible = feas == "1";
        fr.obj.outage_fraction = parse_double(r[idx[9]], where + " outage_fraction");
        out.push_back(std::move(fr));
    }
    return out;
}

void write_sim_trace_csv(const std::filesystem::path& path, const RunStamp& stamp, const sim::SimReport& report) {
    Row header = {"experiment", "t",           "users",     "satisfied",     "satisfied_fraction",
                  "nac",        "transitions", "handovers", "handover_mass", "power_w"};
    std::vector<Row> rows;
    for (std::size_t e = 0; e < report.experiments.size(); ++e)
        for (const auto& c : report.experiments[e].trace)
            rows.push_back({std::to_string(e), fmt(c.time_s), std::to_string(c.users), std::to_string(c.satisfied),
                            fmt(c.satisfied_fraction), std::to_string(c.nac), std::to_string(c.transitions),
                            std::to_string(c.handovers), fmt(c.handover_mass), fmt(c.power_w)});
    write_csv(path, stamp, header, rows);
}

std::string sim_summary_json(const RunStamp& stamp, const sim::SimReport& report) {
    using json = nlohmann::ordered_json;
    json j;
    j["config_hash"] = stamp.config_hash;
    j["optimization_seed"] = stamp.optimization_seed;
    j["simulation_seed"] = stamp.simulation_seed;
    j["mean_satisfied"] = report.mean_satisfied;
    j["qos_pass_fraction"] = report.qos_pass_fraction;
    j["qos_pass"] = report.qos_pass;
    j["mean_nac"] = report.mean_nac;
    j["transitions"] = report.transitions;
    j["handovers"] = report.handovers;
    j["handover_mass"] = report.handover_mass;
    j["mean_power_w"] = report.mean_power_w;
    json exps = json::array();
    for (const auto& e : report.experiments)
        exps.push_back({{"arrivals", e.arrivals},
                        {"mean_satisfied", e.mean_satisfied},
                        {"qos_pass_fraction", e.qos_pass_fraction},
                        {"mean_nac", e.mean_nac},
                        {"transitions", e.transitions},
                        {"handovers", e.handovers},
                        {"handover_mass", e.handover_mass},
                        {"mean_power_w", e.mean_power_w}});
    j["experiments"] = exps;
    return j.dump(2) + "\n";
}

}  // namespace cso::io
