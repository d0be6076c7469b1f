#include "cso/config.hpp"

#include <fstream>
#include <set>
#include <sstream>
#include <type_traits>

#include "json.hpp"

namespace cso {

using json = nlohmann::ordered_json;

std::string to_string(coupling::IciModel ici) { return ici == coupling::IciModel::FullLoad ? "fl" : "lc"; }

coupling::IciModel parse_ici(const std::string& text) {
    if (text == "fl") return coupling::IciModel::FullLoad;
    if (text == "lc") return coupling::IciModel::LoadCoupled;
    throw ConfigError("unknown interference model '" + text + "' (expected fl or lc)");
}

namespace {

// Typed, strict view of one JSON object. Every key read is remembered so that
// finish() can reject the rest.
static_assert(std::is_same_v<std::uint64_t, std::size_t>, "seed fields share the size_t reader");

class Block {
public:
    Block(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(where() + " must be an object");
    }

    void get(const char* key, double& out) {
        if (const json* v = find(key)) {
            if (!v->is_number()) throw ConfigError(where(key) + " must be a number");
            out = v->get<double>();
        }
    }
    void get(const char* key, std::size_t& out) {
        if (const json* v = find(key)) {
            if (!v->is_number_unsigned()) throw ConfigError(where(key) + " must be a nonnegative integer");
            out = v->get<std::size_t>();
        }
    }
    void get(const char* key, bool& out) {
        if (const json* v = find(key)) {
            if (!v->is_boolean()) throw ConfigError(where(key) + " must be true or false");
            out = v->get<bool>();
        }
    }
    void get(const char* key, std::string& out) {
        if (const json* v = find(key)) {
            if (!v->is_string()) throw ConfigError(where(key) + " must be a string");
            out = v->get<std::string>();
        }
    }
    void get(const char* key, std::optional<double>& out) {
        if (const json* v = find(key)) {
            if (v->is_null()) {
                out.reset();
            } else if (v->is_number()) {
                out = v->get<double>();
            } else {
                throw ConfigError(where(key) + " must be a number or null");
            }
        }
    }
    void get(const char* key, std::optional<std::uint64_t>& out) {
        if (const json* v = find(key)) {
            if (v->is_null()) {
                out.reset();
            } else if (v->is_number_unsigned()) {
                out = v->get<std::uint64_t>();
            } else {
                throw ConfigError(where(key) + " must be a nonnegative integer or null");
            }
        }
    }
    void get(const char* key, std::vector<double>& out) {
        if (const json* v = find(key)) {
            if (!v->is_array()) throw ConfigError(where(key) + " must be an array of numbers");
            out.clear();
            for (const auto& e : *v) {
                if (!e.is_number()) throw ConfigError(where(key) + " must be an array of numbers");
                out.push_back(e.get<double>());
            }
        }
    }
    /// Nested object or array; nullptr when absent.
    const json* child(const char* key) { return find(key); }

    std::string where(const char* key = nullptr) const {
        std::string p = path_.empty() ? "config" : path_;
        if (key) p += std::string(".") + key;
        return "'" + p + "'";
    }
    std::string sub(const char* key) const { return path_.empty() ? key : path_ + "." + key; }

    void finish() const {
        for (const auto& [k, v] : j_.items())
            if (!used_.contains(k))
                throw ConfigError("unknown key '" + (path_.empty() ? k : path_ + "." + k) + "'");
    }

private:
    const json* find(const char* key) {
        used_.insert(key);
        auto it = j_.find(key);
        return it == j_.end() ? nullptr : &*it;
    }

    const json& j_;
    std::string path_;
    std::set<std::string> used_;
};

template <typename Fn>
void with_block(Block& parent, const char* key, Fn&& fn) {
    if (const json* j = parent.child(key)) {
        Block b(*j, parent.sub(key));
        fn(b);
        b.finish();
    }
}

void read_hotspots(Block& b, demand::HotspotConfig& h) {
    b.get("count", h.count);
    b.get("sigma_min_m", h.sigma_min_m);
    b.get("sigma_max_m", h.sigma_max_m);
    b.get("background", h.background);
    b.get("seed", h.seed);
}

void read_source(Block& b, DemandSourceConfig& s) {
    b.get("source", s.source);
    b.get("file", s.file);
    b.get("normalize", s.normalize);
    with_block(b, "hotspots", [&](Block& h) { read_hotspots(h, s.hotspots); });
    if (s.source != "hotspots" && s.source != "uniform" && s.source != "file")
        throw ConfigError(b.where("source") + " must be hotspots, uniform or file");
}

json source_json(const DemandSourceConfig& s) {
    return json{{"source", s.source},
                {"file", s.file},
                {"normalize", s.normalize},
                {"hotspots",
                 {{"count", s.hotspots.count},
                  {"sigma_min_m", s.hotspots.sigma_min_m},
                  {"sigma_max_m", s.hotspots.sigma_max_m},
                  {"background", s.hotspots.background},
                  {"seed", s.hotspots.seed}}}};
}

json optional_json(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }
json optional_json(const std::optional<std::uint64_t>& v) { return v ? json(*v) : json(nullptr); }

}  // namespace

ScenarioConfig parse_config(std::string_view json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    ScenarioConfig c;
    Block top(root, "");

    with_block(top, "geometry", [&](Block& b) {
        auto& g = c.network.geometry;
        b.get("num_cells", g.num_cells);
        std::string layout = g.layout == net::Layout::Hexagonal ? "hexagonal" : "explicit";
        b.get("layout", layout);
        if (layout == "hexagonal") {
            g.layout = net::Layout::Hexagonal;
        } else if (layout == "explicit") {
            g.layout = net::Layout::Explicit;
        } else {
            throw ConfigError(b.where("layout") + " must be hexagonal or explicit");
        }
        b.get("cell_radius_m", g.cell_radius_m);
        if (const json* p = b.child("positions")) {
            if (!p->is_array()) throw ConfigError(b.where("positions") + " must be an array of [x, y] pairs");
            g.positions.clear();
            for (const auto& e : *p) {
                if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number())
                    throw ConfigError(b.where("positions") + " must be an array of [x, y] pairs");
                g.positions.push_back({e[0].get<double>(), e[1].get<double>()});
            }
        }
        b.get("pixel_size_m", g.pixel_size_m);
        b.get("area_width_m", g.area_width_m);
        b.get("area_height_m", g.area_height_m);
        b.get("wraparound", g.wraparound);
    });
    with_block(top, "channel", [&](Block& b) {
        auto& ch = c.network.channel;
        b.get("pathloss_intercept_db", ch.pathloss_intercept_db);
        b.get("pathloss_exponent", ch.pathloss_exponent);
        b.get("reference_distance_m", ch.reference_distance_m);
        b.get("min_distance_m", ch.min_distance_m);
        b.get("shadowing_sigma_db", ch.shadowing_sigma_db);
        b.get("antenna_gain_db", ch.antenna_gain_db);
        b.get("gain_matrix_path", ch.gmatrix_path);
        b.get("seed", ch.seed);
    });
    with_block(top, "radio", [&](Block& b) {
        auto& r = c.network.radio;
        b.get("bandwidth_hz", r.bandwidth_hz);
        b.get("max_tx_power_dbm", r.max_tx_power_dbm);
        b.get("pilot_power_offset_db", r.pilot_power_offset_db);
        b.get("noise_psd_dbm_hz", r.noise_psd_dbm_hz);
        b.get("noise_figure_db", r.noise_figure_db);
        b.get("min_rx_power_dbm", r.min_rx_power_dbm);
        b.get("min_sinr_db", r.min_sinr_db);
        b.get("max_ul_pathloss_db", r.max_ul_pathloss_db);
    });
    with_block(top, "demand", [&](Block& b) {
        auto& d = c.demand;
        with_block(b, "spatial", [&](Block& s) { read_source(s, d.spatial); });
        b.get("mean_interarrival_s", d.mean_interarrival_s);
        b.get("mean_session_s", d.mean_session_s);
        b.get("min_rate_bps", d.min_rate_bps);
        if (const json* s = b.child("services")) {
            if (!s->is_array()) throw ConfigError(b.where("services") + " must be an array");
            d.services.clear();
            for (std::size_t i = 0; i < s->size(); ++i) {
                Block sb((*s)[i], b.sub("services") + "[" + std::to_string(i) + "]");
                ServiceConfig svc;
                with_block(sb, "spatial", [&](Block& sp) { read_source(sp, svc.spatial); });
                sb.get("mean_interarrival_s", svc.mean_interarrival_s);
                sb.get("mean_session_s", svc.mean_session_s);
                sb.get("min_rate_bps", svc.min_rate_bps);
                sb.finish();
                d.services.push_back(svc);
            }
        }
    });
    with_block(top, "optimization", [&](Block& b) {
        auto& o = c.optimization;
        std::string pair = to_string(o.pair);
        b.get("objective_pair", pair);
        o.pair = parse_objective_pair(pair);
        b.get("population_size", o.population_size);
        b.get("crossover_prob", o.crossover_prob);
        b.get("mutation_prob", o.mutation_prob);
        b.get("hv_threshold", o.hv_threshold);
        b.get("hv_patience", o.hv_patience);
        b.get("max_generations", o.max_generations);
        b.get("seed", o.seed);
        b.get("initialization", o.initialization);
        if (o.initialization != "mda_chain" && o.initialization != "random")
            throw ConfigError(b.where("initialization") + " must be mda_chain or random");
        b.get("lc_volume_fraction", o.lc_volume_fraction);
        b.get("load_tolerance", o.load_tolerance);
        b.get("max_load_sweeps", o.max_load_sweeps);
    });
    with_block(top, "simulation", [&](Block& b) {
        auto& s = c.simulation;
        b.get("duration_s", s.duration_s);
        b.get("num_experiments", s.num_experiments);
        b.get("qos_check_interval_s", s.qos_check_interval_s);
        b.get("target_qos", s.target_qos);
        b.get("seed", s.seed);
        std::string ici = to_string(s.ici);
        b.get("ici", ici);
        s.ici = parse_ici(ici);
        b.get("volume_multipliers", s.volume_multipliers);
        b.get("volume_reference", s.volume_reference);
        if (s.volume_reference != "vcap" && s.volume_reference != "base")
            throw ConfigError(b.where("volume_reference") + " must be vcap or base");
        b.get("selection", s.selection);
        if (s.selection != "min_nac" && s.selection != "min_power")
            throw ConfigError(b.where("selection") + " must be min_nac or min_power");
        if (const json* p = b.child("phases")) {
            if (!p->is_array()) throw ConfigError(b.where("phases") + " must be an array");
            s.phases.clear();
            for (std::size_t i = 0; i < p->size(); ++i) {
                Block pb((*p)[i], b.sub("phases") + "[" + std::to_string(i) + "]");
                PhaseConfig ph;
                pb.get("start_s", ph.start_s);
                pb.get("volume_scale", ph.volume_scale);
                pb.get("hotspot_seed", ph.hotspot_seed);
                pb.finish();
                s.phases.push_back(ph);
            }
        }
    });
    with_block(top, "power", [&](Block& b) {
        auto& p = c.power;
        b.get("p0_w", p.model.p0_w);
        b.get("sleep_w", p.model.sleep_w);
        b.get("slope_w", p.model.slope_w);
        b.get("max_total_w", p.model.max_total_w);
        b.get("p0_ul", p.uplink.p0);
        b.get("kappa_ul", p.uplink.kappa);
        std::string domain = p.uplink.domain == metrics::UplinkDomain::Linear ? "linear" : "db";
        b.get("uplink_domain", domain);
        if (domain == "linear") {
            p.uplink.domain = metrics::UplinkDomain::Linear;
        } else if (domain == "db") {
            p.uplink.domain = metrics::UplinkDomain::Decibel;
        } else {
            throw ConfigError(b.where("uplink_domain") + " must be linear or db");
        }
    });
    with_block(top, "constraint", [&](Block& b) { b.get("kappa_cov", c.kappa_cov); });
    with_block(top, "benchmarks", [&](Block& b) {
        b.get("lia_load_threshold", c.benchmarks.load_threshold);
        b.get("lia_interference_weight", c.benchmarks.interference_weight);
    });
    with_block(top, "coverage_report", [&](Block& b) {
        b.get("power_dbm", c.coverage_report.power_dbm);
        b.get("candidate_window_db", c.coverage_report.candidate_window_db);
    });
    top.finish();
    return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

namespace {

json to_json(const ScenarioConfig& c) {
    const auto& g = c.network.geometry;
    json positions = json::array();
    for (const auto& p : g.positions) positions.push_back({p.x, p.y});
    const auto& ch = c.network.channel;
    const auto& r = c.network.radio;
    json services = json::array();
    for (const auto& s : c.demand.services)
        services.push_back({{"spatial", source_json(s.spatial)},
                            {"mean_interarrival_s", s.mean_interarrival_s},
                            {"mean_session_s", s.mean_session_s},
                            {"min_rate_bps", s.min_rate_bps}});
    const auto& o = c.optimization;
    const auto& s = c.simulation;
    json phases = json::array();
    for (const auto& p : s.phases)
        phases.push_back(
            {{"start_s", p.start_s}, {"volume_scale", p.volume_scale}, {"hotspot_seed", optional_json(p.hotspot_seed)}});

    json j;
    j["geometry"] = {{"num_cells", g.num_cells},
                     {"layout", g.layout == net::Layout::Hexagonal ? "hexagonal" : "explicit"},
                     {"cell_radius_m", g.cell_radius_m},
                     {"positions", positions},
                     {"pixel_size_m", g.pixel_size_m},
                     {"area_width_m", g.area_width_m},
                     {"area_height_m", g.area_height_m},
                     {"wraparound", g.wraparound}};
    j["channel"] = {{"pathloss_intercept_db", ch.pathloss_intercept_db},
                    {"pathloss_exponent", ch.pathloss_exponent},
                    {"reference_distance_m", ch.reference_distance_m},
                    {"min_distance_m", ch.min_distance_m},
                    {"shadowing_sigma_db", ch.shadowing_sigma_db},
                    {"antenna_gain_db", ch.antenna_gain_db},
                    {"gain_matrix_path", ch.gmatrix_path},
                    {"seed", ch.seed}};
    j["radio"] = {{"bandwidth_hz", r.bandwidth_hz},
                  {"max_tx_power_dbm", r.max_tx_power_dbm},
                  {"pilot_power_offset_db", r.pilot_power_offset_db},
                  {"noise_psd_dbm_hz", r.noise_psd_dbm_hz},
                  {"noise_figure_db", r.noise_figure_db},
                  {"min_rx_power_dbm", r.min_rx_power_dbm},
                  {"min_sinr_db", r.min_sinr_db},
                  {"max_ul_pathloss_db", r.max_ul_pathloss_db}};
    j["demand"] = {{"spatial", source_json(c.demand.spatial)},
                   {"mean_interarrival_s", c.demand.mean_interarrival_s},
                   {"mean_session_s", c.demand.mean_session_s},
                   {"min_rate_bps", c.demand.min_rate_bps},
                   {"services", services}};
    j["optimization"] = {{"objective_pair", to_string(o.pair)},
                         {"population_size", o.population_size},
                         {"crossover_prob", o.crossover_prob},
                         {"mutation_prob", optional_json(o.mutation_prob)},
                         {"hv_threshold", o.hv_threshold},
                         {"hv_patience", o.hv_patience},
                         {"max_generations", o.max_generations},
                         {"seed", o.seed},
                         {"initialization", o.initialization},
                         {"lc_volume_fraction", o.lc_volume_fraction},
                         {"load_tolerance", o.load_tolerance},
                         {"max_load_sweeps", o.max_load_sweeps}};
    j["simulation"] = {{"duration_s", s.duration_s},
                       {"num_experiments", s.num_experiments},
                       {"qos_check_interval_s", s.qos_check_interval_s},
                       {"target_qos", s.target_qos},
                       {"seed", s.seed},
                       {"ici", to_string(s.ici)},
                       {"volume_multipliers", s.volume_multipliers},
                       {"volume_reference", s.volume_reference},
                       {"selection", s.selection},
                       {"phases", phases}};
    j["power"] = {{"p0_w", c.power.model.p0_w},
                  {"sleep_w", c.power.model.sleep_w},
                  {"slope_w", c.power.model.slope_w},
                  {"max_total_w", c.power.model.max_total_w},
                  {"p0_ul", c.power.uplink.p0},
                  {"kappa_ul", c.power.uplink.kappa},
                  {"uplink_domain", c.power.uplink.domain == metrics::UplinkDomain::Linear ? "linear" : "db"}};
    j["constraint"] = {{"kappa_cov", c.kappa_cov}};
    j["benchmarks"] = {{"lia_load_threshold", c.benchmarks.load_threshold},
                       {"lia_interference_weight", c.benchmarks.interference_weight}};
    j["coverage_report"] = {{"power_dbm", c.coverage_report.power_dbm},
                            {"candidate_window_db", c.coverage_report.candidate_window_db}};
    return j;
}

}  // namespace

std::string to_json_string(const ScenarioConfig& config, int indent) { return to_json(config).dump(indent); }

std::string config_hash(const ScenarioConfig& config) { return hex64(fnv1a64(to_json(config).dump())); }

}  // namespace cso
