#include "cso/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <memory>

#include "cso/benchmarks.hpp"
#include "cso/coupling.hpp"
#include "cso/mda.hpp"
#include "cso/moea.hpp"
#include "cso/parallel.hpp"
#include "cso/problem.hpp"
#include "json.hpp"

namespace cso {

using json = nlohmann::ordered_json;

ScenarioConfig resolve_config(const CommandOptions& options) {
    ScenarioConfig c = options.config_path.empty() ? ScenarioConfig{} : load_config(options.config_path);
    if (options.seed) {
        c.optimization.seed = *options.seed;
        c.simulation.seed = *options.seed;
    }
    if (options.volume_multipliers) c.simulation.volume_multipliers = *options.volume_multipliers;
    if (options.ici) c.simulation.ici = parse_ici(*options.ici);
    if (options.objectives) c.optimization.pair = parse_objective_pair(*options.objectives);
    if (options.normalize_demand) {
        c.demand.spatial.normalize = *options.normalize_demand;
        for (auto& s : c.demand.services) s.spatial.normalize = *options.normalize_demand;
    }
    if (options.threads == 0) throw ConfigError("--threads must be at least 1");
    return c;
}

io::RunStamp Scenario::stamp() const {
    return {config_hash(config), config.optimization.seed, config.simulation.seed};
}

std::vector<double> spatial_gamma(const DemandSourceConfig& source, const net::NetworkModel& model,
                                  std::optional<std::uint64_t> hotspot_seed) {
    if (source.source == "uniform") return demand::uniform_gamma(model.num_pixels());
    if (source.source == "file") {
        if (source.file.empty()) throw ConfigError("demand source 'file' needs a file path");
        const auto grid = demand::load_demand_grid(source.file, source.normalize);
        if (grid.rows != model.grid_rows() || grid.cols != model.grid_cols())
            throw ConfigError("demand grid " + source.file + " is " + std::to_string(grid.rows) + "x" +
                              std::to_string(grid.cols) + " but the network has " +
                              std::to_string(model.grid_rows()) + "x" + std::to_string(model.grid_cols()) +
                              " pixels");
        return grid.gamma;
    }
    auto hs = source.hotspots;
    if (hotspot_seed) hs.seed = *hotspot_seed;
    return demand::hotspot_gamma(model.grid_rows(), model.grid_cols(), model.pixel_size_m(), hs);
}

demand::DemandProfile build_profile(const ScenarioConfig& config, const net::NetworkModel& model,
                                    std::optional<std::uint64_t> hotspot_seed) {
    const auto& d = config.demand;
    if (d.services.empty()) {
        demand::DemandProfile p;
        p.gamma = spatial_gamma(d.spatial, model, hotspot_seed);
        p.mean_interarrival_s = d.mean_interarrival_s;
        p.mean_session_s = d.mean_session_s;
        p.min_rate_bps = d.min_rate_bps;
        p.validate();
        return p;
    }
    std::vector<demand::DemandProfile> services;
    for (const auto& s : d.services) {
        demand::DemandProfile p;
        p.gamma = spatial_gamma(s.spatial, model, hotspot_seed);
        p.mean_interarrival_s = s.mean_interarrival_s;
        p.mean_session_s = s.mean_session_s;
        p.min_rate_bps = s.min_rate_bps;
        p.validate();
        services.push_back(std::move(p));
    }
    return demand::aggregate_services(services);
}

Scenario build_scenario(const ScenarioConfig& config) {
    auto model = net::generate_scenario(config.network);
    auto profile = build_profile(config, model);
    return Scenario{config, std::move(model), std::move(profile)};
}

sim::DemandSchedule build_schedule(const Scenario& scenario) {
    const auto& phases = scenario.config.simulation.phases;
    if (phases.empty()) return sim::DemandSchedule::constant(scenario.profile);
    sim::DemandSchedule s;
    for (const auto& ph : phases) {
        if (!(ph.volume_scale > 0.0)) throw ConfigError("phase volume_scale must be positive");
        auto base = ph.hotspot_seed ? build_profile(scenario.config, scenario.model, ph.hotspot_seed) : scenario.profile;
        s.phases.push_back({ph.start_s, base.scaled(ph.volume_scale)});
    }
    s.validate(scenario.model.num_pixels());
    return s;
}

namespace {

coupling::SolveOptions solve_options(const ScenarioConfig& c) {
    return {c.optimization.load_tolerance, c.optimization.max_load_sweeps};
}

coupling::VolumeScale all_on_capacity(const Scenario& sc, coupling::IciModel ici) {
    coupling::VolumeOptions vo;
    vo.solve = solve_options(sc.config);
    return coupling::find_volume(sc.model, Topology::all_on(sc.model.num_cells()), sc.profile,
                                 coupling::VolumeTarget::Capacity, ici, vo);
}

ProblemSettings problem_settings(const ScenarioConfig& c) {
    ProblemSettings s;
    s.pair = c.optimization.pair;
    s.kappa_cov = c.kappa_cov;
    s.uplink = c.power.uplink;
    s.power = c.power.model;
    s.solve = solve_options(c);
    return s;
}

sim::SimConfig sim_config(const ScenarioConfig& c, double volume_scale, std::size_t threads) {
    sim::SimConfig s;
    s.duration_s = c.simulation.duration_s;
    s.num_experiments = c.simulation.num_experiments;
    s.qos_check_interval_s = c.simulation.qos_check_interval_s;
    s.target_qos = c.simulation.target_qos;
    s.seed = c.simulation.seed;
    s.ici = c.simulation.ici;
    s.volume_multiplier = volume_scale;
    s.threads = threads;
    s.validate();
    return s;
}

sim::SelectionCriterion selection_criterion(const ScenarioConfig& c) {
    return c.simulation.selection == "min_power" ? sim::SelectionCriterion::MinPower
                                                 : sim::SelectionCriterion::MinActiveCells;
}

std::vector<io::FrontRow> rows_of(const Problem& problem, const std::vector<Topology>& topos, std::size_t threads) {
    std::vector<io::FrontRow> rows(topos.size());
    parallel_for(topos.size(), threads, [&](std::size_t i) {
        rows[i].topo = topos[i];
        rows[i].obj = problem.objectives(topos[i]);
    });
    return rows;
}

std::vector<Topology> genomes(const std::vector<moea::Individual>& inds) {
    std::vector<Topology> out;
    for (const auto& i : inds) out.push_back(i.genome);
    return out;
}

std::filesystem::path front_file(const CommandOptions& o) {
    return o.front_path.empty() ? o.out_dir / "front.csv" : o.front_path;
}

std::vector<io::FrontRow> load_front(const CommandOptions& o, const Scenario& sc) {
    const auto path = front_file(o);
    if (!std::filesystem::exists(path))
        throw ConfigError("front file " + path.string() + " not found; run 'optimize' first or pass --front");
    auto rows = io::read_front_csv(path);
    if (rows.empty()) throw FormatError(path.string() + ": front has no topologies");
    if (rows.front().topo.size() != sc.model.num_cells())
        throw ConfigError(path.string() + ": topologies have " + std::to_string(rows.front().topo.size()) +
                          " cells but the network has " + std::to_string(sc.model.num_cells()));
    return rows;
}

std::vector<sim::Candidate> candidates_of(const std::vector<io::FrontRow>& rows) {
    std::vector<sim::Candidate> out;
    for (const auto& r : rows) out.push_back({r.topo, r.obj.f1, r.obj.f5});
    return out;
}

/// Candidate indices in the order the selection rule visits them.
std::vector<std::size_t> visit_order(const std::vector<sim::Candidate>& c, sim::SelectionCriterion criterion) {
    std::vector<std::size_t> order(c.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return criterion == sim::SelectionCriterion::MinActiveCells ? c[a].f1 < c[b].f1 : c[a].f5 < c[b].f5;
    });
    return order;
}

}  // namespace

demand::DemandProfile optimization_profile(const Scenario& scenario) {
    const double frac = scenario.config.optimization.lc_volume_fraction;
    if (!(frac > 0.0)) throw ConfigError("lc_volume_fraction must be positive");
    const auto vcap = all_on_capacity(scenario, coupling::IciModel::LoadCoupled);
    return scenario.profile.scaled(frac * vcap.multiplier);
}

std::vector<double> volume_scales(const Scenario& scenario) {
    const auto& s = scenario.config.simulation;
    for (double m : s.volume_multipliers)
        if (!(m >= 0.0)) throw ConfigError("volume multipliers must be nonnegative");
    if (s.volume_reference == "base") return s.volume_multipliers;
    const double vcap = all_on_capacity(scenario, s.ici).multiplier;
    std::vector<double> out;
    for (double m : s.volume_multipliers) out.push_back(m * vcap);
    return out;
}

int cmd_generate(const CommandOptions& options) {
    const auto sc = build_scenario(resolve_config(options));
    std::filesystem::create_directories(options.out_dir);
    net::save_gain_matrix_binary(options.out_dir / "gain_matrix.bin", net::to_gain_matrix_file(sc.model));
    demand::save_demand_grid(options.out_dir / "demand.txt", sc.model.grid_rows(), sc.model.grid_cols(),
                             sc.profile.gamma);

    const auto fl = all_on_capacity(sc, coupling::IciModel::FullLoad);
    const auto lc = all_on_capacity(sc, coupling::IciModel::LoadCoupled);
    const auto cov = net::coverage(sc.model, Topology::all_on(sc.model.num_cells()));
    json j;
    j["config_hash"] = config_hash(sc.config);
    j["grid_rows"] = sc.model.grid_rows();
    j["grid_cols"] = sc.model.grid_cols();
    j["num_pixels"] = sc.model.num_pixels();
    j["num_cells"] = sc.model.num_cells();
    json pos = json::array();
    for (const auto& p : sc.model.cell_positions()) pos.push_back({p.x, p.y});
    j["cell_positions"] = pos;
    j["demand_kl_to_uniform_nats"] = demand::kl_to_uniform(sc.profile.gamma);
    j["mean_users_base"] = sc.profile.mean_users();
    j["all_on_outage_fraction"] = cov.outage_fraction;
    j["vcap_multiplier_fl"] = fl.multiplier;
    j["vcap_multiplier_lc"] = lc.multiplier;
    j["config"] = json::parse(to_json_string(sc.config));
    io::write_text(options.out_dir / "scenario.json", j.dump(2) + "\n");
    std::printf("wrote %s (A=%zu, L=%zu), V_Cap multiplier FL %.6g LC %.6g\n",
                (options.out_dir / "scenario.json").string().c_str(), sc.model.num_pixels(), sc.model.num_cells(),
                fl.multiplier, lc.multiplier);
    return 0;
}

int cmd_optimize(const CommandOptions& options) {
    const auto sc = build_scenario(resolve_config(options));
    const auto& oc = sc.config.optimization;
    const auto profile = optimization_profile(sc);
    const Problem problem(sc.model, profile, problem_settings(sc.config));
    const auto view = problem.view();
    const auto stamp = sc.stamp();
    const std::size_t threads = options.threads;
    std::filesystem::create_directories(options.out_dir);

    json meta;
    meta["algorithm"] = options.algorithm;
    meta["objective_pair"] = to_string(oc.pair);
    meta["config_hash"] = stamp.config_hash;
    meta["optimization_seed"] = oc.seed;
    meta["volume_multiplier"] = profile.mean_interarrival_s > 0.0
                                    ? sc.profile.mean_interarrival_s / profile.mean_interarrival_s
                                    : 0.0;

    std::vector<moea::Individual> front;
    if (options.algorithm == "mda") {
        const auto chain = mda::run_mda(view, threads);
        io::write_front_csv(options.out_dir / "chain.csv", stamp, rows_of(problem, chain.chain, threads), true);
        std::vector<moea::Individual> inds;
        for (std::size_t i = 0; i < chain.chain.size(); ++i) {
            moea::Individual ind;
            ind.genome = chain.chain[i];
            ind.eval = chain.evals[i];
            ind.min_obj = moea::to_minimization(ind.eval.objectives, view.senses);
            inds.push_back(std::move(ind));
        }
        front = moea::pareto_filter(std::move(inds));
        meta["evaluations"] = chain.evaluations;
        meta["chain_length"] = chain.chain.size();
    } else if (options.algorithm == "moea") {
        moea::MoeaConfig mc;
        mc.population_size = oc.population_size;
        mc.crossover_prob = oc.crossover_prob;
        mc.mutation_prob = oc.mutation_prob;
        mc.hv_threshold = oc.hv_threshold;
        mc.hv_patience = oc.hv_patience;
        mc.max_generations = oc.max_generations;
        mc.seed = oc.seed;
        mc.threads = threads;
        std::size_t seeding_evals = 0;
        if (oc.initialization == "mda_chain") {
            const auto chain = mda::run_mda(view, threads);
            mc.initial = chain.chain;
            seeding_evals = chain.evaluations;
        }
        const auto result = moea::evolve(view, mc);
        front = result.front;
        std::size_t evals = 0;
        for (const auto& g : result.history) evals += g.new_evaluations;
        meta["initialization"] = oc.initialization;
        meta["seeding_evaluations"] = seeding_evals;
        meta["evaluations"] = evals;
        meta["generations"] = result.generations;
        meta["final_hypervolume"] = result.final_hypervolume;
        meta["hv_reference"] = {result.reference[0], result.reference[1]};
        meta["hv_reference_set"] = result.reference_set;
    } else {
        throw ConfigError("unknown algorithm '" + options.algorithm + "' (expected moea or mda)");
    }

    if (options.exhaustive) {
        if (sc.model.num_cells() > 20)
            throw ConfigError("--exhaustive enumerates 2^L topologies and is limited to L <= 20 (L = " +
                              std::to_string(sc.model.num_cells()) + ")");
        const auto ex = moea::exhaustive_front(view, threads);
        io::write_front_csv(options.out_dir / "exhaustive_front.csv", stamp, rows_of(problem, genomes(ex), threads));
        std::vector<moea::Objectives> pts, ex_pts;
        for (const auto& i : front) pts.push_back(i.min_obj);
        for (const auto& i : ex) ex_pts.push_back(i.min_obj);
        // Common reference: componentwise worst of both sets, nudged outward.
        moea::Objectives ref{-INFINITY, -INFINITY};
        for (const auto* set : {&pts, &ex_pts})
            for (const auto& p : *set)
                for (int k = 0; k < 2; ++k) ref[k] = std::max(ref[k], p[k]);
        for (int k = 0; k < 2; ++k) ref[k] += std::max(1.0, std::abs(ref[k])) * 1e-6;
        const double hv_ex = ex_pts.empty() ? 0.0 : moea::hypervolume_2d(ex_pts, ref);
        meta["exhaustive_front_size"] = ex.size();
        meta["hypervolume_ratio_to_exhaustive"] = hv_ex > 0.0 ? moea::hypervolume_2d(pts, ref) / hv_ex : 1.0;
    }

    if (front.empty()) throw InfeasibleError("no topology meets the coverage constraint (kappa_cov = " +
                                             io::fmt(sc.config.kappa_cov) + ")");
    io::write_front_csv(options.out_dir / "front.csv", stamp, rows_of(problem, genomes(front), threads));
    meta["front_size"] = front.size();
    meta["config"] = json::parse(to_json_string(sc.config));
    io::write_text(options.out_dir / "metadata.json", meta.dump(2) + "\n");
    std::printf("wrote %zu front members to %s\n", front.size(), (options.out_dir / "front.csv").string().c_str());
    return 0;
}

int cmd_evaluate(const CommandOptions& options) {
    const auto sc = build_scenario(resolve_config(options));
    const auto rows = load_front(options, sc);
    const auto candidates = candidates_of(rows);
    const auto criterion = selection_criterion(sc.config);
    const auto schedule = build_schedule(sc);
    const auto scales = volume_scales(sc);
    const auto& mults = sc.config.simulation.volume_multipliers;
    const auto stamp = sc.stamp();
    const auto& pm = sc.config.power.model;
    std::filesystem::create_directories(options.out_dir);

    const io::Row eval_header = {"volume_multiplier", "volume_scale", "topology",          "nac",
                                 "f5",                "mean_satisfied", "qos_pass_fraction", "qos_pass",
                                 "mean_power_w"};
    const io::Row sel_header = {"volume_multiplier", "volume_scale",  "topology", "nac", "fallback_all_on",
                                "mean_satisfied",    "qos_pass_fraction", "qos_pass"};
    std::vector<io::Row> eval_rows, sel_rows;
    auto report_row = [&](std::size_t k, const Topology& t, double f5, const sim::SimReport& r) {
        return io::Row{io::fmt(mults[k]),          io::fmt(scales[k]),
                       t.to_string(),              std::to_string(t.active_count()),
                       io::fmt(f5),                io::fmt(r.mean_satisfied),
                       io::fmt(r.qos_pass_fraction), r.qos_pass ? "1" : "0",
                       io::fmt(r.mean_power_w)};
    };

    for (std::size_t k = 0; k < scales.size(); ++k) {
        const auto cfg = sim_config(sc.config, scales[k], options.threads);
        std::vector<double> pass(candidates.size(), std::nan(""));
        std::optional<sim::SimReport> chosen;
        for (auto i : visit_order(candidates, criterion)) {
            auto rep = sim::run_simulation(sc.model, schedule, sim::static_policy(candidates[i].topo), cfg, pm);
            pass[i] = rep.qos_pass_fraction;
            eval_rows.push_back(report_row(k, candidates[i].topo, candidates[i].f5, rep));
            if (rep.qos_pass_fraction >= cfg.target_qos) {
                chosen = std::move(rep);
                break;
            }
        }
        const Topology sel = sim::select_topology(candidates, pass, cfg.target_qos, criterion);
        const bool fallback = !chosen.has_value();
        if (fallback) chosen = sim::run_simulation(sc.model, schedule, sim::static_policy(sel), cfg, pm);
        sel_rows.push_back({io::fmt(mults[k]), io::fmt(scales[k]), sel.to_string(), std::to_string(sel.active_count()),
                            fallback ? "1" : "0", io::fmt(chosen->mean_satisfied), io::fmt(chosen->qos_pass_fraction),
                            chosen->qos_pass ? "1" : "0"});
        const std::string tag = "selected_v" + std::to_string(k);
        io::write_sim_trace_csv(options.out_dir / (tag + "_trace.csv"), stamp, *chosen);
        io::write_text(options.out_dir / (tag + "_summary.json"), io::sim_summary_json(stamp, *chosen));
    }
    io::write_csv(options.out_dir / "evaluation.csv", stamp, eval_header, eval_rows);
    io::write_csv(options.out_dir / "selection.csv", stamp, sel_header, sel_rows);
    std::printf("evaluated %zu volume points; selection in %s\n", scales.size(),
                (options.out_dir / "selection.csv").string().c_str());
    return 0;
}

int cmd_compare(const CommandOptions& options) {
    const auto sc = build_scenario(resolve_config(options));
    const auto rows = load_front(options, sc);
    const auto candidates = candidates_of(rows);
    const auto criterion = selection_criterion(sc.config);
    const auto schedule = build_schedule(sc);
    const auto scales = volume_scales(sc);
    const auto& mults = sc.config.simulation.volume_multipliers;
    const auto stamp = sc.stamp();
    const auto& pm = sc.config.power.model;
    const auto oracle = std::make_shared<const sim::CoverageOracle>(sc.model, sc.config.kappa_cov);
    std::filesystem::create_directories(options.out_dir);

    const io::Row header = {"scheme",      "volume_multiplier", "volume_scale", "mean_nac",
                            "mean_satisfied", "qos_pass_fraction", "qos_pass",  "transitions",
                            "handovers",   "handover_mass",     "mean_power_w"};
    std::vector<io::Row> out;
    auto add = [&](const std::string& scheme, std::size_t k, const sim::SimReport& r) {
        out.push_back({scheme, io::fmt(mults[k]), io::fmt(scales[k]), io::fmt(r.mean_nac), io::fmt(r.mean_satisfied),
                       io::fmt(r.qos_pass_fraction), r.qos_pass ? "1" : "0", io::fmt(r.transitions),
                       io::fmt(r.handovers), io::fmt(r.handover_mass), io::fmt(r.mean_power_w)});
    };

    for (std::size_t k = 0; k < scales.size(); ++k) {
        const auto cfg = sim_config(sc.config, scales[k], options.threads);
        // Offline pipeline: one topology per demand phase, chosen by simulating
        // that phase alone, then held for the whole phase.
        std::vector<Topology> per_phase;
        for (const auto& ph : schedule.phases)
            per_phase.push_back(sim::select_by_simulation(sc.model, sim::DemandSchedule::constant(ph.profile),
                                                          candidates, cfg, pm, criterion)
                                    .topo);
        sim::Policy proposed = [schedule, per_phase](const sim::Snapshot& s) {
            return per_phase[schedule.phase_at(s.time_s)];
        };
        add("proposed", k, sim::run_simulation(sc.model, schedule, proposed, cfg, pm));
        add("all_on", k,
            sim::run_simulation(sc.model, schedule, sim::static_policy(Topology::all_on(sc.model.num_cells())), cfg,
                                pm));
        for (auto b : sim::all_benchmarks())
            add(sim::to_string(b), k,
                sim::run_simulation(sc.model, schedule, sim::benchmark_policy(b, sc.model, oracle, sc.config.benchmarks),
                                    cfg, pm));
    }
    io::write_csv(options.out_dir / "compare.csv", stamp, header, out);
    std::printf("wrote %zu rows to %s\n", out.size(), (options.out_dir / "compare.csv").string().c_str());
    return 0;
}

int cmd_coverage_report(const CommandOptions& options) {
    const auto sc = build_scenario(resolve_config(options));
    const auto& cr = sc.config.coverage_report;
    const auto& radio = sc.config.network.radio;
    const std::size_t L = sc.model.num_cells();
    const std::size_t A = sc.model.num_pixels();
    const auto all = Topology::all_on(L);
    if (!(cr.candidate_window_db >= 0.0)) throw ConfigError("candidate_window_db must be nonnegative");

    // Central cell: the site closest to the middle of the area.
    const Point mid{sc.model.grid_cols() * sc.model.pixel_size_m() / 2.0,
                    sc.model.grid_rows() * sc.model.pixel_size_m() / 2.0};
    std::size_t central = 0;
    double best = INFINITY;
    for (std::size_t l = 0; l < L; ++l) {
        const auto& p = sc.model.cell_positions()[l];
        const double d = std::hypot(p.x - mid.x, p.y - mid.y);
        if (d < best) {
            best = d;
            central = l;
        }
    }

    const double window = db_to_linear(cr.candidate_window_db);
    std::vector<io::Row> table, hist;
    for (double p_dbm : cr.power_dbm) {
        const auto model = sc.model.with_powers(std::vector<double>(L, dbm_to_watt(p_dbm + radio.pilot_power_offset_db)),
                                                std::vector<double>(L, dbm_to_watt(p_dbm)));
        const auto cov = net::coverage(model, all);
        const auto rx = net::link_budget_coverage(model, all);
        std::size_t central_px = 0;
        double detectable = 0.0;
        std::vector<std::size_t> counts(L + 1, 0);
        const double pmin = model.radio().min_rx_power_w;
        for (std::size_t a = 0; a < A; ++a) {
            if (cov.covered(a) && cov.serving[a] == static_cast<std::int32_t>(central)) ++central_px;
            double top = 0.0;
            std::size_t det = 0;
            for (std::size_t l = 0; l < L; ++l) {
                const double r = model.pilot_rx(a, l);
                if (r > pmin) ++det;
                top = std::max(top, r);
            }
            detectable += static_cast<double>(det);
            std::size_t cand = 0;
            if (top > pmin)
                for (std::size_t l = 0; l < L; ++l) {
                    const double r = model.pilot_rx(a, l);
                    if (r > pmin && r * window >= top) ++cand;
                }
            ++counts[cand];
        }
        table.push_back({io::fmt(p_dbm), io::fmt(1.0 - cov.outage_fraction), io::fmt(1.0 - rx.outage_fraction),
                         io::fmt(static_cast<double>(central_px) / static_cast<double>(A)),
                         io::fmt(detectable / static_cast<double>(A))});
        for (std::size_t c = 0; c <= L; ++c)
            if (counts[c] > 0)
                hist.push_back({io::fmt(p_dbm), std::to_string(c), std::to_string(counts[c]),
                                io::fmt(static_cast<double>(counts[c]) / static_cast<double>(A))});
    }
    const auto stamp = sc.stamp();
    std::filesystem::create_directories(options.out_dir);
    io::write_csv(options.out_dir / "coverage_report.csv", stamp,
                  {"power_dbm", "covered_fraction", "rx_covered_fraction", "central_cell_fraction",
                   "mean_detectable_cells"},
                  table);
    io::write_csv(options.out_dir / "candidate_histogram.csv", stamp, {"power_dbm", "candidates", "pixels", "fraction"},
                  hist);
    std::printf("wrote %zu power points to %s\n", table.size(),
                (options.out_dir / "coverage_report.csv").string().c_str());
    return 0;
}

}  // namespace cso
