#include <cstdio>
#include <exception>
#include <string>

#include "CLI11.hpp"
#include "cso/commands.hpp"
#include "cso/coupling.hpp"

namespace {

enum Exit { kOk = 0, kOther = 1, kConfig = 2, kInfeasible = 3, kNonConvergence = 4 };

void add_common(CLI::App* cmd, cso::CommandOptions& o, std::string& ici, std::string& objectives,
                std::vector<double>& volumes, std::uint64_t& seed) {
    cmd->add_option("--config", o.config_path, "Scenario config (JSON); defaults apply when omitted");
    cmd->add_option("--seed", seed, "Seed for optimization and simulation");
    cmd->add_option("--threads", o.threads, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out_dir, "Output directory");
    cmd->add_option("--volume-multipliers", volumes, "Traffic volume sweep")->delimiter(',');
    cmd->add_option("--ici", ici, "Interference model for load and simulation")
        ->check(CLI::IsMember({"fl", "lc"}));
    cmd->add_option("--objectives", objectives, "Objective pair")
        ->check(CLI::IsMember({"f1f2", "f1f3", "f1f4", "f5f6"}));
    cmd->add_flag("--normalize-demand,!--no-normalize-demand", "Normalize or reject an unnormalized demand grid");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Multiobjective cell switch-off toolkit"};
    app.require_subcommand(1);

    cso::CommandOptions opt;
    std::string ici, objectives;
    std::vector<double> volumes;
    std::uint64_t seed = 0;

    auto* generate = app.add_subcommand("generate", "Build the scenario and export G and the demand grid");
    auto* optimize = app.add_subcommand("optimize", "Compute a Pareto front of topologies");
    auto* evaluate = app.add_subcommand("evaluate", "Simulate front members and select one per volume");
    auto* compare = app.add_subcommand("compare", "Compare the offline selection with snapshot benchmarks");
    auto* coverage = app.add_subcommand("coverage-report", "Coverage versus transmit power");
    for (auto* cmd : {generate, optimize, evaluate, compare, coverage})
        add_common(cmd, opt, ici, objectives, volumes, seed);
    optimize->add_option("--algorithm", opt.algorithm, "moea or mda")->check(CLI::IsMember({"moea", "mda"}));
    optimize->add_flag("--exhaustive", opt.exhaustive, "Also enumerate all topologies (L <= 20)");
    for (auto* cmd : {evaluate, compare}) cmd->add_option("--front", opt.front_path, "Front CSV (default <out>/front.csv)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    CLI::App* cmd = app.get_subcommands().front();
    if (cmd->count("--seed")) opt.seed = seed;
    if (cmd->count("--ici")) opt.ici = ici;
    if (cmd->count("--objectives")) opt.objectives = objectives;
    if (cmd->count("--volume-multipliers")) opt.volume_multipliers = volumes;
    if (cmd->count("--normalize-demand") || cmd->count("--no-normalize-demand"))
        opt.normalize_demand = cmd->get_option("--normalize-demand")->as<bool>();

    try {
        if (cmd == generate) return cso::cmd_generate(opt);
        if (cmd == optimize) return cso::cmd_optimize(opt);
        if (cmd == evaluate) return cso::cmd_evaluate(opt);
        if (cmd == compare) return cso::cmd_compare(opt);
        return cso::cmd_coverage_report(opt);
    } catch (const cso::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return kConfig;
    } catch (const cso::FormatError& e) {
        std::fprintf(stderr, "format error: %s\n", e.what());
        return kConfig;
    } catch (const cso::DimensionError& e) {
        std::fprintf(stderr, "dimension error: %s\n", e.what());
        return kConfig;
    } catch (const cso::InfeasibleError& e) {
        std::fprintf(stderr, "infeasible: %s\n", e.what());
        return kInfeasible;
    } catch (const cso::coupling::NonConvergenceError& e) {
        std::fprintf(stderr, "no convergence: %s\n", e.what());
        return kNonConvergence;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kOther;
    }
}
