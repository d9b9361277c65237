#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "commands.hpp"

int main(int argc, char** argv)
{
    using namespace ksbox::cli;

    CLI::App app{"KS boxes, PR boxes and n-cycle inequalities"};
    app.require_subcommand(1);
    app.fallthrough();

    RunConfig cfg;
    std::string format;
    app.add_option("--seed", cfg.seed, "seed for Monte Carlo streams");
    app.add_option("--format", format, "output format")->check(CLI::IsMember({"json", "csv"}));
    app.add_option("-o,--output", cfg.output, "write to file instead of standard output");
    app.add_flag("--exact", cfg.exact, "exact rational arithmetic");

    BoxArgs box;
    auto* box_cmd = app.add_subcommand("box", "construct a KS_p or PR box and check it");
    box_cmd->add_option("kind", box.kind, "ks | pr")->required()->check(CLI::IsMember({"ks", "pr"}));
    box_cmd->add_option("--n", box.n, "number of inputs per party")->required();
    box_cmd->add_option("--p", box.p, "marginal probability of output 1 (decimal or num/den)");

    SimChartsArgs charts;
    auto* sim_cmd = app.add_subcommand("sim", "classical simulation");
    sim_cmd->require_subcommand(1);
    auto* charts_cmd = sim_cmd->add_subcommand("charts", "optimal chart mixture for KS_p");
    charts_cmd->add_option("--n", charts.n, "KS dimension N")->required();
    charts_cmd->add_option("--p", charts.p, "marginal p")->required();
    charts_cmd->add_option("--rounds", charts.rounds, "Monte Carlo rounds (0 = skip)");

    IneqArgs ineq;
    auto* ineq_cmd = app.add_subcommand("ineq", "odd-cycle (kcbs) or even-cycle (chained) inequality");
    ineq_cmd->add_option("kind", ineq.kind, "kcbs | chained")->required()->check(CLI::IsMember({"kcbs", "chained"}));
    ineq_cmd->add_option("--n", ineq.n, "cycle length")->required();
    ineq_cmd->add_option("--rho", ineq.rho_file, "density-matrix JSON file");

    CvArgs cv;
    auto* cv_cmd = app.add_subcommand("cv", "packet-lattice chained value");
    cv_cmd->add_option("--n", cv.n, "even cycle length")->required();
    cv_cmd->add_option("--M", cv.packets, "packets per parity class")->required();

    ReduceArgs reduce;
    auto* reduce_cmd = app.add_subcommand("reduce", "PR box from KS_{1/2} box");
    reduce_cmd->add_option("--n", reduce.n, "PR dimension")->required();
    reduce_cmd->add_option("--rounds", reduce.rounds, "Monte Carlo rounds (0 = skip)");

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "parameter sweeps as CSV");
    sweep_cmd->add_option("--what", sweep.what, "optimal-sim | kcbs-threshold | chained-gap | ks-thresholds")->required();
    sweep_cmd->add_option("--n-min", sweep.n_min, "first n (or N)");
    sweep_cmd->add_option("--n-max", sweep.n_max, "last n (or N)");
    sweep_cmd->add_option("--p-steps", sweep.p_steps, "optimal-sim: p = k/100 for k <= p-steps");
    sweep_cmd->add_option("--rounds", sweep.rounds, "optimal-sim: Monte Carlo rounds per row");

    CLI11_PARSE(app, argc, argv);

    if (format == "csv" || (format.empty() && sweep_cmd->parsed()))
        cfg.format = Format::csv;

    std::ofstream file;
    if (!cfg.output.empty()) {
        file.open(cfg.output);
        if (!file) {
            std::cerr << "error: cannot open output file '" << cfg.output << "'\n";
            return 2;
        }
    }
    std::ostream& out = cfg.output.empty() ? std::cout : file;

    try {
        if (box_cmd->parsed()) return cmd_box(cfg, box, out);
        if (charts_cmd->parsed()) return cmd_sim_charts(cfg, charts, out);
        if (ineq_cmd->parsed()) return cmd_inequality(cfg, ineq, out);
        if (cv_cmd->parsed()) return cmd_cv(cfg, cv, out);
        if (reduce_cmd->parsed()) return cmd_reduce(cfg, reduce, out);
        if (sweep_cmd->parsed()) return cmd_sweep(cfg, sweep, out);
    } catch (const ksbox::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
