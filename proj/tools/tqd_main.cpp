// Command-line runner: loads a key=value config, executes the requested
// scenario, and writes CSV traces plus a summary report.

#include <exception>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "tqd/tqd.hpp"

namespace {

struct CommonArgs {
    std::string config_path;
    std::string out_dir = "out";
    int grid = 0;   // 0 = from config
    long steps = 0;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "key=value config file")
        ->required();
    cmd->add_option("--out", args.out_dir, "output directory");
    cmd->add_option("--grid", args.grid, "trace samples on [0, tf]");
    cmd->add_option("--steps", args.steps, "propagation steps");
}

tqd::Scenario make_scenario(const CommonArgs& args) {
    tqd::Config cfg = tqd::load_config(args.config_path);
    if (args.grid > 0) cfg.grid = args.grid;
    if (args.steps > 0) cfg.steps = static_cast<int>(args.steps);
    return tqd::Scenario::from_config(cfg, args.out_dir);
}

void print_summary(const tqd::RunReport& report) {
    for (const auto& s : report.scenarios)
        std::cout << s.scenario << ": P1_final = " << tqd::fmt_g9(s.P1_final)
                  << ", max_eta = " << tqd::fmt_g9(s.max_eta) << "\n";
    if (report.calibration) {
        const auto& c = *report.calibration;
        if (c.feasible)
            std::cout << "calibration: U0_meV = " << tqd::fmt_g9(c.ansatz.U0_meV)
                      << ", a1 = " << tqd::fmt_g9(c.ansatz.a1)
                      << ", w1 = " << tqd::fmt_g9(c.ansatz.w1)
                      << ", a2 = " << tqd::fmt_g9(c.ansatz.a2)
                      << ", w2 = " << tqd::fmt_g9(c.ansatz.w2)
                      << ", P1_reference = " << tqd::fmt_g9(c.p1_reference)
                      << ", max_abs_EyD_Vpm = " << tqd::fmt_g9(c.max_abs_EyD)
                      << "\n";
        else
            std::cout << "calibration: infeasible in search box\n";
    }
    for (const auto& row : report.sweep)
        std::cout << "sweep k=" << tqd::fmt_g9(row.k)
                  << ": P1_reference = " << tqd::fmt_g9(row.P1_reference)
                  << ", P1_cd = " << tqd::fmt_g9(row.P1_cd) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"transitionless-driving pulse synthesis and simulation"};
    app.require_subcommand(1);

    CommonArgs run_args, cal_args, sweep_args;
    std::string scenario_flag;

    CLI::App* run = app.add_subcommand("run", "run a named scenario");
    add_common(run, run_args);
    run->add_option("--scenario", scenario_flag,
                    "reference|counterdiabatic|rotated|sweep_tf|calibrate "
                    "(overrides config)");

    CLI::App* cal = app.add_subcommand("calibrate",
                                       "search the ansatz box for the "
                                       "reported working point");
    add_common(cal, cal_args);

    CLI::App* sweep = app.add_subcommand("sweep",
                                         "stretch tf by k=1..8 and tabulate");
    add_common(sweep, sweep_args);

    CLI11_PARSE(app, argc, argv);

    try {
        tqd::Scenario s;
        if (run->parsed()) {
            s = make_scenario(run_args);
            if (!scenario_flag.empty()) s.name = scenario_flag;
        } else if (cal->parsed()) {
            s = make_scenario(cal_args);
            s.name = "calibrate";
        } else {
            s = make_scenario(sweep_args);
            s.name = "sweep_tf";
        }
        const tqd::RunReport report = tqd::run_scenario(s);
        print_summary(report);
        std::cout << "artifacts written to " << s.output_dir << "\n";
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
