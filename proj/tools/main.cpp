#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pursuit/plot.hpp"
#include "pursuit/run.hpp"

namespace {

int verbosity() {
    const char* v = std::getenv("PURSUIT_VERBOSE");
    return v ? std::atoi(v) : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Closed-loop UAS ground-vehicle pursuit workbench"};
    app.require_subcommand(1);

    // run
    auto* run_cmd = app.add_subcommand("run", "Execute a scenario closed loop");
    std::string scenario_path, mode_str = "vision", out_dir = "out";
    std::uint64_t seed = 1;
    bool dump_frames = false;
    double duration_override = -1.0, dt_override = -1.0;
    run_cmd->add_option("--scenario", scenario_path, "Scenario JSON file")->required();
    run_cmd->add_option("--mode", mode_str, "vision | truth")
        ->check(CLI::IsMember({"vision", "truth"}));
    run_cmd->add_option("--seed", seed, "RNG seed");
    run_cmd->add_option("--out", out_dir, "Output directory")->required();
    run_cmd->add_flag("--dump-frames", dump_frames, "Write PNG frame dumps");
    run_cmd->add_option("--duration", duration_override, "Override scenario duration (s)");
    run_cmd->add_option("--dt", dt_override, "Override scenario time step (s)");

    // plot
    auto* plot_cmd = app.add_subcommand("plot", "Render chart panels from a run log");
    std::string log_path, plot_out;
    plot_cmd->add_option("--log", log_path, "run.csv produced by `run`")->required();
    plot_cmd->add_option("--out", plot_out, "Output directory")->required();

    // compare
    auto* cmp_cmd = app.add_subcommand("compare", "Field-wise diff of two run logs");
    std::string cmp_a, cmp_b;
    cmp_cmd->add_option("--log", cmp_a, "Candidate log CSV")->required();
    cmp_cmd->add_option("--golden", cmp_b, "Golden log CSV")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run_cmd) {
            pursuit::RunConfig cfg;
            cfg.scenario = pursuit::load_scenario(scenario_path);
            cfg.mode = mode_str == "truth" ? pursuit::RunMode::Truth : pursuit::RunMode::Vision;
            cfg.seed = seed;
            cfg.out_dir = out_dir;
            cfg.dump_frames = dump_frames;
            if (duration_override > 0.0) cfg.scenario.duration = duration_override;
            if (dt_override > 0.0) {
                cfg.scenario.dt = dt_override;
                cfg.scenario.filter.dt = dt_override;
            }
            if (verbosity() > 0)
                std::cerr << "running " << cfg.scenario.name << " (" << mode_str << ", seed "
                          << seed << ", " << cfg.scenario.duration << " s)\n";
            const pursuit::CsvTable log = pursuit::run(cfg);
            if (verbosity() > 0)
                std::cerr << "wrote " << log.rows.size() << " rows to " << out_dir
                          << "/run.csv\n";
            return 0;
        }
        if (*plot_cmd) {
            const pursuit::CsvTable log = pursuit::read_csv(log_path);
            const int n = pursuit::emit_plots(log, plot_out);
            if (verbosity() > 0) std::cerr << "wrote " << n << " panels to " << plot_out << "\n";
            return 0;
        }
        if (*cmp_cmd) {
            const pursuit::CsvTable a = pursuit::read_csv(cmp_a);
            const pursuit::CsvTable b = pursuit::read_csv(cmp_b);
            const pursuit::CompareReport rep = pursuit::compare_tables(a, b);
            std::cout << pursuit::format_report(rep);
            return rep.identical ? 0 : 1;
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
