#include <iostream>

#include "CLI11.hpp"

#include "koitervi/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"obstacle problems for elliptic membrane and Koiter shells"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    const char* commands[] = {"solve-membrane", "solve-koiter", "sweep",
                              "korn",           "probe",        "geometry-check"};
    for (const char* name : commands) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--config", config_path, "path to the run config")->required();
        sub->add_option("--out", out_dir, "output directory (default: current)");
    }

    CLI11_PARSE(app, argc, argv);

    std::string command = app.get_subcommands().front()->get_name();
    try {
        koitervi::RunConfig cfg = koitervi::load_config(config_path);
        return koitervi::run_command(command, cfg, out_dir);
    } catch (const koitervi::ConfigError& e) {
        std::cerr << "error: config: " << e.what() << "\n";
        return 2;
    }
}
