#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "grainkin/config.hpp"
#include "grainkin/errors.hpp"
#include "grainkin/experiments.hpp"
#include "grainkin/kernels.hpp"

int main(int argc, char** argv) {
    CLI::App app{"grainkin: inelastic Maxwell and hard-potential 1D kinetic experiments"};
    app.require_subcommand(1);

    app.add_subcommand("list", "List experiments and the keys they read")->callback([] {
        std::cout << grainkin::list_experiments();
    });

    std::string config_path;
    std::vector<std::string> overrides;
    bool quiet = false;
    CLI::App* run = app.add_subcommand("run", "Run one experiment");
    run->add_option("config", config_path, "Config file of `key = value` lines");
    run->add_option("--set", overrides, "Override a key (key=value); repeatable")->take_all();
    run->add_flag("-q,--quiet", quiet, "Do not print the report");

    int status = 0;
    run->callback([&] {
        grainkin::kernels::configure_threads();
        std::string text;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) {
                std::cerr << "grainkin: cannot read " << config_path << '\n';
                status = 1;
                return;
            }
            std::ostringstream buf;
            buf << in.rdbuf();
            text = buf.str();
        }
        grainkin::ExperimentConfig cfg;
        try {
            cfg = grainkin::parse_config(text, overrides);
        } catch (const grainkin::ConfigError& e) {
            std::cerr << "grainkin: configuration error (" << e.key() << "): " << e.what() << '\n';
            status = 1;
            return;
        }
        status = grainkin::run(cfg);
        if (!quiet && status != 1) {
            std::ifstream report(cfg.output_dir + "/report.csv");
            std::cout << report.rdbuf();
        }
    });

    CLI11_PARSE(app, argc, argv);
    return status;
}
