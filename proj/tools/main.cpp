#include "phaselab/scenario.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <exception>
#include <string>

int main(int argc, char** argv) {
    CLI::App app{"phaselab - phase decomposition and holonomy experiments"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = "results";
    std::string format_name = "json-lines";
    bool quiet = false;

    CLI::App* run = app.add_subcommand("run", "run a scenario config");
    run->add_option("config", config_path, "scenario config file")
        ->required()
        ->check(CLI::ExistingFile);
    run->add_option("--out", out_dir, "output directory (default: results)");
    run->add_option("--format", format_name, "json-lines or csv")
        ->check(CLI::IsMember({"json-lines", "csv"}));
    run->add_flag("--quiet", quiet, "suppress progress output");

    CLI11_PARSE(app, argc, argv);

    try {
        const phaselab::ScenarioConfig config =
            phaselab::load_scenario_config(config_path);
        const auto records = phaselab::run_scenario(config);
        const phaselab::EmitFormat format = format_name == "csv"
                                                ? phaselab::EmitFormat::Csv
                                                : phaselab::EmitFormat::JsonLines;
        const std::string written =
            phaselab::write_results(records, config, out_dir, format);

        bool all_pass = true;
        int checked = 0;
        for (const auto& record : records) {
            if (record.pass.has_value()) {
                ++checked;
                if (!*record.pass) all_pass = false;
            }
        }
        if (!quiet) {
            std::printf("%s: %zu record(s) -> %s\n", config.id.c_str(), records.size(),
                        written.c_str());
            double total_ms = 0.0;
            for (const auto& record : records) total_ms += record.wall_ms;
            std::fprintf(stderr, "total compute time: %.1f ms\n", total_ms);
            if (checked > 0) {
                std::printf("expectations: %s (%d record(s) checked)\n",
                            all_pass ? "pass" : "FAIL", checked);
            }
        }
        return all_pass ? 0 : 1;
    } catch (const std::exception& error) {
        std::fprintf(stderr, "error: %s\n", error.what());
        return 2;
    }
}
