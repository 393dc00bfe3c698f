#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "rydgate/config.hpp"

// Batch front-end: reads a JSON run configuration, validates it against the
// published schema and dispatches the requested task. Artifacts (CSV/JSON
// plus a checksummed manifest) land in the output directory; completed sweep
// points are skipped on --resume.
int main(int argc, char** argv) {
    CLI::App app{"rydgate - adiabatic Rydberg-dressing gate simulator"};

    std::string config_path;
    std::string out_dir;
    int workers = 0;
    bool resume = false;
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--workers", workers,
                   "worker threads (default: config, RYDGATE_WORKERS, or hardware)");
    app.add_flag("--resume", resume, "skip sweep points already in the result store");

    CLI11_PARSE(app, argc, argv);

    nlohmann::json config;
    {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "error: cannot open config " << config_path << "\n";
            return 1;
        }
        try {
            in >> config;
        } catch (const std::exception& e) {
            std::cerr << "error: config is not valid JSON: " << e.what() << "\n";
            return 1;
        }
    }

    rydgate::RunOverrides overrides;
    if (!out_dir.empty()) overrides.out = out_dir;
    if (workers > 0) overrides.workers = workers;
    overrides.resume = resume;

    try {
        const int status = rydgate::run_task(config, overrides);
        if (status == 2) std::cerr << "warning: some sweep points failed (see manifest/results)\n";
        if (status == 3) std::cerr << "error: all sweep points failed\n";
        return status;
    } catch (const rydgate::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}
