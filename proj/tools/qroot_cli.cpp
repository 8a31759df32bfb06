// Batch experiment runner.
//   qroot_cli --config run.json [--out dir] [--seed s] [--eps e]
//   qroot_cli --suite dissect-logn [--out dir] [--seed s]

#include "qroot/harness.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"qroot batch experiment runner"};
    std::string config_path, out_dir, suite;
    std::uint64_t seed = 0;
    double eps = 0.0;
    app.add_option("--config", config_path, "experiment config (JSON)")->check(CLI::ExistingFile);
    auto* out_opt = app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "64-bit seed");
    auto* eps_opt = app.add_option("--eps", eps, "tolerance override")->check(CLI::PositiveNumber);
    app.add_option("--suite", suite, "scaling suite name");
    CLI11_PARSE(app, argc, argv);

    qroot::configure_logging();
    if (config_path.empty() && suite.empty()) {
        std::cerr << "qroot_cli: need --config or --suite\n" << app.help();
        return qroot::kExitConfigError;
    }

    qroot::ExperimentConfig cfg;
    try {
        if (!config_path.empty()) {
            const std::filesystem::path p = config_path;
            cfg = qroot::config_from_json(qroot::load_json_file(p), p.parent_path());
        }
    } catch (const qroot::ConfigError& e) {
        std::cerr << "qroot_cli: " << e.what() << '\n';
        return qroot::kExitConfigError;
    }
    if (!suite.empty()) {
        if (!config_path.empty() && cfg.command != qroot::Command::Scaling) {
            std::cerr << "qroot_cli: --suite applies only to the scaling command\n";
            return qroot::kExitConfigError;
        }
        cfg.command = qroot::Command::Scaling;
        cfg.suite = suite;
    }
    if (*out_opt) cfg.out_dir = out_dir;
    if (*seed_opt) cfg.seed = seed;
    if (*eps_opt) cfg.eps = eps;

    const qroot::RunResult r = qroot::run(cfg);
    if (r.status != 0) {
        std::cerr << "qroot_cli: " << r.message << '\n';
        return r.status;
    }
    for (const auto& p : r.artifacts) std::cout << p.string() << '\n';
    return 0;
}
