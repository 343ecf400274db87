#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "clilib/config.hpp"
#include "clilib/csv.hpp"
#include "clilib/runner.hpp"

int main(int argc, char** argv)
{
    CLI::App app{"fidmem: broadband photon-storage simulator and optimizer"};
    app.require_subcommand(1);

    std::string config_file, out_dir;
    bool dense = false;
    int workers = -1, fig_id = -1;
    double tol = -1.0;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_file, "configuration file (key = value lines)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_flag("--dense", dense, "publication-density sweeps");
        sub->add_option("--workers", workers, "sweep worker count (0 = all cores)");
        sub->add_option("--tol", tol, "iteration tolerance");
    };

    const char* mode_names[] = {"analytic", "simulate", "optimize-duration",
                                "optimize-shape", "feasibility", "figure"};
    for (const char* m : mode_names) {
        auto* sub = app.add_subcommand(m);
        add_common(sub);
        if (std::string(m) == "figure")
            sub->add_option("--id", fig_id, "figure number (2..6)");
    }

    CLI11_PARSE(app, argc, argv);
    const std::string mode_str = app.get_subcommands().front()->get_name();

    try {
        fidmem::cli::KeyValues kv;
        if (!config_file.empty())
            kv = fidmem::cli::KeyValues::from_file(config_file);
        // flags win over file keys
        if (!out_dir.empty())
            kv.set("out", out_dir);
        if (dense)
            kv.set("dense", "true");
        if (workers >= 0)
            kv.set("workers", std::to_string(workers));
        if (tol > 0.0)
            kv.set("tol", fidmem::cli::format_double(tol));
        if (fig_id >= 0)
            kv.set("figure.id", std::to_string(fig_id));

        const auto mode = fidmem::cli::parse_mode(mode_str);
        const auto config = fidmem::cli::RunConfig::build(mode, kv);
        if (config.mode == fidmem::cli::Mode::Figure && config.figure_id == 0)
            throw fidmem::cli::ConfigError("figure mode requires --id or figure.id");
        return fidmem::cli::run(config);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return fidmem::cli::kExitConfig;
    }
}
