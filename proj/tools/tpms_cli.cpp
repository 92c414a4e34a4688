#include "tpms/pipeline/pipeline.hpp"

#include <CLI11.hpp>

#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace pl = tpms::pipeline;

namespace {

struct Flags {
    std::string config;
    std::optional<std::string> out;
    std::optional<unsigned long long> seed;
    std::optional<unsigned> jobs;
    std::optional<std::string> dataset;
    std::vector<std::string> overrides;
    bool quiet = false;
};

void add_common(CLI::App* cmd, Flags& f)
{
    cmd->add_option("--config", f.config, "key = value configuration file");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_option("--seed", f.seed, "global seed (seeded shape factors, insertion order)");
    cmd->add_option("--jobs", f.jobs, "worker threads");
    cmd->add_option("--set", f.overrides, "override one config key, e.g. --set grid=32")->take_all();
    cmd->add_flag("--quiet,-q", f.quiet, "only print warnings and errors");
}

pl::RunConfig build_config(const Flags& f)
{
    pl::RunConfig cfg;
    if (!f.config.empty())
        cfg = pl::load_config(f.config);
    for (const auto& kv : f.overrides) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos)
            throw pl::ConfigError("--set expects key=value, got '" + kv + "'");
        pl::set_option(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    if (f.out)
        cfg.out = *f.out;
    if (f.seed)
        cfg.seed = *f.seed;
    if (f.jobs)
        cfg.jobs = *f.jobs;
    if (f.dataset)
        cfg.dataset = *f.dataset;
    cfg.quiet = cfg.quiet || f.quiet;
    return cfg;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"TPMS porosity / persistent homology / regression pipeline"};
    app.require_subcommand(1);
    Flags flags;

    const char* help[] = {
        "sample each field and write field.grid and points.csv per (family, d)",
        "voxel porosity per unit, refresh dataset.csv",
        "filtration and persistence diagram per unit",
        "persistence entropy per unit, refresh dataset.csv",
        "cross-validated degree sweeps on dataset.csv",
        "fit the embedded reference data and compare with the reference tables",
        "generate, porosity, persistence, entropy and fit",
    };
    for (std::size_t i = 0; i < pl::kCommands.size(); ++i) {
        auto* cmd = app.add_subcommand(std::string(pl::kCommands[i]), help[i]);
        add_common(cmd, flags);
        if (pl::kCommands[i] == "fit")
            cmd->add_option("--dataset", flags.dataset, "dataset to fit (default <out>/dataset.csv)");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return pl::kConfigError;
    }

    pl::RunConfig cfg;
    try {
        cfg = build_config(flags);
    } catch (const pl::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return pl::kConfigError;
    }
    return pl::run_command(app.get_subcommands().front()->get_name(), cfg);
}
