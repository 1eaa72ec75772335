// bhl — exact-diagonalization laboratory for the truncated Bose-Hubbard model.
// Subcommands: verify (invariant suite), scan (parameter sweeps), spectrum
// (eigenvalue dump), version.

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "bhl/config.hpp"
#include "bhl/suite.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> jobs;
};

bhl::RunConfig resolve_config(const CommonFlags& flags) {
    bhl::RunConfig cfg = flags.config_path.empty() ? bhl::RunConfig{}
                                                   : bhl::load_config(flags.config_path);
    // precedence: flag > file > default
    if (flags.seed) cfg.seed = *flags.seed;
    if (flags.jobs) cfg.jobs = *flags.jobs;
    if (!flags.out_dir.empty()) cfg.output_dir = flags.out_dir;
    cfg.validate();
    return cfg;
}

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "JSON config file");
    cmd->add_option("--out", flags.out_dir, "output directory (overrides config)");
    cmd->add_option("--seed", flags.seed, "random seed (overrides config)");
    cmd->add_option("--jobs", flags.jobs, "worker threads; 1 = fully serial");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact-diagonalization laboratory for the truncated Bose-Hubbard model"};
    app.require_subcommand(1);

    CommonFlags verify_flags, scan_flags, spectrum_flags;
    std::string scan_kind;

    CLI::App* verify = app.add_subcommand("verify", "run the full invariant suite");
    add_common(verify, verify_flags);

    CLI::App* scan = app.add_subcommand("scan", "run a parameter scan");
    add_common(scan, scan_flags);
    scan->add_option("--kind", scan_kind, "condensation | density | convergence | ksum")
        ->required();

    CLI::App* spectrum = app.add_subcommand("spectrum", "dump the eigenvalue spectrum");
    add_common(spectrum, spectrum_flags);

    app.add_subcommand("version", "print the tool version");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("version")) {
            std::printf("bhl %s\n", bhl::tool_version);
            return 0;
        }
        if (app.got_subcommand("verify")) {
            const bhl::RunConfig cfg = resolve_config(verify_flags);
            const auto suite = bhl::run_verify(cfg, cfg.output_dir);
            for (const auto& c : suite.checks)
                std::printf("%-26s %-12s min_slack=%- .6e rows=%zu t=%.2fs\n", c.name.c_str(),
                            c.status.c_str(), c.min_slack, c.rows, c.seconds);
            std::printf("overall: %s\n", suite.overall_pass() ? "pass" : "fail");
            return suite.overall_pass() ? 0 : 1;
        }
        if (app.got_subcommand("scan")) {
            const bhl::RunConfig cfg = resolve_config(scan_flags);
            if (scan_kind == "condensation") bhl::run_condensation_scan(cfg, cfg.output_dir);
            else if (scan_kind == "density") bhl::run_density_scan(cfg, cfg.output_dir);
            else if (scan_kind == "convergence") bhl::run_convergence_scan(cfg, cfg.output_dir);
            else if (scan_kind == "ksum") bhl::run_ksum_scan(cfg, cfg.output_dir);
            else throw bhl::validation_error("unknown scan kind: " + scan_kind);
            std::printf("scan '%s' written to %s\n", scan_kind.c_str(), cfg.output_dir.c_str());
            return 0;
        }
        if (app.got_subcommand("spectrum")) {
            const bhl::RunConfig cfg = resolve_config(spectrum_flags);
            bhl::run_spectrum_dump(cfg, cfg.output_dir);
            std::printf("spectrum written to %s\n", cfg.output_dir.c_str());
            return 0;
        }
    } catch (const bhl::validation_error& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 2;
    } catch (const bhl::error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
