// Command-line front end for the overlap-signal eigensolver toolkit.
//
// Subcommands:
//   generate  write overlap-signal CSVs for every (eps, seed) cell
//   run       execute a scenario with a single (eps, delta, seed) cell
//   sweep     execute the full (method, eps, delta, seed) grid
//   compare   run >= 2 methods on a single (eps, delta, seed) cell
//
// Exit codes: 0 success, 1 configuration error, 2 partial numerical
// failures (the report is still written).

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "odmd/report.hpp"
#include "odmd/scenario.hpp"
#include "odmd/signal.hpp"
#include "odmd/spectrum_io.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string out_dir = "out";
    std::int64_t seed_override = -1;
    std::string formats = "csv";
    int threads = 1;
};

void add_common(CLI::App* cmd, CommonOpts& opts, bool with_formats = true) {
    cmd->add_option("--config", opts.config_path, "Scenario config file")->required();
    cmd->add_option("--out", opts.out_dir, "Output directory");
    cmd->add_option("--seed-override", opts.seed_override, "Replace the config seed list");
    if (with_formats)
        cmd->add_option("--formats", opts.formats, "Comma list of csv,svg (default csv)");
    cmd->add_option("--threads", opts.threads, "Worker threads for independent cells")
        ->check(CLI::PositiveNumber);
}

odmd::ScenarioConfig load_config(const CommonOpts& opts) {
    odmd::ScenarioConfig cfg = odmd::load_scenario_config(opts.config_path);
    if (opts.seed_override >= 0) {
        cfg.seeds.clear();
        cfg.seeds.push_back(static_cast<std::uint64_t>(opts.seed_override));
    }
    return cfg;
}

void require_single_cell(const odmd::ScenarioConfig& cfg, const char* sub) {
    if (cfg.eps_list.size() != 1 || cfg.seeds.size() != 1 || cfg.delta_list.size() > 1)
        throw odmd::validation_error(std::string(sub) +
                                     " expects a single (eps, delta, seed) cell; use `sweep` "
                                     "for grids");
}

int emit_and_report(const odmd::SweepReport& report, const CommonOpts& opts) {
    const bool svg = opts.formats.find("svg") != std::string::npos;
    const bool csv = opts.formats.find("csv") != std::string::npos;
    const odmd::FileManifest manifest = odmd::emit_report(report, opts.out_dir, csv, svg);
    std::cout << "wrote " << manifest.files.size() + 1 << " files to " << opts.out_dir << '\n';

    bool partial = false;
    for (const auto& cell : report.cells) partial = partial || cell.failed;
    if (partial) std::cerr << "warning: some cells failed numerically; see aggregate.csv\n";
    return partial ? 2 : 0;
}

int cmd_generate(const CommonOpts& opts) {
    const odmd::ScenarioConfig cfg = load_config(opts);

    namespace fs = std::filesystem;
    fs::create_directories(opts.out_dir);

    odmd::SpectralModel model;
    switch (cfg.system) {
        case odmd::ScenarioConfig::SystemKind::heisenberg: {
            const auto h = odmd::build_heisenberg(cfg.sites, cfg.coupling, cfg.periodic);
            const auto ref = odmd::neel_reference(cfg.sites, cfg.reference);
            model = odmd::spectral_decompose(h, ref);
            break;
        }
        case odmd::ScenarioConfig::SystemKind::spectrum_file:
            model = odmd::load_spectrum(cfg.spectrum_path);
            break;
        case odmd::ScenarioConfig::SystemKind::synthetic: {
            model.energies = cfg.levels;
            model.probabilities = cfg.level_probabilities;
            model.label = cfg.label;
            break;
        }
    }
    model = odmd::prune_small(model, 1e-14);
    const double dt = cfg.dt_auto && model.spectral_range() > 0.0
                          ? odmd::choose_timestep(model.ground_energy(), model.top_energy(),
                                                  cfg.dt_auto_c)
                          : (cfg.dt_auto ? 1.0 : cfg.dt);
    const odmd::OverlapSignal clean = odmd::generate_overlap(model, dt, cfg.max_steps);

    int written = 0;
    for (double eps : cfg.eps_list)
        for (std::uint64_t seed : cfg.seeds) {
            odmd::OverlapSignal sig =
                eps > 0.0 ? odmd::add_gaussian_noise(clean, eps, seed) : clean;
            std::ostringstream name;
            name << "signal_eps" << eps << "_seed" << seed << ".csv";
            std::ofstream out(fs::path(opts.out_dir) / name.str(), std::ios::binary);
            if (!out) throw odmd::io_error("cannot write " + name.str());
            odmd::write_signal_csv(sig, out);
            ++written;
        }
    std::cout << "wrote " << written << " signal files to " << opts.out_dir << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Overlap-signal ground-state eigensolver toolkit"};
    app.require_subcommand(1);

    CommonOpts gen_opts, run_opts, sweep_opts, cmp_opts;
    CLI::App* gen = app.add_subcommand("generate", "Write overlap-signal CSVs only");
    add_common(gen, gen_opts, false);
    CLI::App* run = app.add_subcommand("run", "Run one scenario cell");
    add_common(run, run_opts);
    CLI::App* sweep = app.add_subcommand("sweep", "Run the full scenario grid");
    add_common(sweep, sweep_opts);
    CLI::App* cmp = app.add_subcommand("compare", "Run several methods on one cell");
    add_common(cmp, cmp_opts);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        if (gen->parsed()) return cmd_generate(gen_opts);
        if (run->parsed()) {
            const odmd::ScenarioConfig cfg = load_config(run_opts);
            require_single_cell(cfg, "run");
            return emit_and_report(odmd::run_scenario(cfg, run_opts.threads), run_opts);
        }
        if (sweep->parsed()) {
            const odmd::ScenarioConfig cfg = load_config(sweep_opts);
            return emit_and_report(odmd::run_scenario(cfg, sweep_opts.threads), sweep_opts);
        }
        if (cmp->parsed()) {
            const odmd::ScenarioConfig cfg = load_config(cmp_opts);
            require_single_cell(cfg, "compare");
            if (cfg.methods.size() < 2)
                throw odmd::validation_error("compare needs at least two methods");
            return emit_and_report(odmd::run_scenario(cfg, cmp_opts.threads), cmp_opts);
        }
    } catch (const odmd::validation_error& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const odmd::io_error& e) {
        std::cerr << "io error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
