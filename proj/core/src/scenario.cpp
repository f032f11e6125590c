#include "odmd/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include "odmd/spectrum_io.hpp"

namespace odmd {

std::string method_name(Method m) {
    switch (m) {
        case Method::odmd: return "odmd";
        case Method::odmd_real: return "odmd_real";
        case Method::uvqpe: return "uvqpe";
        case Method::vqpe: return "vqpe";
        case Method::qcels: return "qcels";
        case Method::esprit: return "esprit";
        case Method::prony: return "prony";
    }
    return "?";
}

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, ',')) {
        cur = trim(cur);
        if (!cur.empty()) out.push_back(cur);
    }
    return out;
}

bool parse_double(const std::string& s, double& out) {
    try {
        std::size_t pos = 0;
        out = std::stod(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

bool parse_u64(const std::string& s, std::uint64_t& out) {
    try {
        std::size_t pos = 0;
        out = std::stoull(s, &pos);
        return pos == s.size();
    } catch (...) {
        return false;
    }
}

bool parse_method(const std::string& s, Method& out) {
    static const std::map<std::string, Method> names = {
        {"odmd", Method::odmd},     {"odmd_real", Method::odmd_real},
        {"uvqpe", Method::uvqpe},   {"vqpe", Method::vqpe},
        {"qcels", Method::qcels},   {"esprit", Method::esprit},
        {"prony", Method::prony}};
    const auto it = names.find(s);
    if (it == names.end()) return false;
    out = it->second;
    return true;
}

} // namespace

ScenarioConfig parse_scenario_config(std::istream& in, const std::string& origin) {
    ScenarioConfig cfg;
    cfg.methods.clear();
    cfg.eps_list.clear();
    cfg.seeds.clear();

    std::vector<std::string> problems;
    auto bad = [&problems](const std::string& msg) { problems.push_back(msg); };

    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;

        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            bad("line " + std::to_string(line_no) + ": expected key = value");
            continue;
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));

        if (key == "label") {
            cfg.label = value;
        } else if (key == "system") {
            if (value == "heisenberg") cfg.system = ScenarioConfig::SystemKind::heisenberg;
            else if (value == "spectrum") cfg.system = ScenarioConfig::SystemKind::spectrum_file;
            else if (value == "synthetic") cfg.system = ScenarioConfig::SystemKind::synthetic;
            else bad("system: unknown kind '" + value + "'");
        } else if (key == "sites") {
            double v;
            if (parse_double(value, v)) cfg.sites = static_cast<int>(v);
            else bad("sites: not a number");
        } else if (key == "coupling") {
            if (!parse_double(value, cfg.coupling)) bad("coupling: not a number");
        } else if (key == "periodic") {
            if (value == "true") cfg.periodic = true;
            else if (value == "false") cfg.periodic = false;
            else bad("periodic: expected true/false");
        } else if (key == "reference") {
            if (value == "product") cfg.reference = NeelKind::product;
            else if (value == "superposition") cfg.reference = NeelKind::superposition;
            else bad("reference: expected product/superposition");
        } else if (key == "spectrum_path") {
            cfg.spectrum_path = value;
        } else if (key == "levels") {
            for (const auto& tok : split_list(value)) {
                double v;
                if (parse_double(tok, v)) cfg.levels.push_back(v);
                else bad("levels: '" + tok + "' is not a number");
            }
        } else if (key == "probabilities") {
            for (const auto& tok : split_list(value)) {
                double v;
                if (parse_double(tok, v)) cfg.level_probabilities.push_back(v);
                else bad("probabilities: '" + tok + "' is not a number");
            }
        } else if (key == "dt") {
            if (value == "auto") {
                cfg.dt_auto = true;
            } else if (value.rfind("auto(", 0) == 0 && value.back() == ')') {
                cfg.dt_auto = true;
                if (!parse_double(value.substr(5, value.size() - 6), cfg.dt_auto_c))
                    bad("dt: bad auto(C) constant");
            } else if (!parse_double(value, cfg.dt)) {
                bad("dt: not a number or auto(C)");
            }
        } else if (key == "window") {
            if (value == "symmetric") cfg.window = PhaseWindow::symmetric;
            else if (value == "positive") cfg.window = PhaseWindow::positive;
            else bad("window: expected symmetric/positive");
        } else if (key == "eps_list") {
            for (const auto& tok : split_list(value)) {
                double v;
                if (parse_double(tok, v)) cfg.eps_list.push_back(v);
                else bad("eps_list: '" + tok + "' is not a number");
            }
        } else if (key == "delta_list") {
            if (value == "auto") {
                cfg.delta_list.clear();
            } else {
                for (const auto& tok : split_list(value)) {
                    double v;
                    if (parse_double(tok, v)) cfg.delta_list.push_back(v);
                    else bad("delta_list: '" + tok + "' is not a number");
                }
            }
        } else if (key == "seeds") {
            for (const auto& tok : split_list(value)) {
                std::uint64_t v;
                if (parse_u64(tok, v)) cfg.seeds.push_back(v);
                else bad("seeds: '" + tok + "' is not an unsigned integer");
            }
        } else if (key == "methods") {
            for (const auto& tok : split_list(value)) {
                Method m;
                if (parse_method(tok, m)) cfg.methods.push_back(m);
                else bad("methods: unknown method '" + tok + "'");
            }
        } else if (key == "max_steps") {
            double v;
            if (parse_double(value, v)) cfg.max_steps = static_cast<int>(v);
            else bad("max_steps: not a number");
        } else if (key == "target_accuracy") {
            if (!parse_double(value, cfg.target_accuracy)) bad("target_accuracy: not a number");
        } else {
            bad("unknown key '" + key + "'");
        }
    }

    if (cfg.eps_list.empty()) cfg.eps_list.push_back(0.0);
    if (cfg.seeds.empty()) cfg.seeds.push_back(0);

    // Cross-field validation; every violation is reported.
    if (cfg.methods.empty()) bad("methods: at least one method is required");
    for (double e : cfg.eps_list)
        if (e < 0.0) bad("eps_list: noise levels must be nonnegative");
    for (double d : cfg.delta_list)
        if (d <= 0.0 || d >= 1.0) bad("delta_list: thresholds must be in (0, 1)");
    if (cfg.max_steps < 4) bad("max_steps: must be at least 4");
    if (cfg.target_accuracy <= 0.0) bad("target_accuracy: must be positive");
    if (!cfg.dt_auto && cfg.dt <= 0.0) bad("dt: must be positive or auto");
    if (cfg.dt_auto && (cfg.dt_auto_c <= 0.0 || cfg.dt_auto_c >= 1.0))
        bad("dt: auto(C) needs 0 < C < 1");
    switch (cfg.system) {
        case ScenarioConfig::SystemKind::heisenberg:
            if (cfg.sites < 2 || cfg.sites > 14) bad("sites: need 2 <= sites <= 14");
            if (cfg.sites % 2 != 0) bad("sites: Neel references need an even chain");
            break;
        case ScenarioConfig::SystemKind::spectrum_file:
            if (cfg.spectrum_path.empty()) bad("spectrum_path: required for system = spectrum");
            break;
        case ScenarioConfig::SystemKind::synthetic: {
            if (cfg.levels.empty()) bad("levels: required for system = synthetic");
            if (cfg.levels.size() != cfg.level_probabilities.size())
                bad("levels/probabilities: lengths differ");
            double sum = 0.0;
            for (double p : cfg.level_probabilities) {
                if (p < 0.0) bad("probabilities: must be nonnegative");
                sum += p;
            }
            if (!cfg.level_probabilities.empty() && std::abs(sum - 1.0) > 1e-6)
                bad("probabilities: must sum to 1 within 1e-6");
            for (std::size_t i = 0; i + 1 < cfg.levels.size(); ++i)
                if (cfg.levels[i] > cfg.levels[i + 1]) {
                    bad("levels: must be ascending");
                    break;
                }
            break;
        }
    }

    if (!problems.empty()) {
        std::ostringstream msg;
        msg << "invalid scenario config " << origin << " (" << problems.size() << " problem"
            << (problems.size() > 1 ? "s" : "") << "):";
        for (const auto& p : problems) msg << "\n  - " << p;
        throw validation_error(msg.str());
    }
    return cfg;
}

ScenarioConfig load_scenario_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open config file: " + path);
    return parse_scenario_config(in, path);
}

double effective_delta(double delta_or_auto, double eps) {
    if (delta_or_auto > 0.0) return delta_or_auto;
    if (eps <= 0.0) return 1e-8;
    // 10x the noise level, capped so very noisy runs keep a usable cutoff.
    return std::min(10.0 * eps, 0.5);
}

namespace {

SpectralModel build_system_model(const ScenarioConfig& cfg) {
    switch (cfg.system) {
        case ScenarioConfig::SystemKind::heisenberg: {
            const HamiltonianMatrix h = build_heisenberg(cfg.sites, cfg.coupling, cfg.periodic);
            const StateVector ref = neel_reference(cfg.sites, cfg.reference);
            return spectral_decompose(h, ref);
        }
        case ScenarioConfig::SystemKind::spectrum_file:
            return load_spectrum(cfg.spectrum_path);
        case ScenarioConfig::SystemKind::synthetic: {
            SpectralModel model;
            model.energies = cfg.levels;
            model.probabilities = cfg.level_probabilities;
            model.label = cfg.label;
            validate_model(model);
            return merge_degenerate(model);
        }
    }
    throw validation_error("unreachable system kind");
}

OverlapSignal signal_prefix(const OverlapSignal& sig, int k) {
    OverlapSignal out = sig;
    out.values.assign(sig.values.begin(), sig.values.begin() + k + 1);
    return out;
}

EstimateTrace uvqpe_trace(const OverlapSignal& sig, const ScenarioConfig& cfg, double delta,
                          const AffineMap& affine, double reference) {
    EstimateTrace trace;
    trace.method = "uvqpe";
    trace.has_reference = true;
    const int k_end = std::min(cfg.max_steps, sig.k_max());
    for (int k = 1; k <= k_end; ++k) {
        TraceRow row;
        row.k = k;
        row.n_observables = 2L * (k + 1);
        try {
            const SubspaceEstimate est = uvqpe(sig, k, delta, cfg.window, affine);
            if (est.skipped) {
                row.skipped = true;
            } else {
                row.energy = est.energy;
                row.abs_error = std::abs(est.energy - reference);
                row.rank_kept = est.rank_kept;
                row.sigma_max = est.lambda_max;
                row.sigma_min_kept = est.lambda_min_kept;
            }
        } catch (const numerical_error&) {
            row.skipped = true;
        }
        trace.rows.push_back(row);
    }
    return trace;
}

EstimateTrace vqpe_trace(const SpectralModel& model, const OverlapSignal& sig,
                         const ScenarioConfig& cfg, double delta, const AffineMap& affine,
                         double reference) {
    EstimateTrace trace;
    trace.method = "vqpe";
    trace.has_reference = true;
    const OverlapSignal h_sig = hamiltonian_signal(model, sig);
    const int k_end = std::min(cfg.max_steps, sig.k_max());
    for (int k = 1; k <= k_end; ++k) {
        TraceRow row;
        row.k = k;
        row.n_observables = 4L * (k + 1);
        try {
            const SubspaceEstimate est = vqpe_with_target(sig, h_sig, k + 1, delta, affine);
            if (est.skipped) {
                row.skipped = true;
            } else {
                row.energy = est.energy;
                row.abs_error = std::abs(est.energy - reference);
                row.rank_kept = est.rank_kept;
                row.sigma_max = est.lambda_max;
                row.sigma_min_kept = est.lambda_min_kept;
            }
        } catch (const numerical_error&) {
            row.skipped = true;
        }
        trace.rows.push_back(row);
    }
    return trace;
}

EstimateTrace qcels_trace(const OverlapSignal& sig, const ScenarioConfig& cfg,
                          const AffineMap& affine, double reference) {
    EstimateTrace trace;
    trace.method = "qcels";
    trace.has_reference = true;
    const int k_end = std::min(cfg.max_steps, sig.k_max());
    for (int k = 1; k <= k_end; ++k) {
        TraceRow row;
        row.k = k;
        row.n_observables = 2L * (k + 1);
        const QcelsFit fit = qcels(signal_prefix(sig, k), cfg.window);
        row.energy = affine.invert(fit.theta);
        row.abs_error = std::abs(row.energy - reference);
        row.rank_kept = 1;
        row.sigma_max = std::abs(fit.r);
        row.sigma_min_kept = fit.objective;
        trace.rows.push_back(row);
    }
    return trace;
}

EstimateTrace esprit_trace(const OverlapSignal& sig, const ScenarioConfig& cfg, double delta,
                           double dt, const AffineMap& affine, double reference) {
    EstimateTrace trace;
    trace.method = "esprit";
    trace.has_reference = true;
    const int k_end = std::min(cfg.max_steps, sig.k_max());
    for (int k = 0; k <= k_end; ++k) {
        const EmbedDims dims = embed_for_budget(k + 1, 0.5, sig.parts);
        if (dims.k < 0 || dims.d < 2) continue;
        TraceRow row;
        row.k = k;
        row.n_observables = 2L * (k + 1);
        try {
            const EspritResult res = esprit(sig, dims.d, dims.k, delta);
            if (res.skipped) {
                row.skipped = true;
            } else {
                const EigenEstimate est =
                    ground_energy_from_eigs(res.eigenvalues, dt, cfg.window, affine);
                row.energy = est.energy;
                row.abs_error = std::abs(est.energy - reference);
                row.rank_kept = res.rank_kept;
                row.sigma_max = res.sigma_max;
                row.sigma_min_kept = res.sigma_min_kept;
            }
        } catch (const numerical_error&) {
            row.skipped = true;
        }
        trace.rows.push_back(row);
    }
    return trace;
}

EstimateTrace prony_trace(const OverlapSignal& sig, const SpectralModel& model,
                          const ScenarioConfig& cfg, double dt, const AffineMap& affine,
                          double reference) {
    EstimateTrace trace;
    trace.method = "prony";
    trace.has_reference = true;
    const int budget = std::min(cfg.max_steps, sig.k_max()) + 1;
    const int n_modes = std::min(static_cast<int>(model.size()), budget / 2);
    if (n_modes < 1) return trace;

    TraceRow row;
    row.k = 2 * n_modes - 1;
    row.n_observables = 4L * n_modes;
    try {
        const PronyResult res = prony_full(sig, n_modes);
        const EigenEstimate est = ground_energy_from_eigs(res.eigenvalues, dt, cfg.window, affine);
        row.energy = est.energy;
        row.abs_error = std::abs(est.energy - reference);
        row.rank_kept = n_modes;
        row.sigma_max = res.vandermonde_condition;
    } catch (const numerical_error&) {
        row.skipped = true;
    }
    trace.rows.push_back(row);
    return trace;
}

struct CellContext {
    const ScenarioConfig* cfg;
    const SpectralModel* model; ///< current (signal) units
    const OverlapSignal* clean;
    AffineMap affine;
    double reference;           ///< original units
    double dt;
    double window_lo, window_hi; ///< original units
};

void finalize_cell(RunCell& cell, const CellContext& ctx) {
    const ScenarioConfig& cfg = *ctx.cfg;
    cell.trace.has_reference = true;

    const TraceRow* last = cell.trace.last_valid();
    cell.failed = last == nullptr;
    if (cell.failed) {
        cell.in_window = false;
        return;
    }
    cell.final_energy = last->energy;
    cell.final_abs_error = last->abs_error;
    cell.converged = cell.final_abs_error <= cfg.target_accuracy;
    if (auto s = cell.trace.first_step_below(cfg.target_accuracy)) cell.steps_to_target = *s;
    if (auto o = cell.trace.observables_to_target(cfg.target_accuracy))
        cell.observables_to_target = *o;
    // stabilization band is stated in window units; estimates are original
    if (auto s = cell.trace.stabilization_step(1e-6 / ctx.affine.scale))
        cell.stabilization_step = *s;

    // Divergence screen over the settled (trailing) half of the trace.
    const double margin = 0.05 * (ctx.window_hi - ctx.window_lo);
    cell.in_window = true;
    for (const auto& row : cell.trace.rows) {
        if (row.skipped || row.k < cfg.max_steps / 2) continue;
        if (row.energy < ctx.window_lo - margin || row.energy > ctx.window_hi + margin) {
            cell.in_window = false;
            break;
        }
    }
}

void run_cell_methods(RunCell& cell, const CellContext& ctx) {
    const ScenarioConfig& cfg = *ctx.cfg;
    OverlapSignal sig = *ctx.clean;
    if (cell.method == Method::odmd_real) sig = take_real_part(sig);
    if (cell.eps > 0.0) sig = add_gaussian_noise(sig, cell.eps, cell.seed);

    switch (cell.method) {
        case Method::odmd:
        case Method::odmd_real: {
            OdmdConfig oc;
            oc.dt = ctx.dt;
            oc.threshold_rel = cell.delta;
            oc.parts = sig.parts;
            oc.window = cfg.window;
            oc.max_steps = cfg.max_steps;
            oc.affine = ctx.affine;
            cell.trace = run_odmd(sig, oc, ctx.reference);
            break;
        }
        case Method::uvqpe:
            cell.trace = uvqpe_trace(sig, cfg, cell.delta, ctx.affine, ctx.reference);
            break;
        case Method::vqpe:
            cell.trace = vqpe_trace(*ctx.model, sig, cfg, cell.delta, ctx.affine, ctx.reference);
            break;
        case Method::qcels:
            cell.trace = qcels_trace(sig, cfg, ctx.affine, ctx.reference);
            break;
        case Method::esprit:
            cell.trace = esprit_trace(sig, cfg, cell.delta, ctx.dt, ctx.affine, ctx.reference);
            break;
        case Method::prony:
            cell.trace = prony_trace(sig, *ctx.model, cfg, ctx.dt, ctx.affine, ctx.reference);
            break;
    }
}

void run_cell(RunCell& cell, const CellContext& ctx) {
    try {
        run_cell_methods(cell, ctx);
    } catch (const std::exception&) {
        cell.trace.rows.clear(); // recorded as a failed cell, sweep continues
    }
    cell.trace.method = method_name(cell.method);
    finalize_cell(cell, ctx);
}

SweepReport run_with_model(const ScenarioConfig& cfg, const SpectralModel& model_in, double p0_tag,
                           int threads) {
    SpectralModel model = prune_small(model_in, 1e-14);

    SweepReport report;
    report.config = cfg;
    const AffineMap affine = model.affine_or_identity();
    report.reference_energy = affine.invert(model_in.ground_energy());
    {
        const double a = affine.invert(model.ground_energy());
        const double b = affine.invert(model.top_energy());
        report.window_lo = std::min(a, b);
        report.window_hi = std::max(a, b);
    }
    report.spectral_norm = std::max(std::abs(report.window_lo), std::abs(report.window_hi));
    report.dt = cfg.dt_auto && model.spectral_range() > 0.0
                    ? choose_timestep(model.ground_energy(), model.top_energy(), cfg.dt_auto_c)
                    : (cfg.dt_auto ? 1.0 : cfg.dt);

    const OverlapSignal clean = generate_overlap(model, report.dt, cfg.max_steps);

    CellContext ctx;
    ctx.cfg = &cfg;
    ctx.model = &model;
    ctx.clean = &clean;
    ctx.affine = affine;
    ctx.reference = report.reference_energy;
    ctx.dt = report.dt;
    ctx.window_lo = report.window_lo;
    ctx.window_hi = report.window_hi;

    // Canonical cell order: method, then eps, then delta, then seed.
    const std::vector<double> deltas =
        cfg.delta_list.empty() ? std::vector<double>{0.0} : cfg.delta_list;
    for (Method m : cfg.methods)
        for (double eps : cfg.eps_list)
            for (double delta : deltas)
                for (std::uint64_t seed : cfg.seeds) {
                    RunCell cell;
                    cell.method = m;
                    cell.eps = eps;
                    cell.delta = effective_delta(delta, eps);
                    cell.seed = seed;
                    cell.p0 = p0_tag;
                    report.cells.push_back(cell);
                }

    if (threads <= 1 || report.cells.size() <= 1) {
        for (auto& cell : report.cells) run_cell(cell, ctx);
    } else {
        std::atomic<std::size_t> next{0};
        auto worker = [&]() {
            for (;;) {
                const std::size_t i = next.fetch_add(1);
                if (i >= report.cells.size()) return;
                run_cell(report.cells[i], ctx);
            }
        };
        std::vector<std::thread> pool;
        const int n = std::min<int>(threads, static_cast<int>(report.cells.size()));
        pool.reserve(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    return report;
}

} // namespace

SweepReport run_scenario(const ScenarioConfig& cfg, int threads) {
    const SpectralModel model = build_system_model(cfg);
    return run_with_model(cfg, model, -1.0, threads);
}

SweepReport sweep_overlap(const ScenarioConfig& base, const std::vector<double>& p0_list,
                          int threads) {
    if (base.system == ScenarioConfig::SystemKind::heisenberg)
        throw validation_error("overlap sweeps need a synthetic or file-based system "
                               "(p0 is not directly settable for spin chains)");
    for (double p0 : p0_list)
        if (p0 <= 0.0 || p0 > 1.0)
            throw validation_error("overlap sweep requires p0 values in (0, 1]");

    const SpectralModel model = build_system_model(base);
    if (model.size() < 1) throw validation_error("empty model");

    SweepReport merged;
    bool first = true;
    for (double p0 : p0_list) {
        const SpectralModel scaled = with_ground_probability(model, p0);
        SweepReport r = run_with_model(base, scaled, p0, threads);
        if (first) {
            merged = std::move(r);
            first = false;
        } else {
            merged.cells.insert(merged.cells.end(), std::make_move_iterator(r.cells.begin()),
                                std::make_move_iterator(r.cells.end()));
        }
    }
    return merged;
}

} // namespace odmd
