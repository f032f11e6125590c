#ifndef ODMD_SCENARIO_HPP
#define ODMD_SCENARIO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "odmd/baselines.hpp"
#include "odmd/estimator.hpp"
#include "odmd/heisenberg.hpp"
#include "odmd/signal.hpp"
#include "odmd/trace.hpp"

namespace odmd {

enum class Method { odmd, odmd_real, uvqpe, vqpe, qcels, esprit, prony };

std::string method_name(Method m);

/// Configuration-driven experiment: one system, one clean signal per run,
/// a grid of (method, eps, delta, seed) cells.
///
/// Config files are flat key = value text; '#' starts a comment. Keys:
///   label, system (heisenberg|spectrum|synthetic), sites, coupling,
///   periodic, reference (product|superposition), spectrum_path, levels,
///   probabilities, dt (number or auto or auto(C)), window
///   (symmetric|positive), eps_list, delta_list (numbers or auto),
///   seeds, methods, max_steps, target_accuracy.
/// Unknown keys are errors; validation reports every violated field at once.
struct ScenarioConfig {
    enum class SystemKind { heisenberg, spectrum_file, synthetic };

    std::string label = "scenario";
    SystemKind system = SystemKind::heisenberg;

    int sites = 8;
    double coupling = 4.0;
    bool periodic = true;
    NeelKind reference = NeelKind::product;

    std::string spectrum_path;

    std::vector<double> levels;
    std::vector<double> level_probabilities;

    double dt = 0.0;
    bool dt_auto = false;
    double dt_auto_c = 0.75;

    PhaseWindow window = PhaseWindow::symmetric;
    std::vector<double> eps_list{0.0};
    std::vector<double> delta_list; ///< empty => auto (10*eps, 1e-8 when eps = 0)
    std::vector<std::uint64_t> seeds{0};
    std::vector<Method> methods{Method::odmd};
    int max_steps = 250;
    double target_accuracy = 1.6e-3; ///< original energy units
};

ScenarioConfig parse_scenario_config(std::istream& in, const std::string& origin = "<config>");
ScenarioConfig load_scenario_config(const std::string& path);

/// Effective truncation threshold for a cell: explicit delta, or the
/// noise-scaled default 10*eps capped at 0.5 (1e-8 for noiseless runs).
double effective_delta(double delta_or_auto, double eps);

/// One grid cell and its aggregates. Aggregates are always recomputable
/// from the trace.
struct RunCell {
    Method method = Method::odmd;
    double eps = 0.0;
    double delta = 0.0; ///< resolved value
    std::uint64_t seed = 0;
    double p0 = -1.0;   ///< overlap-sweep tag; -1 when not sweeping p0
    EstimateTrace trace;

    // Aggregates (original energy units).
    int steps_to_target = -1;           ///< -1 when never reached
    long observables_to_target = -1;
    int stabilization_step = -1;        ///< first k holding a 1e-6 window-unit band
                                        ///< for 10 consecutive steps; -1 if never
    double final_energy = 0.0;
    double final_abs_error = 0.0;
    bool converged = false;             ///< final error <= target
    bool in_window = true;              ///< trailing-half estimates stayed in the
                                        ///< spectral window (5% span margin)
    bool failed = false;                ///< every step skipped / numerical failure
};

struct SweepReport {
    ScenarioConfig config;
    double reference_energy = 0.0; ///< exact ground energy, original units
    double spectral_norm = 0.0;    ///< max |E_n|, original units
    double window_lo = 0.0, window_hi = 0.0;
    double dt = 0.0;               ///< resolved timestep
    std::vector<RunCell> cells;    ///< canonical order: method, eps, delta, seed
};

/// Build the system, diagonalize for the reference energy, generate one
/// clean signal, then derive every noisy cell deterministically. Cells run
/// independently (optionally on `threads` workers) and are merged in a
/// canonical order, so outputs never depend on the thread count. Numerical
/// failures mark cells as failed; they never abort the sweep.
SweepReport run_scenario(const ScenarioConfig& cfg, int threads = 1);

/// Re-run the scenario once per p0, with the ground-state probability pinned
/// to p0 and the excited probabilities rescaled proportionally. Requires a
/// synthetic or file-based system.
SweepReport sweep_overlap(const ScenarioConfig& base, const std::vector<double>& p0_list,
                          int threads = 1);

} // namespace odmd

#endif
