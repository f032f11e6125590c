// Wall-clock timings for the hot paths: dense diagonalization, signal
// generation, and the incremental estimator at growing step counts.

#include <chrono>
#include <cstdio>
#include <functional>

#include "odmd/estimator.hpp"
#include "odmd/heisenberg.hpp"
#include "odmd/signal.hpp"

namespace {

double time_ms(const std::function<void()>& fn, int reps = 3) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

} // namespace

int main() {
    std::printf("%-40s %12s\n", "benchmark", "best ms");

    for (int sites : {6, 8, 10}) {
        const auto h = odmd::build_heisenberg(sites, 4.0, true);
        const auto ref = odmd::neel_reference(sites, odmd::NeelKind::product);
        odmd::SpectralModel model;
        const double ms = time_ms([&] { model = odmd::spectral_decompose(h, ref); });
        std::printf("%-40s %12.3f\n",
                    ("diagonalize heisenberg L=" + std::to_string(sites)).c_str(), ms);

        const double g1 =
            time_ms([&] { (void)odmd::generate_overlap(model, 0.15, 500); });
        std::printf("%-40s %12.3f\n",
                    ("generate 501 samples L=" + std::to_string(sites)).c_str(), g1);
    }

    {
        const auto h = odmd::build_heisenberg(8, 4.0, true);
        const auto ref = odmd::neel_reference(8, odmd::NeelKind::product);
        const auto model = odmd::spectral_decompose(h, ref);
        const auto clean = odmd::generate_overlap(model, 0.15, 250);
        const auto noisy =
            odmd::add_gaussian_noise(odmd::take_real_part(clean), 1e-2, 7);

        for (int steps : {50, 100, 250}) {
            odmd::OdmdConfig cfg;
            cfg.dt = 0.15;
            cfg.threshold_rel = 0.1;
            cfg.parts = odmd::SignalParts::real_only;
            cfg.max_steps = steps;
            const double ms = time_ms(
                [&] { (void)odmd::run_odmd(noisy, cfg, model.ground_energy()); }, 2);
            std::printf("%-40s %12.3f\n",
                        ("estimator trace, real, steps=" + std::to_string(steps)).c_str(), ms);
        }
    }
    return 0;
}
