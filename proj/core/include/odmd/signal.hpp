#ifndef ODMD_SIGNAL_HPP
#define ODMD_SIGNAL_HPP

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "odmd/spectral_model.hpp"

namespace odmd {

enum class SignalParts { complex_full, real_only };

/// Uniformly sampled overlap time series s_k = sum_n p_n exp(-i E_n k dt),
/// k = 0..k_max, possibly with Gaussian measurement noise added.
/// real_only signals keep zero imaginary storage.
struct OverlapSignal {
    double dt = 1.0;                          ///< timestep, inverse-energy units
    std::vector<std::complex<double>> values; ///< s_0 .. s_{k_max}
    SignalParts parts = SignalParts::complex_full;
    double noise_level = 0.0;                 ///< eps of the N(0, eps^2) draws
    std::uint64_t seed = 0;
    std::string source_label;

    std::size_t size() const { return values.size(); }
    int k_max() const { return static_cast<int>(values.size()) - 1; }
};

/// Exact noiseless signal from a spectral model. s_0 is generated like any
/// other sample (it equals the probability sum), so noise later applies to
/// it uniformly.
OverlapSignal generate_overlap(const SpectralModel& model, double dt, int k_max);

/// Independent N(0, eps^2) draws added to the real part and, for complex
/// signals, independently to the imaginary part of every sample.
///
/// The generator is fixed and portable: each draw comes from a SplitMix64
/// stream keyed by (seed, sample index, part) and a Box-Muller transform,
/// so any sample can be produced independently and in parallel.
/// part 0 = Re, part 1 = Im.
OverlapSignal add_gaussian_noise(const OverlapSignal& sig, double eps, std::uint64_t seed);

/// Keep Re s_k only. Idempotent: real_only input is returned as a copy.
OverlapSignal take_real_part(const OverlapSignal& sig);

/// Timestep guideline dt = c * 2*pi / ((e_max - e_min) + gap), 0 < c < 1.
/// Pass the first spectral gap E_1 - E_0 when it is known to tighten the
/// bound; with gap = 0 this is the plain aliasing-window rule.
double choose_timestep(double e_min, double e_max, double c = 0.75, double gap = 0.0);

/// Signal CSV: '#' comment lines carrying dt/eps/seed/source_label, a header
/// row, then columns k,t,re,im (im empty for real_only).
void write_signal_csv(const OverlapSignal& sig, std::ostream& out);

namespace rng {
/// One deterministic standard-normal draw for (seed, index, part).
double gaussian_draw(std::uint64_t seed, std::uint64_t index, std::uint32_t part);
} // namespace rng

} // namespace odmd

#endif
