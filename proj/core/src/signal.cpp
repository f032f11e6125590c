#include "odmd/signal.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>

namespace odmd {

namespace rng {
namespace {

inline std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// SplitMix64 step.
inline std::uint64_t next(std::uint64_t& state) {
    state += 0x9E3779B97F4A7C15ULL;
    return mix64(state);
}

// uint64 -> (0, 1]: 53 mantissa bits, shifted away from exact zero.
inline double to_unit(std::uint64_t v) {
    return (static_cast<double>(v >> 11) + 1.0) * 0x1.0p-53;
}

} // namespace

double gaussian_draw(std::uint64_t seed, std::uint64_t index, std::uint32_t part) {
    std::uint64_t state = mix64(seed ^ 0x5851F42D4C957F2DULL);
    state ^= mix64(2 * index + part + 1);
    const double u1 = to_unit(next(state));
    const double u2 = to_unit(next(state));
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

} // namespace rng

OverlapSignal generate_overlap(const SpectralModel& model, double dt, int k_max) {
    if (model.empty()) throw validation_error("cannot generate a signal from an empty spectrum");
    if (dt <= 0.0) throw validation_error("timestep must be positive");
    if (k_max < 1) throw validation_error("k_max must be at least 1");

    OverlapSignal sig;
    sig.dt = dt;
    sig.parts = SignalParts::complex_full;
    sig.noise_level = 0.0;
    sig.seed = 0;
    sig.source_label = model.label;
    sig.values.resize(static_cast<std::size_t>(k_max) + 1);

    for (int k = 0; k <= k_max; ++k) {
        std::complex<double> s = 0.0;
        const double t = static_cast<double>(k) * dt;
        for (std::size_t n = 0; n < model.size(); ++n)
            s += std::polar(model.probabilities[n], -model.energies[n] * t);
        sig.values[static_cast<std::size_t>(k)] = s;
    }
    return sig;
}

OverlapSignal add_gaussian_noise(const OverlapSignal& sig, double eps, std::uint64_t seed) {
    if (eps < 0.0) throw validation_error("noise level must be nonnegative");

    OverlapSignal out = sig;
    out.noise_level = eps;
    out.seed = seed;
    if (eps == 0.0) return out;

    const bool complex_parts = sig.parts == SignalParts::complex_full;
    for (std::size_t k = 0; k < out.values.size(); ++k) {
        const double dre = eps * rng::gaussian_draw(seed, k, 0);
        const double dim = complex_parts ? eps * rng::gaussian_draw(seed, k, 1) : 0.0;
        out.values[k] += std::complex<double>(dre, dim);
    }
    return out;
}

OverlapSignal take_real_part(const OverlapSignal& sig) {
    OverlapSignal out = sig;
    out.parts = SignalParts::real_only;
    for (auto& v : out.values) v = std::complex<double>(v.real(), 0.0);
    return out;
}

double choose_timestep(double e_min, double e_max, double c, double gap) {
    if (e_max <= e_min) throw validation_error("choose_timestep needs e_max > e_min");
    if (c <= 0.0 || c >= 1.0) throw validation_error("window fraction c must be in (0, 1)");
    if (gap < 0.0) throw validation_error("spectral gap must be nonnegative");
    return c * 2.0 * M_PI / ((e_max - e_min) + gap);
}

namespace {
std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}
} // namespace

void write_signal_csv(const OverlapSignal& sig, std::ostream& out) {
    out << "# dt=" << fmt17(sig.dt) << '\n';
    out << "# eps=" << fmt17(sig.noise_level) << '\n';
    out << "# seed=" << sig.seed << '\n';
    out << "# source_label=" << sig.source_label << '\n';
    out << "# parts=" << (sig.parts == SignalParts::real_only ? "real_only" : "complex") << '\n';
    out << "k,t,re,im\n";
    for (std::size_t k = 0; k < sig.values.size(); ++k) {
        out << k << ',' << fmt17(static_cast<double>(k) * sig.dt) << ','
            << fmt17(sig.values[k].real()) << ',';
        if (sig.parts == SignalParts::complex_full) out << fmt17(sig.values[k].imag());
        out << '\n';
    }
}

} // namespace odmd
