#ifndef ODMD_SPECTRAL_MODEL_HPP
#define ODMD_SPECTRAL_MODEL_HPP

#include <optional>
#include <string>
#include <vector>

#include "odmd/affine_map.hpp"
#include "odmd/errors.hpp"

namespace odmd {

/// Spectral decomposition of a system seen from a fixed reference state:
/// energy levels E_n (ascending) with the reference-state probabilities
/// p_n = |<psi_n|phi_0>|^2. This is the exact generator behind every
/// simulated overlap signal.
///
/// When the model has been moved into a different energy window the
/// cumulative map from the original units is kept in `affine`, so that
/// estimates can be reported in original units.
struct SpectralModel {
    std::vector<double> energies;       ///< ascending, strictly sorted after merging
    std::vector<double> probabilities;  ///< p_n >= 0, summing to 1 for unit-norm references
    std::optional<AffineMap> affine;    ///< original units -> current units
    std::string label;

    std::size_t size() const { return energies.size(); }
    bool empty() const { return energies.empty(); }

    double ground_energy() const;
    double top_energy() const;
    double spectral_range() const { return top_energy() - ground_energy(); }
    /// max_n |E_n|, the model's stand-in for the operator 2-norm.
    double spectral_norm() const;

    double probability_sum() const;
    double mean_energy() const;
    double energy_variance() const;

    AffineMap affine_or_identity() const { return affine.value_or(AffineMap::identity()); }
};

/// Collapse levels closer than `rel_tol * max(1, max|E|)` into one level with
/// summed probability (probability-weighted mean energy). The overlap signal
/// cannot distinguish such splits, and merging avoids spurious near-degenerate
/// recurrence roots.
SpectralModel merge_degenerate(const SpectralModel& model, double rel_tol = 1e-9);

/// Drop levels with p_n below `threshold`; they sit below any realistic
/// noise floor. Never drops everything: throws if nothing would remain.
SpectralModel prune_small(const SpectralModel& model, double threshold = 1e-14);

/// Linearly map the energy range [E_0, E_{N-1}] onto [lo, hi], recording the
/// cumulative AffineMap. Probabilities and energy ordering are untouched.
/// A degenerate spectrum (zero range) only admits a pure shift (lo == hi).
SpectralModel affine_rescale(const SpectralModel& model, double lo, double hi);

/// Pin the ground-level probability to p0 and spread the remaining mass over
/// the excited levels proportionally to their current weights. p0 in (0, 1];
/// a single-level model only admits p0 = 1.
SpectralModel with_ground_probability(const SpectralModel& model, double p0);

/// Validate the core invariants (sorted energies, nonnegative probabilities,
/// probability sum within `p_tol` of 1). Throws validation_error.
void validate_model(const SpectralModel& model, double p_tol = 1e-6);

} // namespace odmd

#endif
