#ifndef ODMD_GROUND_STATE_HPP
#define ODMD_GROUND_STATE_HPP

#include <Eigen/Dense>

#include "odmd/estimator.hpp"
#include "odmd/spectral_model.hpp"

namespace odmd {

/// Coefficients z_0..z_{d-1} weighting the real-time states
/// exp(-iHl dt)|phi_0> in the ground-state approximation. `normalized`
/// is set once the Gram-weighted norm (evaluated through a spectral
/// model) has been divided out.
struct GroundWeights {
    Eigen::VectorXcd z;
    bool normalized = false;
    double dt = 1.0;
};

/// Left eigenvector of the reduced system matrix for the maximal-phase
/// eigenvalue, lifted onto the d-dimensional embedding via
/// Phi_0 = w^H Sigma_r^{-1/2} U_r^H. Throws when the ground eigenvalue is
/// phase-degenerate (gap <= 1e-10) among the retained eigenvalues.
GroundWeights ground_state_weights(const HankelPair& pair, const SystemMatrix& m,
                                   PhaseWindow window = PhaseWindow::symmetric);

/// Divide by the Gram-weighted norm so the weighted state has unit norm:
/// ||sum_l z_l e^{-iHl dt}|phi_0>||^2 = sum_n p_n |sum_l z_l e^{-iE_n l dt}|^2.
GroundWeights normalize_weights(const GroundWeights& w, const SpectralModel& model);

enum class Observable { hamiltonian, hamiltonian_squared };

/// <O> = sum_{k,l} z_k^* z_l sum_n p_n f(E_n) exp(-iE_n (l-k) dt) with
/// f(E) = E or E^2. The imaginary residue of the double sum must stay below
/// 1e-8 (relative to max(1, |value|)) or a numerical_error is thrown.
double expectation_from_weights(const GroundWeights& w, const SpectralModel& model,
                                Observable observable);

/// sqrt(max(0, <H^2> - 2 e0 <H> + e0^2)) / max_n |E_n|. A radicand below
/// -1e-10 signals an inconsistent Gram estimate and throws.
double residual_norm(const GroundWeights& w, const SpectralModel& model, double e0);

} // namespace odmd

#endif
