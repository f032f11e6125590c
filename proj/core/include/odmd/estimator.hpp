#ifndef ODMD_ESTIMATOR_HPP
#define ODMD_ESTIMATOR_HPP

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "odmd/affine_map.hpp"
#include "odmd/hankel.hpp"
#include "odmd/trace.hpp"

namespace odmd {

/// Which arc of the unit circle separates the top of the spectrum from the
/// bottom when eigenphases are read off. `symmetric` assumes the spectrum
/// was shifted around zero (dividing line at pi); `positive` assumes a
/// nonnegative spectrum (dividing line just above zero).
enum class PhaseWindow { symmetric, positive };

struct OdmdConfig {
    double dt = 1.0;
    double threshold_rel = 1e-8; ///< relative singular-value cutoff
    double alpha = 0.5;          ///< Hankel aspect ratio d/(K+1)
    SignalParts parts = SignalParts::complex_full;
    PhaseWindow window = PhaseWindow::symmetric;
    int max_steps = 250;
    AffineMap affine;            ///< map from original units used by the signal
    double stabilization_tol = 1e-6;
};

/// Rank-truncated least-squares propagator in its reduced r x r form
///   S_r^{-1/2} U_r^H X' V_r S_r^{-1/2},
/// spectrally congruent to X' X_trunc^+ on the retained subspace.
struct SystemMatrix {
    Eigen::MatrixXcd reduced;
    int rank_kept = 0;
    Eigen::VectorXd singular_values; ///< all of them, descending
    int d = 0;
    int k_cols = 0;                  ///< K+1

    // Retained SVD factors of X, kept for lifting left eigenvectors back
    // onto the d-dimensional embedding.
    Eigen::MatrixXcd u_kept;
    Eigen::VectorXd sigma_kept;

    double sigma_max() const { return singular_values.size() ? singular_values(0) : 0.0; }
    double sigma_min_kept() const { return rank_kept ? singular_values(rank_kept - 1) : 0.0; }
};

SystemMatrix system_matrix(const HankelPair& pair, double threshold_rel);

/// All eigenvalues of the reduced matrix; each pair is verified against
/// ||A v - lambda v|| <= 1e-8 ||A||.
Eigen::VectorXcd eig_general(const SystemMatrix& m);

struct EigenPairs {
    Eigen::VectorXcd values;
    Eigen::MatrixXcd right; ///< columns
    Eigen::MatrixXcd left;  ///< columns w with w^H A = lambda w^H
};

EigenPairs eig_general_full(const SystemMatrix& m);

struct EigenEstimate {
    std::vector<std::complex<double>> eigenvalues;
    int ground_index = -1;
    double energy = 0.0; ///< original units (inverse affine applied)
    double phase = 0.0;  ///< window-adjusted arg of the selected eigenvalue
};

/// Select the eigenvalue of maximal phase under the window convention and
/// convert it to an energy, E = -arg(lambda)/dt, mapped back through the
/// inverse affine. Ties in phase (within 1e-12) go to the larger modulus,
/// then the smaller index.
EigenEstimate ground_energy_from_eigs(std::span<const std::complex<double>> eigs, double dt,
                                      PhaseWindow window, const AffineMap& affine = {});

/// Incremental driver: for each usable sample-prefix length, build the
/// Hankel pair, the truncated system matrix and its spectrum, and record the
/// ground-energy estimate. Empty-rank steps are recorded as skipped rows.
/// Iterations start at d >= 2 (d >= 4 for real_only signals).
EstimateTrace run_odmd(const OverlapSignal& sig, const OdmdConfig& cfg,
                       std::optional<double> reference_energy = std::nullopt);

} // namespace odmd

#endif
