#ifndef ODMD_BASELINES_HPP
#define ODMD_BASELINES_HPP

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <vector>

#include "odmd/estimator.hpp"
#include "odmd/signal.hpp"
#include "odmd/spectral_model.hpp"

namespace odmd {

/// Toeplitz matrices of the real-time subspace: S_ij = s_{j-i}
/// (conjugated for j < i) and a target matrix T, which is the one-step
/// shifted overlap Toeplitz for UVQPE or the H-weighted Toeplitz for VQPE.
struct ToeplitzSubspaceMatrices {
    Eigen::MatrixXcd s;
    Eigen::MatrixXcd t;
};

/// S and the UVQPE target T_ij = s_{j-i+1} from samples s_0..s_{m}.
ToeplitzSubspaceMatrices build_uvqpe_matrices(const OverlapSignal& sig, int m);

/// S from the overlap samples and T_ij = h_{j-i} from the H-weighted samples.
ToeplitzSubspaceMatrices build_vqpe_matrices(const OverlapSignal& sig,
                                             const OverlapSignal& h_sig, int m);

/// H-weighted companion series h_k = sum_n p_n E_n exp(-iE_n k dt), generated
/// to match `like` (same dt and length) and carrying the same Gaussian noise
/// model with eps = like.noise_level on an independent stream derived from
/// like.seed.
OverlapSignal hamiltonian_signal(const SpectralModel& model, const OverlapSignal& like);

struct SubspaceEstimate {
    double energy = 0.0; ///< original units
    int rank_kept = 0;
    double lambda_max = 0.0;      ///< largest overlap eigenvalue
    double lambda_min_kept = 0.0; ///< smallest retained overlap eigenvalue
    bool skipped = false;
    std::vector<std::complex<double>> eigenvalues; ///< of the projected problem
};

/// One-shot UVQPE at subspace size m: regularize S by eigenvalue pruning
/// (keep lambda > threshold_rel * lambda_max, negatives always dropped),
/// project both matrices, solve the projected standard problem and pick the
/// maximal-phase eigenvalue exactly as the ODMD estimator does.
SubspaceEstimate uvqpe(const OverlapSignal& sig, int m, double threshold_rel,
                       PhaseWindow window = PhaseWindow::symmetric, const AffineMap& affine = {});

/// One-shot VQPE at subspace size m, same regularization; the projected
/// pencil is Hermitian and the minimum retained eigenvalue (an energy in
/// signal units) is returned through the inverse affine.
SubspaceEstimate vqpe(const SpectralModel& model, const OverlapSignal& sig, int m,
                      double threshold_rel, const AffineMap& affine = {});

/// vqpe with a precomputed H-weighted signal (used by trace drivers so the
/// noisy h series is synthesized once).
SubspaceEstimate vqpe_with_target(const OverlapSignal& sig, const OverlapSignal& h_sig, int m,
                                  double threshold_rel, const AffineMap& affine = {});

/// Single-mode complex-exponential least-squares fit. The amplitude is
/// eliminated in closed form; the phase is located on a dense grid over the
/// admissible window and refined by golden-section search to `theta_tol`.
struct QcelsFit {
    std::complex<double> r;
    double theta = 0.0; ///< energy units (phase divided by dt)
    double objective = 0.0;
};

QcelsFit qcels(const OverlapSignal& sig, PhaseWindow window = PhaseWindow::symmetric,
               int grid_points = 512, double theta_tol = 1e-10);

/// Shift-invariance estimate from the SVD of the base Hankel matrix
/// (d rows, K+2 columns): with right factors V_X and V_X' of the unshifted
/// and shifted column blocks, the retained spectrum of V_X'^H (V_X^H)^+
/// matches the ODMD system matrix.
struct EspritResult {
    std::vector<std::complex<double>> eigenvalues;
    int rank_kept = 0;
    double sigma_max = 0.0;
    double sigma_min_kept = 0.0;
    bool skipped = false;
};

EspritResult esprit(const OverlapSignal& sig, int d, int k, double threshold_rel);

/// Exact linear-recurrence fit: solves the square d x d system for the
/// companion coefficients from samples s_0..s_{2d-1}, roots the
/// characteristic polynomial through a companion eigensolve, then solves the
/// Vandermonde system for the amplitudes.
struct PronyResult {
    std::vector<std::complex<double>> eigenvalues;
    std::vector<std::complex<double>> amplitudes;
    double vandermonde_condition = 0.0;
    bool ill_conditioned = false; ///< condition above 1e12
};

PronyResult prony_full(const OverlapSignal& sig, int n_modes);

} // namespace odmd

#endif
