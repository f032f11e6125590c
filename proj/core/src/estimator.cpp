#include "odmd/estimator.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace odmd {

namespace {

struct SvdParts {
    Eigen::MatrixXcd u;
    Eigen::MatrixXcd v;
    Eigen::VectorXd sigma;
};

// Real-only signals carry a real X; factor it in real arithmetic.
// Divide-and-conquer takes over for larger blocks, one-sided Jacobi keeps
// the best accuracy on the small exactness-critical cases.
template <typename Matrix>
void factor(const Matrix& x, SvdParts& out) {
    if (std::min(x.rows(), x.cols()) > 32) {
        Eigen::BDCSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.u = svd.matrixU().template cast<std::complex<double>>();
        out.v = svd.matrixV().template cast<std::complex<double>>();
        out.sigma = svd.singularValues();
    } else {
        Eigen::JacobiSVD<Matrix> svd(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
        out.u = svd.matrixU().template cast<std::complex<double>>();
        out.v = svd.matrixV().template cast<std::complex<double>>();
        out.sigma = svd.singularValues();
    }
}

SvdParts svd_of(const HankelPair& pair) {
    SvdParts out;
    if (pair.parts == SignalParts::real_only) {
        const Eigen::MatrixXd xr = pair.x.real();
        factor(xr, out);
    } else {
        factor(pair.x, out);
    }
    return out;
}

} // namespace

SystemMatrix system_matrix(const HankelPair& pair, double threshold_rel) {
    if (pair.d() < 1 || pair.cols() < 1) throw validation_error("empty Hankel pair");
    if (threshold_rel <= 0.0 || threshold_rel >= 1.0)
        throw validation_error("relative threshold must be in (0, 1)");

    SvdParts svd = svd_of(pair);
    const double sigma_max = svd.sigma.size() ? svd.sigma(0) : 0.0;

    int rank = 0;
    while (rank < svd.sigma.size() && svd.sigma(rank) > threshold_rel * sigma_max && svd.sigma(rank) > 0.0)
        ++rank;
    if (rank == 0) {
        std::ostringstream msg;
        msg << "every singular value fell below the cutoff " << threshold_rel
            << " * sigma_max; lower the threshold or supply more data";
        throw numerical_error(msg.str());
    }

    SystemMatrix m;
    m.d = static_cast<int>(pair.d());
    m.k_cols = static_cast<int>(pair.cols());
    m.singular_values = svd.sigma;
    m.rank_kept = rank;
    m.u_kept = svd.u.leftCols(rank);
    m.sigma_kept = svd.sigma.head(rank);

    const Eigen::VectorXd inv_sqrt = m.sigma_kept.cwiseSqrt().cwiseInverse();
    m.reduced = inv_sqrt.asDiagonal() *
                (m.u_kept.adjoint() * pair.x_shift * svd.v.leftCols(rank)) *
                inv_sqrt.asDiagonal();
    return m;
}

Eigen::VectorXcd eig_general(const SystemMatrix& m) {
    return eig_general_full(m).values;
}

EigenPairs eig_general_full(const SystemMatrix& m) {
    if (m.rank_kept < 1) throw validation_error("system matrix has empty rank");

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(m.reduced, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "non-Hermitian eigensolver failed on reduced matrix of size " << m.rank_kept
            << "; matrix follows\n" << m.reduced;
        throw numerical_error(msg.str());
    }

    EigenPairs pairs;
    pairs.values = solver.eigenvalues();
    pairs.right = solver.eigenvectors();

    // Residual contract: ||A v - lambda v|| <= 1e-8 ||A||_2 per pair.
    // Fast path compares against the lower bound ||A||_F / sqrt(r).
    const double fro = m.reduced.norm();
    const double lower = fro / std::sqrt(static_cast<double>(m.rank_kept));
    double norm2 = -1.0;
    for (Eigen::Index i = 0; i < pairs.values.size(); ++i) {
        const double res =
            (m.reduced * pairs.right.col(i) - pairs.values(i) * pairs.right.col(i)).norm();
        if (res <= 1e-8 * lower) continue;
        if (norm2 < 0.0)
            norm2 = Eigen::JacobiSVD<Eigen::MatrixXcd>(m.reduced).singularValues()(0);
        if (res > 1e-8 * norm2) {
            std::ostringstream msg;
            msg << "eigenpair residual " << res << " exceeds 1e-8 * ||A||_2 = " << 1e-8 * norm2
                << "; matrix follows\n" << m.reduced;
            throw numerical_error(msg.str());
        }
    }

    // Left eigenvectors from the inverse of the right-eigenvector matrix:
    // rows of R^{-1} satisfy row_i A = lambda_i row_i, so w_i = row_i^H.
    pairs.left = pairs.right.inverse().adjoint();
    if (!pairs.left.allFinite())
        throw numerical_error("right-eigenvector matrix is numerically singular; "
                              "left eigenvectors are unavailable");
    return pairs;
}

namespace {

double window_phase(const std::complex<double>& lambda, PhaseWindow window) {
    double phi = std::arg(lambda); // (-pi, pi]
    if (window == PhaseWindow::positive && phi > 0.0) phi -= 2.0 * M_PI;
    return phi;
}

} // namespace

EigenEstimate ground_energy_from_eigs(std::span<const std::complex<double>> eigs, double dt,
                                      PhaseWindow window, const AffineMap& affine) {
    if (eigs.empty()) throw validation_error("no eigenvalues to select from");
    if (dt <= 0.0) throw validation_error("timestep must be positive");

    int best = 0;
    double best_phase = window_phase(eigs[0], window);
    for (int i = 1; i < static_cast<int>(eigs.size()); ++i) {
        const double phi = window_phase(eigs[static_cast<std::size_t>(i)], window);
        if (phi > best_phase + 1e-12) {
            best = i;
            best_phase = phi;
        } else if (std::abs(phi - best_phase) <= 1e-12 &&
                   std::abs(eigs[static_cast<std::size_t>(i)]) >
                       std::abs(eigs[static_cast<std::size_t>(best)])) {
            best = i;
            best_phase = phi;
        }
    }

    EigenEstimate est;
    est.eigenvalues.assign(eigs.begin(), eigs.end());
    est.ground_index = best;
    est.phase = best_phase;
    est.energy = affine.invert(-best_phase / dt);
    return est;
}

EstimateTrace run_odmd(const OverlapSignal& sig, const OdmdConfig& cfg,
                       std::optional<double> reference_energy) {
    if (sig.size() < 2) throw validation_error("signal too short for any estimator step");
    if (cfg.dt <= 0.0) throw validation_error("timestep must be positive");

    EstimateTrace trace;
    trace.method = sig.parts == SignalParts::real_only ? "odmd_real" : "odmd";
    trace.has_reference = reference_energy.has_value();

    const int d_min = sig.parts == SignalParts::real_only ? 4 : 2;
    const int obs_per_sample = sig.parts == SignalParts::real_only ? 1 : 2;
    const int k_end = std::min(cfg.max_steps, sig.k_max());

    for (int k = 0; k <= k_end; ++k) {
        const int budget = k + 1;
        const EmbedDims dims = embed_for_budget(budget, cfg.alpha, sig.parts);
        if (dims.k < 0 || dims.d < d_min) continue;

        TraceRow row;
        row.k = k;
        row.n_observables = static_cast<long>(budget) * obs_per_sample;
        try {
            const HankelPair pair = hankelize(sig, dims.k, cfg.alpha);
            const SystemMatrix m = system_matrix(pair, cfg.threshold_rel);
            const Eigen::VectorXcd eigs = eig_general(m);
            const EigenEstimate est = ground_energy_from_eigs(
                std::span<const std::complex<double>>(eigs.data(),
                                                      static_cast<std::size_t>(eigs.size())),
                cfg.dt, cfg.window, cfg.affine);
            row.energy = est.energy;
            row.rank_kept = m.rank_kept;
            row.sigma_max = m.sigma_max();
            row.sigma_min_kept = m.sigma_min_kept();
            row.abs_error = reference_energy ? std::abs(est.energy - *reference_energy)
                                             : std::numeric_limits<double>::quiet_NaN();
        } catch (const numerical_error&) {
            row.skipped = true;
        }
        trace.rows.push_back(row);
    }
    return trace;
}

} // namespace odmd
