#include "odmd/baselines.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace odmd {

namespace {

std::complex<double> toeplitz_sample(const OverlapSignal& sig, int lag) {
    if (lag >= 0) return sig.values[static_cast<std::size_t>(lag)];
    return std::conj(sig.values[static_cast<std::size_t>(-lag)]);
}

void require_samples(const OverlapSignal& sig, int needed, const char* who) {
    if (static_cast<int>(sig.size()) < needed) {
        std::ostringstream msg;
        msg << who << " needs " << needed << " samples, signal holds " << sig.size();
        throw validation_error(msg.str());
    }
}

struct Projection {
    Eigen::MatrixXcd basis;    ///< m x r eigenvectors of S
    Eigen::VectorXd retained;  ///< their eigenvalues, ascending
    double lambda_max = 0.0;
};

// Eigenvalue pruning of the Hermitian overlap matrix: keep
// lambda > threshold_rel * lambda_max; negative eigenvalues always go.
// S is Hermitian up to measurement noise; the solver reads the lower
// triangle, which symmetrizes the sampled matrix.
Projection regularize_overlap(const Eigen::MatrixXcd& s, double threshold_rel) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(s);
    if (solver.info() != Eigen::Success)
        throw numerical_error("overlap-matrix eigensolver failed");

    const Eigen::VectorXd lam = solver.eigenvalues(); // ascending
    Projection proj;
    proj.lambda_max = lam(lam.size() - 1);

    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < lam.size(); ++i)
        if (lam(i) > 0.0 && lam(i) > threshold_rel * proj.lambda_max) keep.push_back(i);

    proj.basis.resize(s.rows(), static_cast<Eigen::Index>(keep.size()));
    proj.retained.resize(static_cast<Eigen::Index>(keep.size()));
    for (std::size_t j = 0; j < keep.size(); ++j) {
        proj.basis.col(static_cast<Eigen::Index>(j)) = solver.eigenvectors().col(keep[j]);
        proj.retained(static_cast<Eigen::Index>(j)) = lam(keep[j]);
    }
    return proj;
}

} // namespace

ToeplitzSubspaceMatrices build_uvqpe_matrices(const OverlapSignal& sig, int m) {
    if (m < 1) throw validation_error("subspace size m must be >= 1");
    require_samples(sig, m + 1, "uvqpe");

    ToeplitzSubspaceMatrices out;
    out.s.resize(m, m);
    out.t.resize(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            out.s(i, j) = toeplitz_sample(sig, j - i);
            out.t(i, j) = toeplitz_sample(sig, j - i + 1);
        }
    return out;
}

ToeplitzSubspaceMatrices build_vqpe_matrices(const OverlapSignal& sig,
                                             const OverlapSignal& h_sig, int m) {
    if (m < 1) throw validation_error("subspace size m must be >= 1");
    require_samples(sig, m, "vqpe overlap");
    require_samples(h_sig, m, "vqpe target");

    ToeplitzSubspaceMatrices out;
    out.s.resize(m, m);
    out.t.resize(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            out.s(i, j) = toeplitz_sample(sig, j - i);
            out.t(i, j) = toeplitz_sample(h_sig, j - i);
        }
    return out;
}

OverlapSignal hamiltonian_signal(const SpectralModel& model, const OverlapSignal& like) {
    if (model.empty()) throw validation_error("empty spectral model");

    OverlapSignal h;
    h.dt = like.dt;
    h.parts = SignalParts::complex_full;
    h.source_label = like.source_label + ":h";
    h.values.resize(like.size());
    for (std::size_t k = 0; k < like.size(); ++k) {
        std::complex<double> acc = 0.0;
        const double t = static_cast<double>(k) * like.dt;
        for (std::size_t n = 0; n < model.size(); ++n)
            acc += model.probabilities[n] * model.energies[n] *
                   std::polar(1.0, -model.energies[n] * t);
        h.values[k] = acc;
    }
    if (like.noise_level > 0.0) {
        // Independent noise stream for the H-weighted series: fixed tag
        // XORed into the seed.
        const std::uint64_t h_seed = like.seed ^ 0x68616D696C746FULL;
        h = add_gaussian_noise(h, like.noise_level, h_seed);
    }
    return h;
}

namespace {

SubspaceEstimate solve_projected(const ToeplitzSubspaceMatrices& mats, double threshold_rel,
                                 bool hermitian_pencil, double dt, PhaseWindow window,
                                 const AffineMap& affine) {
    SubspaceEstimate est;
    const Projection proj = regularize_overlap(mats.s, threshold_rel);
    est.lambda_max = proj.lambda_max;
    est.rank_kept = static_cast<int>(proj.retained.size());
    if (est.rank_kept == 0) {
        est.skipped = true;
        return est;
    }
    est.lambda_min_kept = proj.retained(0);

    const Eigen::VectorXd inv_sqrt = proj.retained.cwiseSqrt().cwiseInverse();
    Eigen::MatrixXcd g = inv_sqrt.asDiagonal() *
                         (proj.basis.adjoint() * mats.t * proj.basis) *
                         inv_sqrt.asDiagonal();

    if (hermitian_pencil) {
        g = 0.5 * (g + g.adjoint()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(g);
        if (solver.info() != Eigen::Success)
            throw numerical_error("projected Hermitian eigensolver failed");
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
            est.eigenvalues.emplace_back(solver.eigenvalues()(i), 0.0);
        est.energy = affine.invert(solver.eigenvalues()(0));
    } else {
        Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(g, false);
        if (solver.info() != Eigen::Success)
            throw numerical_error("projected eigensolver failed");
        for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
            est.eigenvalues.push_back(solver.eigenvalues()(i));
        const EigenEstimate ge = ground_energy_from_eigs(est.eigenvalues, dt, window, affine);
        est.energy = ge.energy;
    }
    return est;
}

} // namespace

SubspaceEstimate uvqpe(const OverlapSignal& sig, int m, double threshold_rel, PhaseWindow window,
                       const AffineMap& affine) {
    if (sig.parts != SignalParts::complex_full)
        throw validation_error("uvqpe needs the full complex overlap signal");
    const ToeplitzSubspaceMatrices mats = build_uvqpe_matrices(sig, m);
    return solve_projected(mats, threshold_rel, /*hermitian_pencil=*/false, sig.dt, window,
                           affine);
}

SubspaceEstimate vqpe(const SpectralModel& model, const OverlapSignal& sig, int m,
                      double threshold_rel, const AffineMap& affine) {
    return vqpe_with_target(sig, hamiltonian_signal(model, sig), m, threshold_rel, affine);
}

SubspaceEstimate vqpe_with_target(const OverlapSignal& sig, const OverlapSignal& h_sig, int m,
                                  double threshold_rel, const AffineMap& affine) {
    if (sig.parts != SignalParts::complex_full)
        throw validation_error("vqpe needs the full complex overlap signal");
    const ToeplitzSubspaceMatrices mats = build_vqpe_matrices(sig, h_sig, m);
    return solve_projected(mats, threshold_rel, /*hermitian_pencil=*/true, sig.dt,
                           PhaseWindow::symmetric, affine);
}

namespace {

double qcels_objective(const OverlapSignal& sig, double theta, std::complex<double>* r_out) {
    const auto count = static_cast<double>(sig.size());
    std::complex<double> r = 0.0;
    double total = 0.0;
    for (std::size_t k = 0; k < sig.size(); ++k) {
        const double t = static_cast<double>(k) * sig.dt;
        r += sig.values[k] * std::polar(1.0, theta * t);
        total += std::norm(sig.values[k]);
    }
    r /= count;
    if (r_out) *r_out = r;
    return total - count * std::norm(r);
}

} // namespace

QcelsFit qcels(const OverlapSignal& sig, PhaseWindow window, int grid_points, double theta_tol) {
    if (sig.parts != SignalParts::complex_full)
        throw validation_error("qcels needs the full complex overlap signal");
    if (sig.size() < 2) throw validation_error("qcels needs at least two samples");
    if (grid_points < 8) throw validation_error("qcels grid too coarse");

    const double span = 2.0 * M_PI / sig.dt;
    const double lo = window == PhaseWindow::symmetric ? -0.5 * span : 0.0;

    // Dense scan, then golden-section refinement inside the best bracket.
    double best_theta = lo;
    double best_obj = std::numeric_limits<double>::infinity();
    const double step = span / grid_points;
    for (int i = 0; i < grid_points; ++i) {
        const double theta = lo + (i + 0.5) * step;
        const double obj = qcels_objective(sig, theta, nullptr);
        if (obj < best_obj) {
            best_obj = obj;
            best_theta = theta;
        }
    }

    const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = best_theta - step;
    double b = best_theta + step;
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = qcels_objective(sig, x1, nullptr);
    double f2 = qcels_objective(sig, x2, nullptr);
    while (b - a > theta_tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = qcels_objective(sig, x1, nullptr);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = qcels_objective(sig, x2, nullptr);
        }
    }

    double theta = 0.5 * (a + b);
    std::complex<double> r;
    double obj = qcels_objective(sig, theta, &r);
    if (best_obj < obj) { // keep the grid winner if refinement drifted
        theta = best_theta;
        obj = qcels_objective(sig, theta, &r);
    }
    return QcelsFit{r, theta, std::max(0.0, obj)};
}

EspritResult esprit(const OverlapSignal& sig, int d, int k, double threshold_rel) {
    if (d < 1 || k < 0) throw validation_error("esprit needs d >= 1 and k >= 0");
    require_samples(sig, k + d + 1, "esprit");

    Eigen::MatrixXcd base(d, k + 2);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= k + 1; ++j) base(i, j) = sig.values[static_cast<std::size_t>(i + j)];

    Eigen::VectorXd sv;
    Eigen::MatrixXcd v_full;
    if (std::min(base.rows(), base.cols()) > 32) {
        Eigen::BDCSVD<Eigen::MatrixXcd> svd(base, Eigen::ComputeThinV);
        sv = svd.singularValues();
        v_full = svd.matrixV();
    } else {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(base, Eigen::ComputeThinV);
        sv = svd.singularValues();
        v_full = svd.matrixV();
    }
    const double sigma_max = sv.size() ? sv(0) : 0.0;

    EspritResult out;
    out.sigma_max = sigma_max;
    int rank = 0;
    while (rank < sv.size() && sv(rank) > threshold_rel * sigma_max && sv(rank) > 0.0) ++rank;
    if (rank == 0) {
        out.skipped = true;
        return out;
    }
    out.rank_kept = rank;
    out.sigma_min_kept = sv(rank - 1);

    // Rows of V span the signal subspace over time; the one-step shift acts
    // on them as W_up Phi = W_low. The retained spectrum of Phi^H matches
    // the ODMD system matrix.
    const Eigen::MatrixXcd w = v_full.leftCols(rank); // (k+2) x r
    const Eigen::MatrixXcd w_up = w.topRows(k + 1);
    const Eigen::MatrixXcd w_low = w.bottomRows(k + 1);
    const Eigen::MatrixXcd phi =
        w_up.colPivHouseholderQr().solve(w_low); // least squares, r x r

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(phi.adjoint(), false);
    if (solver.info() != Eigen::Success) throw numerical_error("esprit eigensolver failed");
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        out.eigenvalues.push_back(solver.eigenvalues()(i));
    return out;
}

PronyResult prony_full(const OverlapSignal& sig, int n_modes) {
    if (n_modes < 1) throw validation_error("prony needs at least one mode");
    require_samples(sig, 2 * n_modes, "prony");
    const int d = n_modes;

    // Square recurrence system: sum_l c_l s_{k+l} = -s_{k+d}, k = 0..d-1.
    Eigen::MatrixXcd m(d, d);
    Eigen::VectorXcd rhs(d);
    for (int k = 0; k < d; ++k) {
        for (int l = 0; l < d; ++l) m(k, l) = sig.values[static_cast<std::size_t>(k + l)];
        rhs(k) = -sig.values[static_cast<std::size_t>(k + d)];
    }
    const Eigen::VectorXcd c = m.colPivHouseholderQr().solve(rhs);

    Eigen::MatrixXcd companion = Eigen::MatrixXcd::Zero(d, d);
    for (int i = 0; i + 1 < d; ++i) companion(i, i + 1) = 1.0;
    for (int l = 0; l < d; ++l) companion(d - 1, l) = -c(l);

    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(companion, false);
    if (solver.info() != Eigen::Success) throw numerical_error("companion eigensolve failed");

    PronyResult out;
    for (Eigen::Index i = 0; i < solver.eigenvalues().size(); ++i)
        out.eigenvalues.push_back(solver.eigenvalues()(i));

    Eigen::MatrixXcd vander(d, d);
    for (int k = 0; k < d; ++k)
        for (int n = 0; n < d; ++n)
            vander(k, n) = std::pow(out.eigenvalues[static_cast<std::size_t>(n)], k);

    Eigen::JacobiSVD<Eigen::MatrixXcd> vsvd(vander, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double smin = vsvd.singularValues()(d - 1);
    out.vandermonde_condition =
        smin > 0.0 ? vsvd.singularValues()(0) / smin : std::numeric_limits<double>::infinity();
    out.ill_conditioned = out.vandermonde_condition > 1e12;

    Eigen::VectorXcd samples(d);
    for (int k = 0; k < d; ++k) samples(k) = sig.values[static_cast<std::size_t>(k)];
    const Eigen::VectorXcd amps = vsvd.solve(samples);
    for (int n = 0; n < d; ++n) out.amplitudes.push_back(amps(n));
    return out;
}

} // namespace odmd
