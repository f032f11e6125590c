#include "odmd/ground_state.hpp"

#include <cmath>
#include <functional>
#include <sstream>

namespace odmd {

namespace {

double phase_in_window(const std::complex<double>& lambda, PhaseWindow window) {
    double phi = std::arg(lambda);
    if (window == PhaseWindow::positive && phi > 0.0) phi -= 2.0 * M_PI;
    return phi;
}

// sum_n p_n f(E_n) exp(-i E_n tau dt) for tau = -(d-1)..(d-1).
Eigen::VectorXcd moment_table(const SpectralModel& model, double dt, int d,
                              const std::function<double(double)>& f) {
    Eigen::VectorXcd table(2 * d - 1);
    for (int tau = -(d - 1); tau <= d - 1; ++tau) {
        std::complex<double> acc = 0.0;
        for (std::size_t n = 0; n < model.size(); ++n)
            acc += model.probabilities[n] * f(model.energies[n]) *
                   std::polar(1.0, -model.energies[n] * static_cast<double>(tau) * dt);
        table(tau + d - 1) = acc;
    }
    return table;
}

std::complex<double> quadratic_form(const Eigen::VectorXcd& z, const Eigen::VectorXcd& table) {
    const int d = static_cast<int>(z.size());
    std::complex<double> acc = 0.0;
    for (int k = 0; k < d; ++k)
        for (int l = 0; l < d; ++l) acc += std::conj(z(k)) * z(l) * table(l - k + d - 1);
    return acc;
}

} // namespace

GroundWeights ground_state_weights(const HankelPair& pair, const SystemMatrix& m,
                                   PhaseWindow window) {
    const EigenPairs pairs = eig_general_full(m);

    int ground = 0;
    double best = phase_in_window(pairs.values(0), window);
    for (Eigen::Index i = 1; i < pairs.values.size(); ++i) {
        const double phi = phase_in_window(pairs.values(i), window);
        if (phi > best) {
            best = phi;
            ground = static_cast<int>(i);
        }
    }
    for (Eigen::Index i = 0; i < pairs.values.size(); ++i) {
        if (i == ground) continue;
        if (std::abs(phase_in_window(pairs.values(i), window) - best) <= 1e-10) {
            std::ostringstream msg;
            msg << "ground eigenvalue is phase-degenerate (gap <= 1e-10) with eigenvalue " << i;
            throw numerical_error(msg.str());
        }
    }

    const Eigen::VectorXcd w = pairs.left.col(ground);
    const Eigen::VectorXd inv_sqrt = m.sigma_kept.cwiseSqrt().cwiseInverse();

    GroundWeights weights;
    weights.dt = pair.dt;
    // Phi_0 = w^H Sigma^{-1/2} U^H, stored as the column vector of its entries.
    weights.z = (m.u_kept * (inv_sqrt.asDiagonal() * w)).conjugate();
    weights.normalized = false;
    return weights;
}

GroundWeights normalize_weights(const GroundWeights& w, const SpectralModel& model) {
    if (w.z.size() == 0) throw validation_error("empty weight vector");
    const Eigen::VectorXcd table =
        moment_table(model, w.dt, static_cast<int>(w.z.size()), [](double) { return 1.0; });
    const std::complex<double> norm2 = quadratic_form(w.z, table);
    if (norm2.real() <= 0.0)
        throw numerical_error("Gram-weighted norm of the weighted state is not positive");

    GroundWeights out = w;
    out.z /= std::sqrt(norm2.real());
    out.normalized = true;
    return out;
}

double expectation_from_weights(const GroundWeights& w, const SpectralModel& model,
                                Observable observable) {
    if (!w.normalized) throw validation_error("weights must be normalized first");

    const auto f = observable == Observable::hamiltonian
                       ? std::function<double(double)>([](double e) { return e; })
                       : std::function<double(double)>([](double e) { return e * e; });
    const Eigen::VectorXcd table = moment_table(model, w.dt, static_cast<int>(w.z.size()), f);
    const std::complex<double> acc = quadratic_form(w.z, table);

    const double tol = 1e-8 * std::max(1.0, std::abs(acc));
    if (std::abs(acc.imag()) > tol) {
        std::ostringstream msg;
        msg << "expectation has imaginary residue " << acc.imag() << " beyond tolerance " << tol;
        throw numerical_error(msg.str());
    }
    return acc.real();
}

double residual_norm(const GroundWeights& w, const SpectralModel& model, double e0) {
    if (!w.normalized) throw validation_error("weights must be normalized first");
    if (!std::isfinite(e0)) throw validation_error("e0 must be finite");

    // <H^2> - 2 e0 <H> + e0^2 evaluated as the shifted moment <(H - e0)^2>,
    // which keeps the radicand free of catastrophic cancellation near an
    // exact eigenstate.
    const Eigen::VectorXcd table =
        moment_table(model, w.dt, static_cast<int>(w.z.size()),
                     [e0](double e) { return (e - e0) * (e - e0); });
    const std::complex<double> acc = quadratic_form(w.z, table);
    const double radicand = acc.real();
    if (std::abs(acc.imag()) > 1e-8 * std::max(1.0, std::abs(radicand)))
        throw numerical_error("residual-norm moment has a large imaginary residue");
    if (radicand < -1e-10) {
        std::ostringstream msg;
        msg << "residual-norm radicand " << radicand << " is negative beyond tolerance";
        throw numerical_error(msg.str());
    }
    return std::sqrt(std::max(0.0, radicand)) / model.spectral_norm();
}

} // namespace odmd
