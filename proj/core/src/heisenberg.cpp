#include "odmd/heisenberg.hpp"

#include <cmath>
#include <sstream>

namespace odmd {

HamiltonianMatrix build_heisenberg(int sites, double coupling, bool periodic) {
    if (sites < 2 || sites > 14) {
        std::ostringstream msg;
        msg << "heisenberg chain needs 2 <= sites <= 14, got " << sites;
        throw validation_error(msg.str());
    }
    if (!std::isfinite(coupling)) throw validation_error("coupling must be finite");

    const Eigen::Index dim = Eigen::Index{1} << sites;
    HamiltonianMatrix h;
    h.entries = Eigen::MatrixXd::Zero(dim, dim);
    {
        std::ostringstream lbl;
        lbl << "heisenberg_L" << sites << (periodic ? "_pbc" : "_obc");
        h.label = lbl.str();
    }

    const int n_bonds = periodic ? sites : sites - 1;
    const double c = coupling / 4.0;

    // sigma.sigma on a bond: diagonal +-1 from ZZ, off-diagonal 2 between
    // the two anti-aligned configurations from XX + YY.
    for (int b = 0; b < n_bonds; ++b) {
        const int a = b;
        const int bb = (b + 1) % sites;
        for (Eigen::Index state = 0; state < dim; ++state) {
            const int sa = static_cast<int>((state >> a) & 1);
            const int sb = static_cast<int>((state >> bb) & 1);
            if (sa == sb) {
                h.entries(state, state) += c;
            } else {
                h.entries(state, state) -= c;
                const Eigen::Index flipped =
                    state ^ ((Eigen::Index{1} << a) | (Eigen::Index{1} << bb));
                h.entries(flipped, state) += 2.0 * c;
            }
        }
    }
    return h;
}

StateVector neel_reference(int sites, NeelKind kind) {
    if (sites < 2 || sites % 2 != 0)
        throw validation_error("Neel reference needs an even number of sites >= 2");

    const Eigen::Index dim = Eigen::Index{1} << sites;

    // |01>^(L/2): odd sites carry bit 1.
    Eigen::Index idx_a = 0;
    for (int i = 1; i < sites; i += 2) idx_a |= Eigen::Index{1} << i;
    const Eigen::Index idx_b = idx_a ^ (dim - 1); // the flipped ordering |10>^(L/2)

    StateVector ref;
    ref.amplitudes = Eigen::VectorXcd::Zero(dim);
    if (kind == NeelKind::product) {
        ref.amplitudes(idx_a) = 1.0;
    } else {
        // Relative sign (-1)^(L/2) matches the momentum sector of the
        // periodic ground state, making the superposition overlap exactly
        // twice the product-state overlap.
        const double sign = (sites / 2) % 2 == 0 ? 1.0 : -1.0;
        const double amp = 1.0 / std::sqrt(2.0);
        ref.amplitudes(idx_a) = amp;
        ref.amplitudes(idx_b) = sign * amp;
    }
    return ref;
}

SpectralModel spectral_decompose(const HamiltonianMatrix& h, const StateVector& ref,
                                 double merge_tol, double prune_below) {
    if (h.dim() != ref.dim())
        throw validation_error("Hamiltonian and reference state dimensions differ");
    if (h.entries.rows() != h.entries.cols())
        throw validation_error("Hamiltonian matrix is not square");

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(h.entries);
    if (solver.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "symmetric eigensolver failed on " << h.dim() << "x" << h.dim()
            << " matrix (info=" << static_cast<int>(solver.info()) << ")";
        throw numerical_error(msg.str());
    }

    SpectralModel model;
    model.label = h.label;
    model.energies.resize(static_cast<std::size_t>(h.dim()));
    model.probabilities.resize(static_cast<std::size_t>(h.dim()));
    for (Eigen::Index n = 0; n < h.dim(); ++n) {
        model.energies[static_cast<std::size_t>(n)] = solver.eigenvalues()(n);
        const std::complex<double> amp =
            solver.eigenvectors().col(n).cast<std::complex<double>>().dot(ref.amplitudes);
        model.probabilities[static_cast<std::size_t>(n)] = std::norm(amp);
    }

    model = merge_degenerate(model, merge_tol);
    if (prune_below > 0.0) model = prune_small(model, prune_below);
    return model;
}

} // namespace odmd
