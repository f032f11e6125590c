#ifndef ODMD_HEISENBERG_HPP
#define ODMD_HEISENBERG_HPP

#include <Eigen/Dense>
#include <complex>
#include <string>

#include "odmd/spectral_model.hpp"

namespace odmd {

/// Dense real-symmetric Hamiltonian. Spin chains are real in the
/// computational basis, so complex Hermitian storage is not needed.
struct HamiltonianMatrix {
    Eigen::MatrixXd entries;
    std::string label;

    Eigen::Index dim() const { return entries.rows(); }
};

struct StateVector {
    Eigen::VectorXcd amplitudes;

    Eigen::Index dim() const { return amplitudes.size(); }
    double norm() const { return amplitudes.norm(); }
};

enum class NeelKind { product, superposition };

/// Antiferromagnetic Heisenberg chain of spin-1/2 sites,
///   H = coupling/4 * sum_i sigma_i . sigma_{i+1},
/// so coupling = 4 gives plain sigma.sigma bond operators with eigenvalues
/// {-3, +1} per bond. Site i occupies bit i of the basis index. The periodic
/// flag adds the (L-1, 0) bond. 2 <= sites <= 14 (dense storage cap).
HamiltonianMatrix build_heisenberg(int sites, double coupling, bool periodic);

/// Neel reference states |0101...> (site 0 in |0>).
/// `product` is the single product state; `superposition` combines the two
/// Neel orderings with relative sign (-1)^(L/2), which places the state in
/// the momentum sector of the periodic ground state (for L=2 this is the
/// singlet (|01>-|10>)/sqrt(2)). Requires even L.
StateVector neel_reference(int sites, NeelKind kind);

/// Full dense symmetric eigendecomposition with reference-state
/// probabilities p_n = |<psi_n|ref>|^2. Degenerate levels are merged
/// (merge_tol, relative) and levels with p_n < prune_below are dropped;
/// pass prune_below = 0 to keep the complete spectrum.
SpectralModel spectral_decompose(const HamiltonianMatrix& h, const StateVector& ref,
                                 double merge_tol = 1e-9, double prune_below = 1e-14);

} // namespace odmd

#endif
