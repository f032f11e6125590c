#ifndef ODMD_HANKEL_HPP
#define ODMD_HANKEL_HPP

#include <Eigen/Dense>

#include "odmd/signal.hpp"

namespace odmd {

/// Time-shifted Hankel pair: X[i][j] = s_{i+j}, X'[i][j] = s_{i+j+1},
/// d rows by K+1 columns, consuming K+d+1 samples in total.
struct HankelPair {
    Eigen::MatrixXcd x;       ///< X_{0:K}
    Eigen::MatrixXcd x_shift; ///< X_{1:K+1}
    double dt = 1.0;
    SignalParts parts = SignalParts::complex_full;

    Eigen::Index d() const { return x.rows(); }
    Eigen::Index cols() const { return x.cols(); } ///< K+1
};

/// Row count for a given column bound K and aspect ratio alpha:
/// d = max(1, floor(alpha_eff*(K+1))) with alpha_eff = alpha for complex
/// signals and 2*alpha for real_only ones (conjugate pairs double the model
/// order), capped at K+1 so X never has more rows than columns.
int embed_rows(int k, double alpha, SignalParts parts);

struct EmbedDims {
    int k; ///< column bound K
    int d; ///< row count
};

/// Largest K such that K + d(K) + 1 fits in `samples`; d per embed_rows.
/// Returns {-1, 0} when not even K=0 fits.
EmbedDims embed_for_budget(int samples, double alpha, SignalParts parts);

/// Build the pair from the leading K+d+1 samples of `sig`.
HankelPair hankelize(const OverlapSignal& sig, int k, double alpha = 0.5);

} // namespace odmd

#endif
