#include "odmd/hankel.hpp"

#include <cmath>
#include <sstream>

namespace odmd {

int embed_rows(int k, double alpha, SignalParts parts) {
    const double alpha_eff = parts == SignalParts::real_only ? 2.0 * alpha : alpha;
    int d = std::max(1, static_cast<int>(std::floor(alpha_eff * (k + 1))));
    return std::min(d, k + 1);
}

EmbedDims embed_for_budget(int samples, double alpha, SignalParts parts) {
    EmbedDims dims{-1, 0};
    for (int k = 0;; ++k) {
        const int d = embed_rows(k, alpha, parts);
        if (k + d + 1 > samples) break;
        dims = EmbedDims{k, d};
    }
    return dims;
}

HankelPair hankelize(const OverlapSignal& sig, int k, double alpha) {
    if (k < 0) throw validation_error("hankelize needs k >= 0");
    if (alpha <= 0.0 || alpha > 1.0) throw validation_error("aspect ratio alpha must be in (0, 1]");

    const int d = embed_rows(k, alpha, sig.parts);
    const int needed = k + d + 1;
    if (static_cast<int>(sig.size()) < needed) {
        std::ostringstream msg;
        msg << "hankelize needs K+d+1 = " << needed << " samples (K=" << k << ", d=" << d
            << "), signal holds " << sig.size();
        throw validation_error(msg.str());
    }

    HankelPair pair;
    pair.dt = sig.dt;
    pair.parts = sig.parts;
    pair.x.resize(d, k + 1);
    pair.x_shift.resize(d, k + 1);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j <= k; ++j) {
            pair.x(i, j) = sig.values[static_cast<std::size_t>(i + j)];
            pair.x_shift(i, j) = sig.values[static_cast<std::size_t>(i + j + 1)];
        }
    return pair;
}

} // namespace odmd
