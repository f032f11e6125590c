#ifndef ODMD_AFFINE_MAP_HPP
#define ODMD_AFFINE_MAP_HPP

#include "odmd/errors.hpp"

namespace odmd {

/// Affine change of energy units, e -> scale*e + shift, with scale > 0.
/// Used to move a spectrum into a phase-friendly window and to map
/// estimates back into the original units afterwards.
struct AffineMap {
    double scale = 1.0;
    double shift = 0.0;

    double apply(double e) const { return scale * e + shift; }
    double invert(double e) const { return (e - shift) / scale; }

    /// Map composed with another applied after this one: x -> outer(this(x)).
    AffineMap then(const AffineMap& outer) const {
        return AffineMap{outer.scale * scale, outer.scale * shift + outer.shift};
    }

    bool is_identity() const { return scale == 1.0 && shift == 0.0; }

    static AffineMap identity() { return AffineMap{}; }
};

} // namespace odmd

#endif
