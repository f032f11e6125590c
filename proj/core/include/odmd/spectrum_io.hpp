#ifndef ODMD_SPECTRUM_IO_HPP
#define ODMD_SPECTRUM_IO_HPP

#include <iosfwd>
#include <string>

#include "odmd/spectral_model.hpp"

namespace odmd {

// Spectrum file schema (JSON):
//   {"energies": [...], "probabilities": [...],
//    "affine": {"scale": s, "shift": b} | null, "label": "..."}
// Energies ascending, arrays of equal length, probabilities summing to 1
// within 1e-6.

SpectralModel load_spectrum(const std::string& path);
SpectralModel read_spectrum(std::istream& in, const std::string& origin = "<stream>");

void save_spectrum(const SpectralModel& model, const std::string& path);
void write_spectrum(const SpectralModel& model, std::ostream& out);

} // namespace odmd

#endif
