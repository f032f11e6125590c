#ifndef ODMD_REPORT_HPP
#define ODMD_REPORT_HPP

#include <string>
#include <vector>

#include "odmd/scenario.hpp"

namespace odmd {

struct ManifestEntry {
    std::string path; ///< relative to the output directory
    std::string hash; ///< FNV-1a 64-bit of the file bytes, hex
};

struct FileManifest {
    std::vector<ManifestEntry> files;
};

/// Write one trace CSV per cell, an aggregate CSV, optional SVG charts
/// (log-scale error vs observable count, one series per method, with a rule
/// at the target accuracy), and a manifest listing every file with its
/// content hash. Returns the manifest; per-file I/O failures throw io_error.
FileManifest emit_report(const SweepReport& report, const std::string& out_dir, bool csv = true,
                         bool svg = false);

std::string fnv1a_hex(const std::string& bytes);

} // namespace odmd

#endif
