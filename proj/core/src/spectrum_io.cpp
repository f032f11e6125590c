#include "odmd/spectrum_io.hpp"

#include <fstream>
#include <json.hpp>

namespace odmd {

using nlohmann::json;

SpectralModel read_spectrum(std::istream& in, const std::string& origin) {
    json j;
    try {
        j = json::parse(in);
    } catch (const json::parse_error& e) {
        throw io_error("failed to parse spectrum " + origin + ": " + e.what());
    }

    SpectralModel model;
    try {
        model.energies = j.at("energies").get<std::vector<double>>();
        model.probabilities = j.at("probabilities").get<std::vector<double>>();
        if (j.contains("label") && !j["label"].is_null())
            model.label = j["label"].get<std::string>();
        if (j.contains("affine") && !j["affine"].is_null()) {
            AffineMap map;
            map.scale = j["affine"].at("scale").get<double>();
            map.shift = j["affine"].at("shift").get<double>();
            model.affine = map;
        }
    } catch (const json::exception& e) {
        throw validation_error("spectrum " + origin + " does not match the schema: " + e.what());
    }

    validate_model(model);
    return model;
}

SpectralModel load_spectrum(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open spectrum file: " + path);
    return read_spectrum(in, path);
}

void write_spectrum(const SpectralModel& model, std::ostream& out) {
    json j;
    j["energies"] = model.energies;
    j["probabilities"] = model.probabilities;
    if (model.affine)
        j["affine"] = {{"scale", model.affine->scale}, {"shift", model.affine->shift}};
    else
        j["affine"] = nullptr;
    j["label"] = model.label;
    out << j.dump(2) << '\n';
}

void save_spectrum(const SpectralModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open spectrum file for writing: " + path);
    write_spectrum(model, out);
    if (!out) throw io_error("failed while writing spectrum file: " + path);
}

} // namespace odmd
