#include "odmd/spectral_model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace odmd {

double SpectralModel::ground_energy() const {
    if (energies.empty()) throw validation_error("spectral model is empty");
    return energies.front();
}

double SpectralModel::top_energy() const {
    if (energies.empty()) throw validation_error("spectral model is empty");
    return energies.back();
}

double SpectralModel::spectral_norm() const {
    return std::max(std::abs(ground_energy()), std::abs(top_energy()));
}

double SpectralModel::probability_sum() const {
    return std::accumulate(probabilities.begin(), probabilities.end(), 0.0);
}

double SpectralModel::mean_energy() const {
    double m = 0.0;
    for (std::size_t n = 0; n < energies.size(); ++n) m += probabilities[n] * energies[n];
    return m;
}

double SpectralModel::energy_variance() const {
    const double m = mean_energy();
    double v = 0.0;
    for (std::size_t n = 0; n < energies.size(); ++n) {
        const double d = energies[n] - m;
        v += probabilities[n] * d * d;
    }
    return std::max(0.0, v);
}

SpectralModel merge_degenerate(const SpectralModel& model, double rel_tol) {
    if (model.energies.size() != model.probabilities.size())
        throw validation_error("energies/probabilities length mismatch");
    if (model.empty()) return model;

    double scale = 1.0;
    for (double e : model.energies) scale = std::max(scale, std::abs(e));
    const double tol = rel_tol * scale;

    SpectralModel out;
    out.affine = model.affine;
    out.label = model.label;

    std::size_t i = 0;
    while (i < model.energies.size()) {
        std::size_t j = i + 1;
        while (j < model.energies.size() && model.energies[j] - model.energies[j - 1] <= tol) ++j;
        double p = 0.0, ep = 0.0, esum = 0.0;
        for (std::size_t n = i; n < j; ++n) {
            p += model.probabilities[n];
            ep += model.probabilities[n] * model.energies[n];
            esum += model.energies[n];
        }
        const double e = (p > 0.0) ? ep / p : esum / static_cast<double>(j - i);
        out.energies.push_back(e);
        out.probabilities.push_back(p);
        i = j;
    }
    return out;
}

SpectralModel prune_small(const SpectralModel& model, double threshold) {
    SpectralModel out;
    out.affine = model.affine;
    out.label = model.label;
    for (std::size_t n = 0; n < model.energies.size(); ++n) {
        if (model.probabilities[n] >= threshold) {
            out.energies.push_back(model.energies[n]);
            out.probabilities.push_back(model.probabilities[n]);
        }
    }
    if (out.empty())
        throw validation_error("pruning removed every level; lower the threshold");
    return out;
}

SpectralModel affine_rescale(const SpectralModel& model, double lo, double hi) {
    if (model.empty()) throw validation_error("cannot rescale an empty spectrum");
    if (hi < lo) throw validation_error("rescale window has hi < lo");

    const double range = model.spectral_range();
    AffineMap step;
    if (range == 0.0) {
        if (hi != lo)
            throw numerical_error("degenerate spectrum cannot be scaled onto a nonzero window; "
                                  "use lo == hi for a pure shift");
        step = AffineMap{1.0, lo - model.ground_energy()};
    } else {
        if (hi == lo)
            throw validation_error("nondegenerate spectrum mapped to a zero-width window");
        const double scale = (hi - lo) / range;
        step = AffineMap{scale, lo - scale * model.ground_energy()};
    }

    SpectralModel out = model;
    for (double& e : out.energies) e = step.apply(e);
    out.affine = model.affine_or_identity().then(step);
    return out;
}

SpectralModel with_ground_probability(const SpectralModel& model, double p0) {
    if (model.empty()) throw validation_error("empty spectral model");
    if (p0 <= 0.0 || p0 > 1.0) throw validation_error("p0 must lie in (0, 1]");
    if (model.size() == 1 && p0 != 1.0)
        throw validation_error("a single-level model only admits p0 = 1");

    SpectralModel out = model;
    const double excited = model.probability_sum() - model.probabilities.front();
    out.probabilities.front() = p0;
    for (std::size_t n = 1; n < out.probabilities.size(); ++n)
        out.probabilities[n] = excited > 0.0
                                   ? model.probabilities[n] * (1.0 - p0) / excited
                                   : (1.0 - p0) / static_cast<double>(model.size() - 1);
    return out;
}

void validate_model(const SpectralModel& model, double p_tol) {
    std::ostringstream problems;
    if (model.energies.size() != model.probabilities.size())
        problems << "energies/probabilities length mismatch; ";
    if (model.empty()) problems << "model is empty; ";
    for (std::size_t n = 0; n + 1 < model.energies.size(); ++n)
        if (model.energies[n] > model.energies[n + 1]) {
            problems << "energies not sorted ascending; ";
            break;
        }
    for (double p : model.probabilities)
        if (p < 0.0 || !std::isfinite(p)) {
            problems << "negative or non-finite probability; ";
            break;
        }
    if (!model.empty() && std::abs(model.probability_sum() - 1.0) > p_tol)
        problems << "probabilities sum to " << model.probability_sum() << ", expected 1; ";
    if (model.affine && model.affine->scale <= 0.0)
        problems << "affine scale must be positive; ";

    const std::string msg = problems.str();
    if (!msg.empty()) throw validation_error("invalid spectral model: " + msg);
}

} // namespace odmd
