#include "odmd/trace.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace odmd {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

const TraceRow* EstimateTrace::last_valid() const {
    for (auto it = rows.rbegin(); it != rows.rend(); ++it)
        if (!it->skipped) return &*it;
    return nullptr;
}

std::optional<int> EstimateTrace::stabilization_step(double tol, int run_length) const {
    std::vector<const TraceRow*> valid;
    valid.reserve(rows.size());
    for (const auto& r : rows)
        if (!r.skipped) valid.push_back(&r);
    if (static_cast<int>(valid.size()) < run_length) return std::nullopt;

    for (std::size_t i = 0; i + run_length <= valid.size(); ++i) {
        double lo = valid[i]->energy, hi = valid[i]->energy;
        bool ok = true;
        for (std::size_t j = i; j < i + static_cast<std::size_t>(run_length); ++j) {
            lo = std::min(lo, valid[j]->energy);
            hi = std::max(hi, valid[j]->energy);
            if (hi - lo > 2.0 * tol) {
                ok = false;
                break;
            }
        }
        if (ok) return valid[i]->k;
    }
    return std::nullopt;
}

std::optional<int> EstimateTrace::first_step_below(double target) const {
    if (!has_reference) return std::nullopt;
    for (const auto& r : rows)
        if (!r.skipped && std::abs(r.abs_error) <= target) return r.k;
    return std::nullopt;
}

std::optional<long> EstimateTrace::observables_to_target(double target) const {
    if (!has_reference) return std::nullopt;
    for (const auto& r : rows)
        if (!r.skipped && std::abs(r.abs_error) <= target) return r.n_observables;
    return std::nullopt;
}

void write_trace_csv(const EstimateTrace& trace, std::ostream& out) {
    out << "method,k,n_observables,energy,abs_error,rank_kept,sigma_max,sigma_min_kept,skipped\n";
    for (const auto& r : trace.rows) {
        out << trace.method << ',' << r.k << ',' << r.n_observables << ','
            << fmt_double(r.energy) << ',';
        if (trace.has_reference && !r.skipped) out << fmt_double(r.abs_error);
        out << ',' << r.rank_kept << ',' << fmt_double(r.sigma_max) << ','
            << fmt_double(r.sigma_min_kept) << ',' << (r.skipped ? 1 : 0) << '\n';
    }
}

} // namespace odmd
