#ifndef ODMD_TRACE_HPP
#define ODMD_TRACE_HPP

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace odmd {

/// One estimator step. `abs_error` is NaN when no reference energy is known.
/// Skipped rows mark steps where the estimator had no usable rank; their
/// numeric fields are zero.
struct TraceRow {
    int k = 0;
    long n_observables = 0;
    double energy = 0.0;
    double abs_error = 0.0;
    int rank_kept = 0;
    double sigma_max = 0.0;
    double sigma_min_kept = 0.0;
    bool skipped = false;
};

/// Per-step history of one estimator run, in strictly increasing k.
struct EstimateTrace {
    std::string method;
    std::vector<TraceRow> rows;

    bool has_reference = false;

    const TraceRow* last_valid() const;

    /// First k from which the estimate stays inside a band of width
    /// 2*tol for `run_length` consecutive valid steps; nullopt if never.
    std::optional<int> stabilization_step(double tol = 1e-6, int run_length = 10) const;

    /// First k whose |error| <= target; requires a reference. nullopt if never.
    std::optional<int> first_step_below(double target) const;
    /// Observable count at first_step_below. nullopt if never reached.
    std::optional<long> observables_to_target(double target) const;
};

/// Shared trace CSV schema:
///   method,k,n_observables,energy,abs_error,rank_kept,sigma_max,sigma_min_kept,skipped
/// abs_error is left empty when no reference energy was supplied.
void write_trace_csv(const EstimateTrace& trace, std::ostream& out);

/// Deterministic %.17g float formatting used by every CSV/report writer.
std::string fmt_double(double v);

} // namespace odmd

#endif
