#pragma once

#include <optional>
#include <string>
#include <vector>

#include "hansim/types.hpp"

namespace hansim::metrics {

/// Per-tick aggregate power of one stream (or of the whole system).
struct LoadTrace {
    std::string label;
    Seconds tick_s = 1;
    std::vector<double> samples;  ///< kW, one per tick

    bool operator==(const LoadTrace&) const = default;
};

struct DelayRecord {
    std::string device;
    Seconds request_s = 0;
    Seconds first_on_s = 0;

    Seconds delay_s() const { return first_on_s - request_s; }
};

struct StreamStats {
    std::string label;
    double peak_kw = 0.0;
    double mean_kw = 0.0;
    double std_kw = 0.0;
};

struct Summary {
    double peak_kw = 0.0;
    double mean_kw = 0.0;
    double std_kw = 0.0;
    std::optional<double> avg_delay_s;  ///< absent when there were no requests
    std::vector<StreamStats> streams;
};

/// Maximum sample. Throws MetricError on an empty trace.
double peak_load(const LoadTrace& trace);

/// Arithmetic mean and population standard deviation.
/// Throws MetricError on an empty trace.
std::pair<double, double> load_stats(const LoadTrace& trace);

/// Mean delay in seconds. Throws MetricError when there are no records.
double avg_delay(const std::vector<DelayRecord>& records);

/// Pointwise sum. All traces must share length and tick; throws MetricError
/// otherwise. An empty list yields an empty total.
LoadTrace aggregate(const std::vector<LoadTrace>& traces);

/// Trace restricted to samples from `skip_s` on (for excluding warm-up).
LoadTrace skip_prefix(const LoadTrace& trace, Seconds skip_s);

/// Full summary of one simulation outcome.
Summary summarize(const std::vector<LoadTrace>& stream_traces, const LoadTrace& total,
                  const std::vector<DelayRecord>& delays, Seconds skip_s = 0);

}  // namespace hansim::metrics
