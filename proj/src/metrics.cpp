#include "hansim/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace hansim::metrics {

double peak_load(const LoadTrace& trace) {
    if (trace.samples.empty()) throw MetricError("peak_load: empty trace");
    return *std::max_element(trace.samples.begin(), trace.samples.end());
}

std::pair<double, double> load_stats(const LoadTrace& trace) {
    if (trace.samples.empty()) throw MetricError("load_stats: empty trace");
    const double n = static_cast<double>(trace.samples.size());
    const double mean = std::accumulate(trace.samples.begin(), trace.samples.end(), 0.0) / n;
    double acc = 0.0;
    for (double s : trace.samples) acc += (s - mean) * (s - mean);
    return {mean, std::sqrt(acc / n)};
}

double avg_delay(const std::vector<DelayRecord>& records) {
    if (records.empty()) throw MetricError("avg_delay: no delay records");
    double acc = 0.0;
    for (const auto& r : records) acc += static_cast<double>(r.delay_s());
    return acc / static_cast<double>(records.size());
}

LoadTrace aggregate(const std::vector<LoadTrace>& traces) {
    LoadTrace total;
    total.label = "total";
    if (traces.empty()) return total;
    total.tick_s = traces.front().tick_s;
    total.samples.assign(traces.front().samples.size(), 0.0);
    for (const LoadTrace& t : traces) {
        if (t.tick_s != total.tick_s || t.samples.size() != total.samples.size()) {
            throw MetricError("aggregate: traces differ in length or tick");
        }
        for (std::size_t i = 0; i < t.samples.size(); ++i) total.samples[i] += t.samples[i];
    }
    return total;
}

LoadTrace skip_prefix(const LoadTrace& trace, Seconds skip_s) {
    if (skip_s <= 0) return trace;
    LoadTrace out;
    out.label = trace.label;
    out.tick_s = trace.tick_s;
    const auto skip_samples =
        std::min<std::size_t>(trace.samples.size(), static_cast<std::size_t>(skip_s / trace.tick_s));
    out.samples.assign(trace.samples.begin() + static_cast<std::ptrdiff_t>(skip_samples),
                       trace.samples.end());
    return out;
}

Summary summarize(const std::vector<LoadTrace>& stream_traces, const LoadTrace& total,
                  const std::vector<DelayRecord>& delays, Seconds skip_s) {
    Summary s;
    const LoadTrace windowed = skip_prefix(total, skip_s);
    if (!windowed.samples.empty()) {
        s.peak_kw = peak_load(windowed);
        std::tie(s.mean_kw, s.std_kw) = load_stats(windowed);
    }
    if (!delays.empty()) s.avg_delay_s = avg_delay(delays);
    for (const LoadTrace& t : stream_traces) {
        const LoadTrace w = skip_prefix(t, skip_s);
        if (w.samples.empty()) continue;
        StreamStats st;
        st.label = t.label;
        st.peak_kw = peak_load(w);
        std::tie(st.mean_kw, st.std_kw) = load_stats(w);
        s.streams.push_back(std::move(st));
    }
    return s;
}

}  // namespace hansim::metrics
