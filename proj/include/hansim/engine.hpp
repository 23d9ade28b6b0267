#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "hansim/metrics.hpp"
#include "hansim/scheduler.hpp"
#include "hansim/types.hpp"
#include "hansim/workload.hpp"

namespace hansim::engine {

struct SimOptions {
    scheduler::Mode scheduler_mode = scheduler::Mode::SlotBoundary;
    /// In coordinated mode, compare every node's scheduler replicas against
    /// node 0 and count ticks where any replica disagrees.
    bool check_agreement = false;
};

struct SimResult {
    std::vector<metrics::LoadTrace> stream_traces;  ///< per stream, plus "type1"
    metrics::LoadTrace total;
    std::vector<metrics::DelayRecord> delays;  ///< per served type-2 ON request
    std::vector<std::string> device_ids;
    std::vector<Seconds> on_seconds;  ///< per device, same order as device_ids
    std::int64_t divergent_ticks = 0;
    std::uint64_t override_admissions = 0;
};

/// Runs one scenario in one mode.
///
/// Coordinated: one node per appliance; every node replicates every stream's
/// scheduler and actuates only its own appliance from its own replica, so a
/// node that misses rounds acts on stale state (that is the point of
/// simulating the communication plane). Requests become visible system-wide
/// through rounds only; a node sees its own requests immediately.
///
/// Baseline: no coordination; each type-2 appliance free-runs its duty cycle
/// (ON for min_dcd, OFF for max_dcp - min_dcd) anchored at its own request
/// time. Type-1 appliances are served immediately in both modes.
///
/// Deterministic: same scenario and seed, same SimResult.
SimResult simulate(const workload::Scenario& scenario, workload::RunMode mode,
                   const SimOptions& options = {});

}  // namespace hansim::engine
