#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "hansim/domain.hpp"
#include "hansim/types.hpp"

namespace hansim::scheduler {

/// How the scheduling pass (P3) is driven.
///
/// SlotBoundary is the operational mode: P1 and P2 run every tick, P3 fires
/// only at stream slot boundaries (now % min_dcd == 0) and whenever a waiting
/// deadline has been reached. A running device yields once it has accumulated
/// a full min_dcd of ON time, which keeps hand-offs on the slot grid, and the
/// admission quota divides the waiting count by the exact (unfloored) number
/// of min_dcd slots left before the latest waiting deadline.
///
/// LiteralP3 preserves the one-to-one pseudocode reading for side-by-side
/// study: P3 runs every tick, a running device yields only after strictly
/// more than min_dcd, slots are floored, and the quota loop admits
/// floor(size/slots)+1 devices. Load-shape guarantees hold only in
/// SlotBoundary mode.
enum class Mode : std::uint8_t { SlotBoundary, LiteralP3 };

/// Per-stream scheduler configuration. Devices are identified by their slot
/// index [0, device_count); the embedding layer owns the mapping to real ids.
struct StreamConfig {
    domain::StreamKey stream;
    std::uint32_t device_count = 0;
    Mode mode = Mode::SlotBoundary;
};

/// One request as seen by the scheduler after dissemination.
struct Request {
    Seconds time_s = 0;  ///< original user timestamp (for audit records)
    std::uint32_t device = 0;
    Action action = Action::On;
};

struct WlEntry {
    std::uint32_t device = 0;
    Seconds entered_s = 0;  ///< when the device (re)joined the waiting list

    bool operator==(const WlEntry&) const = default;
};

/// Replicated per-stream scheduler state. Every field is a plain value and
/// the whole state is equality-comparable, which is what the engine's
/// cross-node agreement checks rely on.
///
/// Invariants (see check_invariants):
///  - wl and rl are disjoint; membership matches status WAIT / ON
///  - every waiting device has wait_time set, every running one start_time
struct SchedulerState {
    std::vector<DeviceStatus> status;  ///< by device slot
    std::vector<WlEntry> wl;           ///< waiting list, FIFO
    std::vector<std::uint32_t> rl;     ///< running list, ascending slot
    std::vector<Seconds> wait_time;    ///< deadline per slot, -1 unset
    std::vector<Seconds> start_time;   ///< burst start per slot, -1 unset
    std::vector<Seconds> served_s;     ///< completed-burst ON seconds per slot

    bool operator==(const SchedulerState&) const = default;
};

/// Audit record of one scheduler step. turned_on / turned_off_to_wait /
/// completed_off are the net transitions of the tick and are pairwise
/// disjoint; a device demoted and re-admitted within the same tick appears
/// in neither (it never stopped running). overrides lists the subset of
/// turned_on that was admitted past the quota because its deadline arrived.
struct ScheduleDecision {
    std::vector<std::uint32_t> turned_on;
    std::vector<std::uint32_t> turned_off_to_wait;
    std::vector<std::uint32_t> completed_off;
    std::vector<std::uint32_t> overrides;
    /// (device, request time) pairs for requests that put an idle device
    /// into WAIT this tick; feeds the delay bookkeeping.
    std::vector<std::pair<std::uint32_t, Seconds>> entered_wait;
    Seconds tick_s = 0;

    bool empty() const {
        return turned_on.empty() && turned_off_to_wait.empty() && completed_off.empty() &&
               entered_wait.empty();
    }
};

SchedulerState make_state(const StreamConfig& cfg);

/// P1, request collection. An ON request moves an idle device to WAIT (tail
/// of the waiting list, deadline now + max_dcp); ON for a device already
/// WAIT/ON is ignored. An OFF request removes the device from whichever list
/// holds it and sets it OFF. Requests are applied in the order given.
/// Throws UnknownDeviceError when a request names a slot outside the stream.
void p1_collect_requests(const StreamConfig& cfg, SchedulerState& state,
                         std::span<const Request> requests, Seconds now_s,
                         ScheduleDecision& decision);

/// P2, tracking unfinished jobs. Every running device that has exhausted its
/// minimum duty-cycle duration yields: back to WAIT with a fresh deadline
/// now + max_dcp. SlotBoundary mode yields at elapsed >= min_dcd so that
/// hand-offs land on the slot grid; LiteralP3 keeps the strict > comparison.
void p2_track_unfinished(const StreamConfig& cfg, SchedulerState& state, Seconds now_s,
                         ScheduleDecision& decision);

/// P3, scheduling. Admits waiting devices in list order under a quota of
/// ceil(size / slots) where slots is the time left until the latest waiting
/// deadline measured in min_dcd units; a device whose own deadline has
/// arrived is admitted regardless of quota.
void p3_schedule(const StreamConfig& cfg, SchedulerState& state, Seconds now_s,
                 ScheduleDecision& decision);

/// One full tick: P1, P2, then P3 when due (always in LiteralP3 mode; at slot
/// boundaries or on deadline expiry in SlotBoundary mode). Deterministic:
/// equal (state, requests, now) produce equal results.
ScheduleDecision step(const StreamConfig& cfg, SchedulerState& state,
                      std::span<const Request> requests, Seconds now_s);

/// Structural invariant check, used by tests.
bool check_invariants(const StreamConfig& cfg, const SchedulerState& state);

}  // namespace hansim::scheduler
