#include "hansim/scheduler.hpp"

#include <algorithm>
#include <cassert>

namespace hansim::scheduler {

namespace {

void erase_wl(SchedulerState& state, std::uint32_t device) {
    std::erase_if(state.wl, [device](const WlEntry& e) { return e.device == device; });
}

void erase_rl(SchedulerState& state, std::uint32_t device) {
    std::erase(state.rl, device);
}

void insert_rl(SchedulerState& state, std::uint32_t device) {
    auto it = std::lower_bound(state.rl.begin(), state.rl.end(), device);
    state.rl.insert(it, device);
}

void close_burst(SchedulerState& state, std::uint32_t device, Seconds now_s) {
    state.served_s[device] += now_s - state.start_time[device];
    state.start_time[device] = -1;
}

}  // namespace

SchedulerState make_state(const StreamConfig& cfg) {
    SchedulerState s;
    s.status.assign(cfg.device_count, DeviceStatus::Off);
    s.wait_time.assign(cfg.device_count, -1);
    s.start_time.assign(cfg.device_count, -1);
    s.served_s.assign(cfg.device_count, 0);
    return s;
}

void p1_collect_requests(const StreamConfig& cfg, SchedulerState& state,
                         std::span<const Request> requests, Seconds now_s,
                         ScheduleDecision& decision) {
    for (const Request& req : requests) {
        if (req.device >= cfg.device_count) {
            throw UnknownDeviceError("request for device slot " + std::to_string(req.device) +
                                     " outside stream of size " +
                                     std::to_string(cfg.device_count));
        }
        const std::uint32_t d = req.device;
        if (req.action == Action::On) {
            if (state.status[d] != DeviceStatus::Off) continue;  // idempotent
            state.status[d] = DeviceStatus::Wait;
            state.wl.push_back({d, now_s});
            state.wait_time[d] = now_s + cfg.stream.max_dcp_s;
            decision.entered_wait.emplace_back(d, req.time_s);
        } else {
            if (state.status[d] == DeviceStatus::On) {
                erase_rl(state, d);
                close_burst(state, d, now_s);
            } else if (state.status[d] == DeviceStatus::Wait) {
                erase_wl(state, d);
            } else {
                continue;  // already off
            }
            state.status[d] = DeviceStatus::Off;
            state.wait_time[d] = -1;
            decision.completed_off.push_back(d);
        }
    }
}

void p2_track_unfinished(const StreamConfig& cfg, SchedulerState& state, Seconds now_s,
                         ScheduleDecision& decision) {
    if (state.rl.empty()) return;

    std::vector<std::uint32_t> demoted;
    for (std::uint32_t d : state.rl) {
        const Seconds elapsed = now_s - state.start_time[d];
        const bool done = cfg.mode == Mode::LiteralP3 ? elapsed > cfg.stream.min_dcd_s
                                                      : elapsed >= cfg.stream.min_dcd_s;
        if (done) demoted.push_back(d);
    }
    if (demoted.empty()) return;

    for (std::uint32_t d : demoted) {
        erase_rl(state, d);
        close_burst(state, d, now_s);
        state.status[d] = DeviceStatus::Wait;
        state.wait_time[d] = now_s + cfg.stream.max_dcp_s;
    }
    // Re-queue least-served first so that saturated streams rotate fairly;
    // slot index breaks remaining ties.
    std::sort(demoted.begin(), demoted.end(), [&state](std::uint32_t a, std::uint32_t b) {
        if (state.served_s[a] != state.served_s[b]) return state.served_s[a] < state.served_s[b];
        return a < b;
    });
    for (std::uint32_t d : demoted) {
        state.wl.push_back({d, now_s});
        decision.turned_off_to_wait.push_back(d);
    }
}

void p3_schedule(const StreamConfig& cfg, SchedulerState& state, Seconds now_s,
                 ScheduleDecision& decision) {
    if (state.wl.empty()) return;

    const auto size = static_cast<std::int64_t>(state.wl.size());
    const Seconds min_dcd = cfg.stream.min_dcd_s;
    Seconds max_wtime = state.wait_time[state.wl.front().device];
    for (const WlEntry& e : state.wl) max_wtime = std::max(max_wtime, state.wait_time[e.device]);
    const Seconds remaining = max_wtime - now_s;

    const std::vector<WlEntry> snapshot = state.wl;
    std::vector<std::uint32_t> admitted;
    std::vector<std::uint32_t> admitted_override;

    if (cfg.mode == Mode::LiteralP3) {
        const Seconds slots = remaining >= min_dcd ? remaining / min_dcd : 1;
        std::int64_t jobs_to_schedule = size / slots;
        for (const WlEntry& e : snapshot) {
            if (jobs_to_schedule >= 0 || state.wait_time[e.device] <= now_s) {
                if (jobs_to_schedule < 0) admitted_override.push_back(e.device);
                admitted.push_back(e.device);
                --jobs_to_schedule;
            }
        }
    } else {
        // quota = ceil(size / slots) with slots the exact (rational) number of
        // min_dcd windows before the latest deadline, clamped to >= 1.
        std::int64_t quota = size;
        if (remaining > min_dcd) quota = (size * min_dcd + remaining - 1) / remaining;
        for (const WlEntry& e : snapshot) {
            if (quota > 0) {
                admitted.push_back(e.device);
                --quota;
            } else if (state.wait_time[e.device] <= now_s) {
                admitted.push_back(e.device);
                admitted_override.push_back(e.device);
            }
        }
    }

    for (std::uint32_t d : admitted) {
        erase_wl(state, d);
        insert_rl(state, d);
        state.status[d] = DeviceStatus::On;
        state.start_time[d] = now_s;
        state.wait_time[d] = -1;
        decision.turned_on.push_back(d);
    }
    decision.overrides.insert(decision.overrides.end(), admitted_override.begin(),
                              admitted_override.end());
}

ScheduleDecision step(const StreamConfig& cfg, SchedulerState& state,
                      std::span<const Request> requests, Seconds now_s) {
    ScheduleDecision decision;
    decision.tick_s = now_s;

    p1_collect_requests(cfg, state, requests, now_s, decision);
    p2_track_unfinished(cfg, state, now_s, decision);

    bool fire = cfg.mode == Mode::LiteralP3;
    if (!fire) {
        fire = cfg.stream.min_dcd_s > 0 && now_s % cfg.stream.min_dcd_s == 0;
        if (!fire) {
            for (const WlEntry& e : state.wl) {
                if (state.wait_time[e.device] <= now_s) {
                    fire = true;
                    break;
                }
            }
        }
    }
    if (fire) p3_schedule(cfg, state, now_s, decision);

    // A device demoted and re-admitted within this tick never stopped
    // running; report the net effect only.
    if (!decision.turned_on.empty() && !decision.turned_off_to_wait.empty()) {
        std::vector<std::uint32_t> continuous;
        for (std::uint32_t d : decision.turned_off_to_wait) {
            if (std::find(decision.turned_on.begin(), decision.turned_on.end(), d) !=
                decision.turned_on.end()) {
                continuous.push_back(d);
            }
        }
        for (std::uint32_t d : continuous) {
            std::erase(decision.turned_on, d);
            std::erase(decision.turned_off_to_wait, d);
            std::erase(decision.overrides, d);
        }
    }
    std::sort(decision.turned_on.begin(), decision.turned_on.end());
    std::sort(decision.turned_off_to_wait.begin(), decision.turned_off_to_wait.end());
    std::sort(decision.completed_off.begin(), decision.completed_off.end());
    std::sort(decision.overrides.begin(), decision.overrides.end());
    return decision;
}

bool check_invariants(const StreamConfig& cfg, const SchedulerState& state) {
    const std::size_t n = cfg.device_count;
    if (state.status.size() != n || state.wait_time.size() != n || state.start_time.size() != n ||
        state.served_s.size() != n) {
        return false;
    }
    std::vector<bool> in_wl(n, false), in_rl(n, false);
    for (const WlEntry& e : state.wl) {
        if (e.device >= n || in_wl[e.device]) return false;
        in_wl[e.device] = true;
    }
    for (std::uint32_t d : state.rl) {
        if (d >= n || in_rl[d] || in_wl[d]) return false;
        in_rl[d] = true;
    }
    for (std::uint32_t d = 0; d < n; ++d) {
        switch (state.status[d]) {
            case DeviceStatus::Wait:
                if (!in_wl[d] || state.wait_time[d] < 0) return false;
                break;
            case DeviceStatus::On:
                if (!in_rl[d] || state.start_time[d] < 0) return false;
                break;
            case DeviceStatus::Off:
                if (in_wl[d] || in_rl[d]) return false;
                break;
        }
    }
    return true;
}

}  // namespace hansim::scheduler
