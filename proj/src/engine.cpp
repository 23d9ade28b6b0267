#include "hansim/engine.hpp"

#include <algorithm>
#include <map>
#include <utility>

#include "hansim/domain.hpp"
#include "hansim/stnet.hpp"

namespace hansim::engine {

namespace {

struct CompiledStream {
    domain::StreamKey key;
    std::string label;
    std::vector<std::uint32_t> devices;           // global device indices, slot order
    std::vector<std::uint32_t> slot_of;           // global index -> slot (or npos)
};

struct Compiled {
    std::vector<domain::ApplianceSpec> devices;   // index = node id
    std::map<std::string, std::uint32_t> index_of;
    std::vector<CompiledStream> streams;
    std::vector<std::int32_t> stream_of;          // per device, -1 for type-1
    std::vector<domain::RequestEvent> events;     // time-sorted
    bool has_type1 = false;
};

constexpr std::uint32_t kNoSlot = 0xffffffffu;

Compiled compile(const workload::Scenario& scenario) {
    Compiled c;
    c.devices = scenario.devices;
    c.stream_of.assign(c.devices.size(), -1);

    std::map<domain::StreamKey, std::vector<std::uint32_t>> grouped;
    for (std::uint32_t i = 0; i < c.devices.size(); ++i) {
        const auto& spec = c.devices[i];
        if (auto issue = domain::validate_appliance(spec)) {
            throw ScenarioError(ScenarioError::Kind::Validation, 0, issue->reason);
        }
        c.index_of.emplace(spec.id, i);
        if (spec.kind == ApplianceKind::Type2) {
            grouped[domain::stream_key(spec)].push_back(i);
        } else {
            c.has_type1 = true;
        }
    }
    for (auto& [key, members] : grouped) {
        CompiledStream s;
        s.key = key;
        s.label = "stream_" + std::to_string(key.min_dcd_s) + "_" + std::to_string(key.max_dcp_s);
        s.devices = std::move(members);
        s.slot_of.assign(c.devices.size(), kNoSlot);
        for (std::uint32_t slot = 0; slot < s.devices.size(); ++slot) {
            s.slot_of[s.devices[slot]] = slot;
            c.stream_of[s.devices[slot]] = static_cast<std::int32_t>(c.streams.size());
        }
        c.streams.push_back(std::move(s));
    }
    c.events = workload::all_events(scenario);
    return c;
}

class TraceRecorder {
public:
    TraceRecorder(const Compiled& c, Seconds duration) : compiled_(c) {
        for (const auto& s : c.streams) {
            traces_.push_back({s.label, 1, std::vector<double>()});
            traces_.back().samples.reserve(static_cast<std::size_t>(duration));
        }
        if (c.has_type1) {
            traces_.push_back({"type1", 1, std::vector<double>()});
            traces_.back().samples.reserve(static_cast<std::size_t>(duration));
        }
        total_.label = "total";
        total_.samples.reserve(static_cast<std::size_t>(duration));
    }

    void sample(const std::vector<std::uint8_t>& powered) {
        double total = 0.0;
        for (std::size_t s = 0; s < compiled_.streams.size(); ++s) {
            double kw = 0.0;
            for (std::uint32_t d : compiled_.streams[s].devices) {
                if (powered[d]) kw += compiled_.devices[d].power_kw;
            }
            traces_[s].samples.push_back(kw);
            total += kw;
        }
        if (compiled_.has_type1) {
            double kw = 0.0;
            for (std::uint32_t d = 0; d < compiled_.devices.size(); ++d) {
                if (compiled_.devices[d].kind == ApplianceKind::Type1 && powered[d]) {
                    kw += compiled_.devices[d].power_kw;
                }
            }
            traces_.back().samples.push_back(kw);
            total += kw;
        }
        total_.samples.push_back(total);
    }

    std::vector<metrics::LoadTrace> take_streams() { return std::move(traces_); }
    metrics::LoadTrace take_total() { return std::move(total_); }

private:
    const Compiled& compiled_;
    std::vector<metrics::LoadTrace> traces_;
    metrics::LoadTrace total_;
};

/// Open delay records: device -> pending request time.
class DelayTracker {
public:
    explicit DelayTracker(std::size_t devices) : open_(devices, -1) {}

    void request(std::uint32_t device, Seconds at) { open_[device] = at; }

    void served(std::uint32_t device, Seconds now, const std::string& id,
                std::vector<metrics::DelayRecord>& out) {
        if (open_[device] < 0) return;
        out.push_back({id, open_[device], now});
        open_[device] = -1;
    }

private:
    std::vector<Seconds> open_;
};

SimResult simulate_baseline(const workload::Scenario& scenario, const Compiled& c) {
    const Seconds duration = scenario.duration_s;
    const std::size_t n = c.devices.size();

    TraceRecorder recorder(c, duration);
    SimResult result;
    result.on_seconds.assign(n, 0);
    DelayTracker delays(n);

    std::vector<std::uint8_t> active(n, 0);   // has an outstanding ON request
    std::vector<Seconds> anchor(n, 0);        // duty-cycle anchor (request time)
    std::vector<std::uint8_t> powered(n, 0);

    std::size_t cursor = 0;
    for (Seconds t = 0; t < duration; ++t) {
        for (; cursor < c.events.size() && c.events[cursor].time_s == t; ++cursor) {
            const auto& ev = c.events[cursor];
            const std::uint32_t d = c.index_of.at(ev.device);
            if (c.devices[d].kind == ApplianceKind::Type1) {
                powered[d] = ev.action == Action::On ? 1 : 0;
                continue;
            }
            if (ev.action == Action::On) {
                if (!active[d]) {
                    delays.request(d, ev.time_s);
                    delays.served(d, t, c.devices[d].id, result.delays);  // starts at once
                }
                active[d] = 1;
                anchor[d] = t;  // every press restarts the cycle
            } else {
                active[d] = 0;
            }
        }
        for (std::uint32_t d = 0; d < n; ++d) {
            if (c.devices[d].kind != ApplianceKind::Type2) continue;
            bool on = false;
            if (active[d]) {
                const Seconds phase = (t - anchor[d]) % *c.devices[d].max_dcp_s;
                on = phase < *c.devices[d].min_dcd_s;
            }
            powered[d] = on ? 1 : 0;
        }
        recorder.sample(powered);
        for (std::uint32_t d = 0; d < n; ++d) {
            if (powered[d]) ++result.on_seconds[d];
        }
    }

    result.stream_traces = recorder.take_streams();
    result.total = recorder.take_total();
    return result;
}

SimResult simulate_coordinated(const workload::Scenario& scenario, const Compiled& c,
                               const SimOptions& options) {
    const Seconds duration = scenario.duration_s;
    const std::size_t n = c.devices.size();

    TraceRecorder recorder(c, duration);
    SimResult result;
    result.on_seconds.assign(n, 0);
    DelayTracker delays(n);

    std::vector<scheduler::StreamConfig> configs;
    configs.reserve(c.streams.size());
    for (const auto& s : c.streams) {
        configs.push_back({s.key, static_cast<std::uint32_t>(s.devices.size()),
                           options.scheduler_mode});
    }

    // replicas[node][stream]
    std::vector<std::vector<scheduler::SchedulerState>> replicas(n);
    for (auto& per_node : replicas) {
        per_node.reserve(configs.size());
        for (const auto& cfg : configs) per_node.push_back(scheduler::make_state(cfg));
    }

    stnet::Network net(static_cast<std::uint32_t>(n), scenario.round.delivery,
                       rng::Stream(scenario.seed, rng::kPurposeNetwork));

    std::vector<std::uint8_t> powered(n, 0);
    std::vector<std::vector<scheduler::Request>> batch(c.streams.size());

    std::size_t cursor = 0;
    for (Seconds t = 0; t < duration; ++t) {
        // arrivals raised at their owning DI; type-1 served on the spot
        for (; cursor < c.events.size() && c.events[cursor].time_s == t; ++cursor) {
            const auto& ev = c.events[cursor];
            const std::uint32_t d = c.index_of.at(ev.device);
            if (c.devices[d].kind == ApplianceKind::Type1) {
                powered[d] = ev.action == Action::On ? 1 : 0;
            } else {
                net.raise(d, {ev.time_s, d, ev.action});
            }
        }

        if (n > 0 && t % scenario.round.period_s == 0) {
            net.run_round(t / scenario.round.period_s);
        }

        bool dirty = false;
        for (std::uint32_t node = 0; node < n; ++node) {
            const auto consumed = net.consume(node, t);
            if (!consumed.empty()) dirty = true;
            for (auto& b : batch) b.clear();
            for (const auto& req : consumed) {
                const std::int32_t s = c.stream_of[req.device];
                if (s < 0) continue;
                batch[static_cast<std::size_t>(s)].push_back(
                    {req.time_s, c.streams[static_cast<std::size_t>(s)].slot_of[req.device],
                     req.action});
            }
            for (std::size_t s = 0; s < configs.size(); ++s) {
                const auto decision = scheduler::step(configs[s], replicas[node][s], batch[s], t);
                if (!decision.empty()) dirty = true;
                result.override_admissions += decision.overrides.size();
                // actuation and delay records follow the owner's replica only
                for (const auto& [slot, req_time] : decision.entered_wait) {
                    const std::uint32_t d = c.streams[s].devices[slot];
                    if (d == node) delays.request(d, req_time);
                }
                for (std::uint32_t slot : decision.turned_on) {
                    const std::uint32_t d = c.streams[s].devices[slot];
                    if (d == node) delays.served(d, t, c.devices[d].id, result.delays);
                }
            }
        }

        // each type-2 appliance follows its own node's replica
        for (std::size_t s = 0; s < c.streams.size(); ++s) {
            for (std::uint32_t slot = 0; slot < c.streams[s].devices.size(); ++slot) {
                const std::uint32_t d = c.streams[s].devices[slot];
                powered[d] =
                    replicas[d][s].status[slot] == DeviceStatus::On ? 1 : 0;
            }
        }

        if (options.check_agreement && n > 1 &&
            (dirty || t % 256 == 0 || t + 1 == duration)) {
            for (std::uint32_t node = 1; node < n; ++node) {
                if (replicas[node] != replicas[0]) {
                    ++result.divergent_ticks;
                    break;
                }
            }
        }

        recorder.sample(powered);
        for (std::uint32_t d = 0; d < n; ++d) {
            if (powered[d]) ++result.on_seconds[d];
        }
    }

    std::sort(result.delays.begin(), result.delays.end(),
              [](const metrics::DelayRecord& a, const metrics::DelayRecord& b) {
                  return std::tie(a.request_s, a.device) < std::tie(b.request_s, b.device);
              });
    result.stream_traces = recorder.take_streams();
    result.total = recorder.take_total();
    return result;
}

}  // namespace

SimResult simulate(const workload::Scenario& scenario, workload::RunMode mode,
                   const SimOptions& options) {
    if (scenario.duration_s <= 0) {
        throw ScenarioError(ScenarioError::Kind::Validation, 0,
                            "scenario duration must be positive");
    }
    if (mode == workload::RunMode::Both) {
        throw Error("simulate runs one mode at a time; the caller splits 'both'");
    }
    const Compiled c = compile(scenario);
    SimResult result = mode == workload::RunMode::Baseline
                           ? simulate_baseline(scenario, c)
                           : simulate_coordinated(scenario, c, options);
    result.device_ids.reserve(c.devices.size());
    for (const auto& d : c.devices) result.device_ids.push_back(d.id);
    return result;
}

}  // namespace hansim::engine
