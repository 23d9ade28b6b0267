#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "hansim/domain.hpp"
#include "hansim/rng.hpp"
#include "hansim/stnet.hpp"
#include "hansim/types.hpp"

namespace hansim::workload {

enum class RunMode : std::uint8_t { Coordinated, Baseline, Both };

/// System-level Poisson process over the target set: arrivals at `rate_per_h`
/// requests per hour, each an ON request for a uniformly chosen target.
struct Poisson {
    double rate_per_h = 0.0;
    Seconds start_s = 0;
    Seconds end_s = -1;  ///< -1 = scenario horizon
    bool operator==(const Poisson&) const = default;
};

/// ON request at phase + k*interval for every target device.
struct Periodic {
    Seconds interval_s = 0;
    Seconds phase_s = 0;
    bool operator==(const Periodic&) const = default;
};

/// Fixed (time, action) list applied to every target device.
struct Explicit {
    std::vector<std::pair<Seconds, Action>> events;
    bool operator==(const Explicit&) const = default;
};

/// Per-device ON/OFF alternation with exponential holding times; the type-1
/// workload. Devices start OFF.
struct RandomToggle {
    Seconds mean_on_s = 0;
    Seconds mean_off_s = 0;
    bool operator==(const RandomToggle&) const = default;
};

using ArrivalKind = std::variant<Poisson, Periodic, Explicit, RandomToggle>;

struct ArrivalProcess {
    std::vector<std::string> targets;  ///< resolved device ids, sorted
    ArrivalKind kind;
    bool operator==(const ArrivalProcess&) const = default;
};

struct Scenario {
    std::string name;
    Seconds duration_s = 0;
    Seconds tick_s = 1;
    std::vector<domain::ApplianceSpec> devices;
    std::vector<ArrivalProcess> arrivals;
    stnet::RoundConfig round;
    std::uint64_t seed = 0;
    RunMode mode = RunMode::Both;

    bool operator==(const Scenario&) const = default;
};

/// Expands one arrival process into a time-sorted request list within
/// [0, horizon_s). Same rng state, same output.
std::vector<domain::RequestEvent> gen_events(const ArrivalProcess& proc, Seconds horizon_s,
                                             rng::Stream& rng);

/// All scenario arrivals expanded with per-process rng sub-streams derived
/// from the scenario seed, merged, time-sorted, de-duplicated.
std::vector<domain::RequestEvent> all_events(const Scenario& scenario);

/// Parses the line-oriented scenario format (sections [scenario], [devices],
/// [arrivals], [network]; `key = value` pairs; durations with s/min/h
/// suffixes; `#` comments). Throws ScenarioError with the offending line.
Scenario parse_scenario(const std::string& text);

/// Reads and parses a scenario file. Missing file throws ScenarioError.
Scenario load_scenario_file(const std::string& path);

/// Canonical text form; parse(render(s)) == s.
std::string render_scenario(const Scenario& scenario);

/// Parses a standalone duration token (`<n>[ s|min|h]`, default seconds).
/// Throws ScenarioError on malformed input.
Seconds parse_duration_token(const std::string& token);

}  // namespace hansim::workload
