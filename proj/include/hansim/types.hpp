#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace hansim {

/// Simulation time in whole seconds. One engine tick == one second, which is
/// also the cadence of the communication rounds.
using Seconds = std::int64_t;

enum class ApplianceKind : std::uint8_t {
    Type1,  ///< low power, served immediately, never scheduled
    Type2   ///< high power, duty-cycled, scheduled per stream
};

enum class Action : std::uint8_t { On, Off };

/// Scheduler-visible state of one device (the Status[] vocabulary).
enum class DeviceStatus : std::uint8_t { Off, Wait, On };

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Asking for scheduling data of a device class that is not schedulable.
class NotSchedulableError : public Error {
public:
    using Error::Error;
};

/// A request or lookup named a device the receiving component does not know.
class UnknownDeviceError : public Error {
public:
    using Error::Error;
};

/// Communication layer invoked with an empty node set.
class NoNodesError : public Error {
public:
    using Error::Error;
};

/// Metric invoked on data it cannot be computed from.
class MetricError : public Error {
public:
    using Error::Error;
};

/// Scenario file rejected. Carries the offending line (0 when not tied to a
/// specific line) and a coarse category tests can dispatch on.
class ScenarioError : public Error {
public:
    enum class Kind { Syntax, UnknownDevice, InvalidDutyCycle, Validation };

    ScenarioError(Kind kind, int line, const std::string& message)
        : Error(message), kind_(kind), line_(line) {}

    Kind kind() const noexcept { return kind_; }
    int line() const noexcept { return line_; }

private:
    Kind kind_;
    int line_;
};

inline const char* to_string(DeviceStatus s) {
    switch (s) {
        case DeviceStatus::Off: return "OFF";
        case DeviceStatus::Wait: return "WAIT";
        case DeviceStatus::On: return "ON";
    }
    return "?";
}

inline const char* to_string(Action a) { return a == Action::On ? "ON" : "OFF"; }

}  // namespace hansim
