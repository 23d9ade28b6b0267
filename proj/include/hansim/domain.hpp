#pragma once

#include <compare>
#include <optional>
#include <string>

#include "hansim/types.hpp"

namespace hansim::domain {

/// Static description of one appliance.
///
/// Type-2 appliances carry a duty-cycle contract: they must run at least
/// `min_dcd_s` per cycle and their cycle period must not exceed `max_dcp_s`.
/// Type-1 appliances have neither field.
struct ApplianceSpec {
    std::string id;
    ApplianceKind kind = ApplianceKind::Type1;
    double power_kw = 0.0;  ///< rated draw while ON
    std::optional<Seconds> min_dcd_s;
    std::optional<Seconds> max_dcp_s;

    bool operator==(const ApplianceSpec&) const = default;
};

/// All Type-2 devices sharing one (min duty-cycle duration, max duty-cycle
/// period) pair form a stream and are scheduled by one scheduler instance.
struct StreamKey {
    Seconds min_dcd_s = 0;
    Seconds max_dcp_s = 0;

    auto operator<=>(const StreamKey&) const = default;
};

/// A timestamped user ON/OFF request for one appliance.
struct RequestEvent {
    Seconds time_s = 0;
    std::string device;
    Action action = Action::On;

    auto operator<=>(const RequestEvent&) const = default;
};

enum class ValidationError { NonPositivePower, MinExceedsMax, Type1WithDutyCycle };

struct ValidationIssue {
    ValidationError code;
    std::string reason;
};

/// Checks the appliance invariants. Returns nullopt when the spec is valid,
/// otherwise the first violated rule with a human-readable reason.
std::optional<ValidationIssue> validate_appliance(const ApplianceSpec& spec);

/// Projects a valid Type-2 spec onto its stream. Throws NotSchedulableError
/// for Type-1 input.
StreamKey stream_key(const ApplianceSpec& spec);

}  // namespace hansim::domain
