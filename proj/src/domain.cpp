#include "hansim/domain.hpp"

namespace hansim::domain {

std::optional<ValidationIssue> validate_appliance(const ApplianceSpec& spec) {
    if (!(spec.power_kw > 0.0)) {
        return ValidationIssue{ValidationError::NonPositivePower,
                               "appliance '" + spec.id + "': power must be > 0 kW"};
    }
    if (spec.kind == ApplianceKind::Type1) {
        if (spec.min_dcd_s || spec.max_dcp_s) {
            return ValidationIssue{
                ValidationError::Type1WithDutyCycle,
                "appliance '" + spec.id + "': type-1 devices carry no duty-cycle parameters"};
        }
        return std::nullopt;
    }
    const Seconds min_dcd = spec.min_dcd_s.value_or(0);
    const Seconds max_dcp = spec.max_dcp_s.value_or(0);
    if (min_dcd <= 0 || max_dcp <= 0) {
        return ValidationIssue{
            ValidationError::MinExceedsMax,
            "appliance '" + spec.id + "': type-2 devices need positive min_dcd and max_dcp"};
    }
    if (min_dcd > max_dcp) {
        return ValidationIssue{ValidationError::MinExceedsMax,
                               "appliance '" + spec.id + "': min_dcd (" + std::to_string(min_dcd) +
                                   " s) exceeds max_dcp (" + std::to_string(max_dcp) + " s)"};
    }
    return std::nullopt;
}

StreamKey stream_key(const ApplianceSpec& spec) {
    if (spec.kind != ApplianceKind::Type2) {
        throw NotSchedulableError("appliance '" + spec.id +
                                  "' is type-1 and cannot be scheduled");
    }
    return StreamKey{*spec.min_dcd_s, *spec.max_dcp_s};
}

}  // namespace hansim::domain
