#include "phevsim/errors.hpp"

namespace phevsim {

std::string_view to_string(Errc code) noexcept {
    switch (code) {
        case Errc::duplicate_id: return "DuplicateId";
        case Errc::unknown_segment: return "UnknownSegment";
        case Errc::unknown_route: return "UnknownRoute";
        case Errc::empty_route: return "EmptyRoute";
        case Errc::empty_network: return "EmptyNetwork";
        case Errc::non_positive_length: return "NonPositiveLength";
        case Errc::segment_too_long: return "SegmentTooLong";
        case Errc::negative_energy: return "NegativeEnergy";
        case Errc::missing_energy: return "MissingEnergy";
        case Errc::capacity_exceeded: return "CapacityExceeded";
        case Errc::no_samples: return "NoSamples";
        case Errc::no_matching_route: return "NoMatchingRoute";
        case Errc::empty_history: return "EmptyHistory";
        case Errc::unknown_state: return "UnknownState";
        case Errc::cyclic_routes: return "CyclicRoutes";
        case Errc::negative_budget: return "NegativeBudget";
        case Errc::empty_instances: return "EmptyInstances";
        case Errc::invalid_instance: return "InvalidInstance";
        case Errc::insufficient_green_budget: return "InsufficientBudgetForGreenZone";
        case Errc::negative_cap: return "NegativeCap";
        case Errc::negative_weight: return "NegativeWeight";
        case Errc::parse_error: return "ParseError";
    }
    return "UnknownError";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

void raise(Errc code, const std::string& message) {
    throw Error(code, message);
}

}  // namespace phevsim
