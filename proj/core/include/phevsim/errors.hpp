#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace phevsim {

/// Error codes for every rejectable input condition. Each validating
/// operation documents which codes it can raise.
enum class Errc {
    duplicate_id,
    unknown_segment,
    unknown_route,
    empty_route,
    empty_network,
    non_positive_length,
    segment_too_long,
    negative_energy,
    missing_energy,
    capacity_exceeded,
    no_samples,
    no_matching_route,
    empty_history,
    unknown_state,
    cyclic_routes,
    negative_budget,
    empty_instances,
    invalid_instance,
    insufficient_green_budget,
    negative_cap,
    negative_weight,
    parse_error,
};

std::string_view to_string(Errc code) noexcept;

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message);

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] void raise(Errc code, const std::string& message);

}  // namespace phevsim
