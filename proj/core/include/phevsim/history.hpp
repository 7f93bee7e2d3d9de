#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "phevsim/road_network.hpp"

namespace phevsim {

/// Per-segment summary of the recorded electric-energy samples.
struct EnergyEstimate {
    SegmentId segment;
    double mean_kwh = 0.0;
    double max_kwh = 0.0;
    std::size_t sample_count = 0;
};

/// Bounded store of past trips: per-route counts plus per-segment electric
/// energy samples. Value-semantic: record_trip returns an updated copy, so
/// readers holding the old snapshot are never disturbed.
class TripHistory {
public:
    static constexpr std::size_t kDefaultCapacity = 100;

    explicit TripHistory(std::size_t capacity = kDefaultCapacity);

    /// Builds a history directly from aggregated counts and samples (the
    /// file-import path). Routes must exist in the network, counts must be
    /// >= 1, samples >= 0 and keyed by known segments.
    static TripHistory from_counts(const RoadNetwork& network,
                                   const std::map<RouteId, std::uint64_t>& counts,
                                   const std::map<SegmentId, std::vector<double>>& samples,
                                   std::size_t capacity = kDefaultCapacity);

    /// Adds one trip: increments the route count (inserting if new) and
    /// appends one energy sample per segment of the route. When a new route
    /// would exceed the capacity, the stored route with the minimum count is
    /// evicted first (ties broken by least recently recorded). Energy
    /// samples are per-segment and survive route eviction.
    TripHistory record_trip(const RoadNetwork& network, const RouteId& route,
                            const std::map<SegmentId, double>& energies_kwh) const;

    /// Mean and maximum of the samples for a segment. Throws NoSamples when
    /// nothing was recorded for it.
    EnergyEstimate expected_energy(const SegmentId& segment) const;

    const std::map<RouteId, std::uint64_t>& route_counts() const noexcept { return counts_; }
    const std::map<SegmentId, std::vector<double>>& energy_samples() const noexcept { return samples_; }
    std::size_t capacity() const noexcept { return capacity_; }
    bool empty() const noexcept { return counts_.empty(); }

    std::uint64_t count(const RouteId& route) const noexcept;

private:
    std::size_t capacity_;
    std::uint64_t next_seq_ = 0;
    std::map<RouteId, std::uint64_t> counts_;
    std::map<RouteId, std::uint64_t> last_recorded_;  // recency sequence per route
    std::map<SegmentId, std::vector<double>> samples_;
};

/// Seeded experiment history: records `count` trips per route with energy
/// samples drawn uniformly from [lo_kwh, hi_kwh) per segment per trip.
TripHistory make_synthetic_history(const RoadNetwork& network,
                                   const std::map<RouteId, std::uint64_t>& route_counts,
                                   std::uint64_t seed, double lo_kwh = 0.0,
                                   double hi_kwh = 0.05);

}  // namespace phevsim
