#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "phevsim/road_network.hpp"

namespace phevsim {

/// Pedestrian counts per segment at one instant.
struct DensitySnapshot {
    double time_s = 0.0;
    std::map<SegmentId, double> counts;
};

/// One aggregated point observation (e.g. a phone-signal measurement)
/// resolved to a segment, optionally with an offset along it.
struct PointObservation {
    SegmentId segment;
    std::optional<double> offset_m;
    double weight = 1.0;
};

/// Time-varying pedestrian density source. Implementations are read-only
/// after construction and safe to query concurrently.
class DensityProvider {
public:
    virtual ~DensityProvider() = default;

    /// Pedestrians along the segment at the given time. Throws
    /// UnknownSegment for segments outside the network.
    virtual double density(const SegmentId& segment, double time_s) const = 0;
};

/// Fixed table; ignores time. Unkeyed segments count as empty.
class StaticDensityProvider final : public DensityProvider {
public:
    StaticDensityProvider(const RoadNetwork& network, std::map<SegmentId, double> counts);

    double density(const SegmentId& segment, double time_s) const override;

private:
    std::set<SegmentId> known_;
    std::map<SegmentId, double> counts_;
};

/// Seeded sinusoidal generator: a per-segment baseline with a per-segment
/// phase, purely a function of (seed, segment, time). Amplitude 0 gives a
/// constant baseline.
class SyntheticDensityProvider final : public DensityProvider {
public:
    SyntheticDensityProvider(const RoadNetwork& network, std::uint64_t seed,
                             double baseline = 50.0, double amplitude = 0.0,
                             double period_s = 3600.0);

    double density(const SegmentId& segment, double time_s) const override;

private:
    std::set<SegmentId> known_;
    std::uint64_t seed_;
    double baseline_;
    double amplitude_;
    double period_s_;
};

/// Replays recorded snapshots; a query returns the latest snapshot at or
/// before the requested time (the first one before any snapshot applies).
class ReplayDensityProvider final : public DensityProvider {
public:
    ReplayDensityProvider(const RoadNetwork& network, std::vector<DensitySnapshot> snapshots);

    double density(const SegmentId& segment, double time_s) const override;

private:
    std::set<SegmentId> known_;
    std::vector<DensitySnapshot> snapshots_;  // sorted by time
};

/// Sums observation weights per segment into a snapshot covering every
/// network segment (unobserved ones get 0).
DensitySnapshot aggregate_points(const std::vector<PointObservation>& observations,
                                 const RoadNetwork& network);

}  // namespace phevsim
