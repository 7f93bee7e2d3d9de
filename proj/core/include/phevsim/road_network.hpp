#pragma once

#include <map>
#include <string>
#include <vector>

#include "phevsim/errors.hpp"

namespace phevsim {

using SegmentId = std::string;
using RouteId = std::string;

/// Atomic stretch of road between two junctions, bounded in length.
struct Segment {
    SegmentId id;
    double length_m = 0.0;
};

/// Ordered, loop-free sequence of segments from origin to destination.
struct Route {
    RouteId id;
    std::vector<SegmentId> segments;
};

/// Immutable, validated collection of segments and routes. Safe to share
/// across concurrent readers once constructed.
class RoadNetwork {
public:
    static constexpr double kDefaultMaxSegmentLength = 500.0;

    /// Validates and builds. Rejects duplicate ids, dangling segment
    /// references, empty routes, repeated segments within one route,
    /// non-positive lengths and lengths above max_segment_length_m.
    RoadNetwork(std::vector<Segment> segments, std::vector<Route> routes,
                double max_segment_length_m = kDefaultMaxSegmentLength);

    const std::vector<Segment>& segments() const noexcept { return segments_; }
    const std::vector<Route>& routes() const noexcept { return routes_; }
    double max_segment_length() const noexcept { return max_segment_length_; }

    bool has_segment(const SegmentId& id) const noexcept;
    bool has_route(const RouteId& id) const noexcept;

    const Segment& segment(const SegmentId& id) const;  // throws UnknownSegment
    const Route& route(const RouteId& id) const;        // throws UnknownRoute

    /// Ids of routes containing the segment, in route declaration order.
    const std::vector<RouteId>& routes_through(const SegmentId& id) const;

private:
    std::vector<Segment> segments_;
    std::vector<Route> routes_;
    std::map<SegmentId, std::size_t> segment_index_;
    std::map<RouteId, std::size_t> route_index_;
    std::map<SegmentId, std::vector<RouteId>> routes_through_;
    double max_segment_length_;
};

/// Splits a road into ceil(road_length / max_len) equal pieces, each at most
/// max_len, summing to road_length.
std::vector<double> segmentize(double road_length_m, double max_len_m);

}  // namespace phevsim
