#include "phevsim/road_network.hpp"

#include <cmath>
#include <set>

namespace phevsim {

RoadNetwork::RoadNetwork(std::vector<Segment> segments, std::vector<Route> routes,
                         double max_segment_length_m)
    : segments_(std::move(segments)),
      routes_(std::move(routes)),
      max_segment_length_(max_segment_length_m) {
    if (segments_.empty()) {
        raise(Errc::empty_network, "network has no segments");
    }
    if (routes_.empty()) {
        raise(Errc::empty_network, "network has no routes");
    }
    if (max_segment_length_ <= 0.0) {
        raise(Errc::non_positive_length, "max segment length must be positive");
    }

    for (std::size_t i = 0; i < segments_.size(); ++i) {
        const Segment& s = segments_[i];
        if (s.length_m <= 0.0) {
            raise(Errc::non_positive_length, "segment '" + s.id + "' has non-positive length");
        }
        if (s.length_m > max_segment_length_) {
            raise(Errc::segment_too_long,
                  "segment '" + s.id + "' exceeds max length " + std::to_string(max_segment_length_));
        }
        if (!segment_index_.emplace(s.id, i).second) {
            raise(Errc::duplicate_id, "segment id '" + s.id + "' appears twice");
        }
    }

    for (std::size_t i = 0; i < routes_.size(); ++i) {
        const Route& r = routes_[i];
        if (r.segments.empty()) {
            raise(Errc::empty_route, "route '" + r.id + "' has no segments");
        }
        if (!route_index_.emplace(r.id, i).second) {
            raise(Errc::duplicate_id, "route id '" + r.id + "' appears twice");
        }
        std::set<SegmentId> seen;
        for (const SegmentId& sid : r.segments) {
            if (!segment_index_.contains(sid)) {
                raise(Errc::unknown_segment, "route '" + r.id + "' references unknown segment '" + sid + "'");
            }
            if (!seen.insert(sid).second) {
                raise(Errc::duplicate_id, "route '" + r.id + "' visits segment '" + sid + "' twice");
            }
            routes_through_[sid].push_back(r.id);
        }
    }
}

bool RoadNetwork::has_segment(const SegmentId& id) const noexcept {
    return segment_index_.contains(id);
}

bool RoadNetwork::has_route(const RouteId& id) const noexcept {
    return route_index_.contains(id);
}

const Segment& RoadNetwork::segment(const SegmentId& id) const {
    auto it = segment_index_.find(id);
    if (it == segment_index_.end()) {
        raise(Errc::unknown_segment, "no segment '" + id + "'");
    }
    return segments_[it->second];
}

const Route& RoadNetwork::route(const RouteId& id) const {
    auto it = route_index_.find(id);
    if (it == route_index_.end()) {
        raise(Errc::unknown_route, "no route '" + id + "'");
    }
    return routes_[it->second];
}

const std::vector<RouteId>& RoadNetwork::routes_through(const SegmentId& id) const {
    static const std::vector<RouteId> kNone;
    if (!has_segment(id)) {
        raise(Errc::unknown_segment, "no segment '" + id + "'");
    }
    auto it = routes_through_.find(id);
    return it == routes_through_.end() ? kNone : it->second;
}

std::vector<double> segmentize(double road_length_m, double max_len_m) {
    if (road_length_m <= 0.0) {
        raise(Errc::non_positive_length, "road length must be positive");
    }
    if (max_len_m <= 0.0) {
        raise(Errc::non_positive_length, "max segment length must be positive");
    }
    const auto pieces = static_cast<std::size_t>(std::ceil(road_length_m / max_len_m));
    return std::vector<double>(pieces, road_length_m / static_cast<double>(pieces));
}

}  // namespace phevsim
