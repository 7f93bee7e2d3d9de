#include "phevsim/history.hpp"

#include <algorithm>
#include <limits>

#include "phevsim/rng.hpp"

namespace phevsim {

TripHistory::TripHistory(std::size_t capacity) : capacity_(capacity) {
    if (capacity_ == 0) {
        raise(Errc::capacity_exceeded, "history capacity must be at least 1");
    }
}

TripHistory TripHistory::from_counts(const RoadNetwork& network,
                                     const std::map<RouteId, std::uint64_t>& counts,
                                     const std::map<SegmentId, std::vector<double>>& samples,
                                     std::size_t capacity) {
    TripHistory h(capacity);
    if (counts.size() > capacity) {
        raise(Errc::capacity_exceeded,
              std::to_string(counts.size()) + " routes exceed capacity " + std::to_string(capacity));
    }
    for (const auto& [route, count] : counts) {
        if (!network.has_route(route)) {
            raise(Errc::unknown_route, "history references unknown route '" + route + "'");
        }
        if (count == 0) {
            raise(Errc::invalid_instance, "route '" + route + "' has count 0");
        }
        h.counts_[route] = count;
        h.last_recorded_[route] = h.next_seq_++;
    }
    for (const auto& [segment, values] : samples) {
        if (!network.has_segment(segment)) {
            raise(Errc::unknown_segment, "energy samples reference unknown segment '" + segment + "'");
        }
        for (double v : values) {
            if (v < 0.0) {
                raise(Errc::negative_energy, "negative energy sample on segment '" + segment + "'");
            }
        }
        h.samples_[segment] = values;
    }
    return h;
}

TripHistory TripHistory::record_trip(const RoadNetwork& network, const RouteId& route,
                                     const std::map<SegmentId, double>& energies_kwh) const {
    if (!network.has_route(route)) {
        raise(Errc::unknown_route, "cannot record trip on unknown route '" + route + "'");
    }
    const Route& r = network.route(route);
    for (const auto& [segment, kwh] : energies_kwh) {
        if (std::find(r.segments.begin(), r.segments.end(), segment) == r.segments.end()) {
            raise(Errc::unknown_segment,
                  "energy keyed by segment '" + segment + "' not on route '" + route + "'");
        }
        if (kwh < 0.0) {
            raise(Errc::negative_energy, "negative energy for segment '" + segment + "'");
        }
    }
    for (const SegmentId& segment : r.segments) {
        if (!energies_kwh.contains(segment)) {
            raise(Errc::missing_energy,
                  "trip on route '" + route + "' lacks energy for segment '" + segment + "'");
        }
    }

    TripHistory out = *this;
    const bool is_new = !out.counts_.contains(route);
    if (is_new && out.counts_.size() == out.capacity_) {
        // Evict the rarest route; among equally rare ones the least
        // recently recorded goes. Samples stay: they are per-segment.
        RouteId victim;
        std::uint64_t best_count = std::numeric_limits<std::uint64_t>::max();
        std::uint64_t best_seq = std::numeric_limits<std::uint64_t>::max();
        for (const auto& [id, count] : out.counts_) {
            const std::uint64_t seq = out.last_recorded_.at(id);
            if (count < best_count || (count == best_count && seq < best_seq)) {
                victim = id;
                best_count = count;
                best_seq = seq;
            }
        }
        out.counts_.erase(victim);
        out.last_recorded_.erase(victim);
    }
    out.counts_[route] += 1;
    out.last_recorded_[route] = out.next_seq_++;
    for (const auto& [segment, kwh] : energies_kwh) {
        out.samples_[segment].push_back(kwh);
    }
    return out;
}

EnergyEstimate TripHistory::expected_energy(const SegmentId& segment) const {
    auto it = samples_.find(segment);
    if (it == samples_.end() || it->second.empty()) {
        raise(Errc::no_samples, "no energy samples for segment '" + segment + "'");
    }
    const std::vector<double>& values = it->second;
    double sum = 0.0;
    double max = 0.0;
    for (double v : values) {
        sum += v;
        max = std::max(max, v);
    }
    return EnergyEstimate{segment, sum / static_cast<double>(values.size()), max, values.size()};
}

std::uint64_t TripHistory::count(const RouteId& route) const noexcept {
    auto it = counts_.find(route);
    return it == counts_.end() ? 0 : it->second;
}

TripHistory make_synthetic_history(const RoadNetwork& network,
                                   const std::map<RouteId, std::uint64_t>& route_counts,
                                   std::uint64_t seed, double lo_kwh, double hi_kwh) {
    if (lo_kwh < 0.0 || hi_kwh < lo_kwh) {
        raise(Errc::negative_energy, "energy range must satisfy 0 <= lo <= hi");
    }
    std::map<SegmentId, std::vector<double>> samples;
    for (const auto& [route, count] : route_counts) {
        const Route& r = network.route(route);
        for (const SegmentId& segment : r.segments) {
            // Substream per (segment, route) so adding a route never shifts
            // the draws of existing ones.
            Rng rng(hash_combine(hash_combine(seed, segment), route));
            auto& dst = samples[segment];
            for (std::uint64_t i = 0; i < count; ++i) {
                dst.push_back(rng.uniform(lo_kwh, hi_kwh));
            }
        }
    }
    return TripHistory::from_counts(network, route_counts, samples,
                                    std::max(route_counts.size(), TripHistory::kDefaultCapacity));
}

}  // namespace phevsim
