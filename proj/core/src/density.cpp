#include "phevsim/density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phevsim/rng.hpp"

namespace phevsim {

namespace {

std::set<SegmentId> segment_ids(const RoadNetwork& network) {
    std::set<SegmentId> ids;
    for (const Segment& s : network.segments()) ids.insert(s.id);
    return ids;
}

void require_known(const std::set<SegmentId>& known, const SegmentId& segment) {
    if (!known.contains(segment)) {
        raise(Errc::unknown_segment, "no segment '" + segment + "'");
    }
}

}  // namespace

StaticDensityProvider::StaticDensityProvider(const RoadNetwork& network,
                                             std::map<SegmentId, double> counts)
    : known_(segment_ids(network)), counts_(std::move(counts)) {
    for (const auto& [segment, count] : counts_) {
        require_known(known_, segment);
        if (count < 0.0) {
            raise(Errc::invalid_instance, "negative density on '" + segment + "'");
        }
    }
}

double StaticDensityProvider::density(const SegmentId& segment, double time_s) const {
    (void)time_s;
    require_known(known_, segment);
    auto it = counts_.find(segment);
    return it == counts_.end() ? 0.0 : it->second;
}

SyntheticDensityProvider::SyntheticDensityProvider(const RoadNetwork& network,
                                                   std::uint64_t seed, double baseline,
                                                   double amplitude, double period_s)
    : known_(segment_ids(network)),
      seed_(seed),
      baseline_(baseline),
      amplitude_(amplitude),
      period_s_(period_s) {
    if (baseline_ < 0.0 || amplitude_ < 0.0 || period_s_ <= 0.0) {
        raise(Errc::invalid_instance, "baseline/amplitude must be >= 0, period > 0");
    }
}

double SyntheticDensityProvider::density(const SegmentId& segment, double time_s) const {
    require_known(known_, segment);
    Rng rng(hash_combine(seed_, segment));
    const double level = baseline_ * (0.5 + rng.uniform());       // [0.5, 1.5) * baseline
    const double phase = rng.uniform() * 2.0 * std::numbers::pi;  // per-segment offset
    const double wave =
        amplitude_ * std::sin(2.0 * std::numbers::pi * time_s / period_s_ + phase);
    return std::max(0.0, level + wave);
}

ReplayDensityProvider::ReplayDensityProvider(const RoadNetwork& network,
                                             std::vector<DensitySnapshot> snapshots)
    : known_(segment_ids(network)), snapshots_(std::move(snapshots)) {
    if (snapshots_.empty()) {
        raise(Errc::invalid_instance, "replay needs at least one snapshot");
    }
    std::stable_sort(snapshots_.begin(), snapshots_.end(),
                     [](const DensitySnapshot& a, const DensitySnapshot& b) {
                         return a.time_s < b.time_s;
                     });
    for (const DensitySnapshot& snapshot : snapshots_) {
        for (const auto& [segment, count] : snapshot.counts) {
            require_known(known_, segment);
            if (count < 0.0) {
                raise(Errc::invalid_instance, "negative density on '" + segment + "'");
            }
        }
    }
}

double ReplayDensityProvider::density(const SegmentId& segment, double time_s) const {
    require_known(known_, segment);
    const DensitySnapshot* active = &snapshots_.front();
    for (const DensitySnapshot& snapshot : snapshots_) {
        if (snapshot.time_s <= time_s) {
            active = &snapshot;
        } else {
            break;
        }
    }
    auto it = active->counts.find(segment);
    return it == active->counts.end() ? 0.0 : it->second;
}

DensitySnapshot aggregate_points(const std::vector<PointObservation>& observations,
                                 const RoadNetwork& network) {
    DensitySnapshot snapshot;
    for (const Segment& segment : network.segments()) {
        snapshot.counts[segment.id] = 0.0;
    }
    for (const PointObservation& obs : observations) {
        if (!network.has_segment(obs.segment)) {
            raise(Errc::unknown_segment, "observation on unknown segment '" + obs.segment + "'");
        }
        if (obs.weight < 0.0) {
            raise(Errc::negative_weight, "observation weight must be >= 0");
        }
        if (obs.offset_m) {
            const double length = network.segment(obs.segment).length_m;
            if (*obs.offset_m < 0.0 || *obs.offset_m > length) {
                raise(Errc::invalid_instance,
                      "offset outside segment '" + obs.segment + "'");
            }
        }
        snapshot.counts[obs.segment] += obs.weight;
    }
    return snapshot;
}

}  // namespace phevsim
