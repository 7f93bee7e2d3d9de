#include <doctest.h>

#include "phevsim/density.hpp"
#include "phevsim/rng.hpp"
#include "support/checks.hpp"
#include "support/fixtures.hpp"

using namespace phevsim;
using checks::code_of;

TEST_CASE("static tables ignore time and default to zero") {
    const RoadNetwork network = fixtures::y_network();
    const StaticDensityProvider provider(network, {{"r1", 50.0}});
    CHECK(provider.density("r1", 0.0) == 50.0);
    CHECK(provider.density("r1", 12345.0) == 50.0);
    CHECK(provider.density("r2", 7.0) == 0.0);
    CHECK(code_of([&] { (void)provider.density("zz", 0.0); }) == Errc::unknown_segment);
    CHECK(code_of([&] { StaticDensityProvider(network, {{"zz", 1.0}}); }) ==
          Errc::unknown_segment);
    CHECK(code_of([&] { StaticDensityProvider(network, {{"r1", -1.0}}); }) ==
          Errc::invalid_instance);
}

TEST_CASE("synthetic densities are pure functions of seed, segment and time") {
    const RoadNetwork network = fixtures::y_network();
    const SyntheticDensityProvider a(network, 42, 50.0, 10.0, 600.0);
    const SyntheticDensityProvider b(network, 42, 50.0, 10.0, 600.0);
    for (double t : {0.0, 1.0, 90.0, 3600.0}) {
        CHECK(a.density("r1", t) == b.density("r1", t));
        CHECK(a.density("r1", t) >= 0.0);
    }
    // Different seeds decorrelate.
    const SyntheticDensityProvider c(network, 43, 50.0, 10.0, 600.0);
    CHECK(a.density("r1", 0.0) != c.density("r1", 0.0));
}

TEST_CASE("zero amplitude means a constant baseline") {
    const RoadNetwork network = fixtures::y_network();
    const SyntheticDensityProvider provider(network, 7, 50.0, 0.0);
    const double level = provider.density("r3", 0.0);
    for (double t : {1.0, 100.0, 5000.0}) {
        CHECK(provider.density("r3", t) == level);
    }
}

TEST_CASE("replay returns the latest snapshot at or before the query") {
    const RoadNetwork network = fixtures::y_network();
    const ReplayDensityProvider provider(
        network, {DensitySnapshot{10.0, {{"r1", 5.0}}},
                  DensitySnapshot{0.0, {{"r1", 1.0}, {"r2", 2.0}}},
                  DensitySnapshot{20.0, {{"r1", 9.0}}}});
    CHECK(provider.density("r1", 0.0) == 1.0);
    CHECK(provider.density("r1", 9.9) == 1.0);
    CHECK(provider.density("r1", 10.0) == 5.0);
    CHECK(provider.density("r1", 25.0) == 9.0);
    // Before the first snapshot, the first applies.
    CHECK(provider.density("r1", -5.0) == 1.0);
    // Segment absent from the active snapshot counts as empty.
    CHECK(provider.density("r2", 15.0) == 0.0);
}

TEST_CASE("point aggregation sums weights per segment") {
    const RoadNetwork network = fixtures::y_network();

    const DensitySnapshot three = aggregate_points(
        {{"r1", {}, 1.0}, {"r1", 30.0, 1.0}, {"r1", {}, 1.0}}, network);
    CHECK(three.counts.at("r1") == 3.0);
    CHECK(three.counts.at("r2") == 0.0);

    const DensitySnapshot empty = aggregate_points({}, network);
    for (const auto& [segment, count] : empty.counts) {
        (void)segment;
        CHECK(count == 0.0);
    }

    const DensitySnapshot weighted =
        aggregate_points({{"r2", {}, 2.0}, {"r2", {}, 5.0}}, network);
    CHECK(weighted.counts.at("r2") == 7.0);

    CHECK(code_of([&] { (void)aggregate_points({{"zz", {}, 1.0}}, network); }) ==
          Errc::unknown_segment);
    CHECK(code_of([&] { (void)aggregate_points({{"r1", {}, -1.0}}, network); }) ==
          Errc::negative_weight);
    CHECK(code_of([&] { (void)aggregate_points({{"r1", 250.0, 1.0}}, network); }) ==
          Errc::invalid_instance);
}

TEST_CASE("aggregation conserves the total observation mass") {
    const RoadNetwork network = fixtures::three_routes_network();
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<PointObservation> observations;
        double mass = 0.0;
        const std::size_t n = rng.index(30);
        const auto& segments = network.segments();
        for (std::size_t i = 0; i < n; ++i) {
            PointObservation obs;
            obs.segment = segments[rng.index(segments.size())].id;
            obs.weight = rng.uniform(0.0, 10.0);
            mass += obs.weight;
            observations.push_back(std::move(obs));
        }
        const DensitySnapshot snapshot = aggregate_points(observations, network);
        double total = 0.0;
        for (const auto& [segment, count] : snapshot.counts) {
            (void)segment;
            total += count;
        }
        CHECK(total == doctest::Approx(mass).epsilon(1e-12));
    }
}
