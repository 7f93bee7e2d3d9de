#include <doctest.h>

#include <map>

#include "phevsim/history.hpp"
#include "phevsim/rng.hpp"
#include "support/checks.hpp"
#include "support/fixtures.hpp"

using namespace phevsim;
using checks::code_of;

namespace {

RoadNetwork small_network() {
    return RoadNetwork({{"s1", 100.0}, {"s2", 100.0}, {"s3", 100.0}},
                       {Route{"A", {"s1", "s2"}}, Route{"B", {"s2", "s3"}},
                        Route{"C", {"s1", "s3"}}});
}

std::map<SegmentId, double> trip_energies(const RoadNetwork& network, const RouteId& route,
                                          double kwh) {
    std::map<SegmentId, double> energies;
    for (const SegmentId& segment : network.route(route).segments) energies[segment] = kwh;
    return energies;
}

}  // namespace

TEST_CASE("recording the same route twice counts it twice") {
    const RoadNetwork network = small_network();
    TripHistory history;
    history = history.record_trip(network, "A", trip_energies(network, "A", 0.02));
    history = history.record_trip(network, "A", trip_energies(network, "A", 0.03));
    CHECK(history.count("A") == 2);
    CHECK(history.energy_samples().at("s1").size() == 2);
}

TEST_CASE("capacity eviction removes the rarest route and keeps its samples") {
    const RoadNetwork network = small_network();
    TripHistory history(2);
    for (int i = 0; i < 5; ++i) {
        history = history.record_trip(network, "A", trip_energies(network, "A", 0.02));
    }
    history = history.record_trip(network, "B", trip_energies(network, "B", 0.04));
    history = history.record_trip(network, "C", trip_energies(network, "C", 0.01));

    CHECK(history.route_counts().size() == 2);
    CHECK(history.count("A") == 5);
    CHECK(history.count("C") == 1);
    CHECK(history.count("B") == 0);
    // B's samples live on s2/s3 and survive the eviction.
    CHECK(history.energy_samples().at("s3").size() == 2);
}

TEST_CASE("eviction ties break by least recently recorded") {
    const RoadNetwork network = small_network();
    TripHistory history(2);
    history = history.record_trip(network, "A", trip_energies(network, "A", 0.02));
    history = history.record_trip(network, "B", trip_energies(network, "B", 0.02));
    // Both have count 1; A is older, so A goes.
    history = history.record_trip(network, "C", trip_energies(network, "C", 0.02));
    CHECK(history.count("A") == 0);
    CHECK(history.count("B") == 1);
    CHECK(history.count("C") == 1);
}

TEST_CASE("record_trip validation") {
    const RoadNetwork network = small_network();
    const TripHistory history;
    CHECK(code_of([&] {
              (void)history.record_trip(network, "A", {{"s1", -0.01}, {"s2", 0.02}});
          }) == Errc::negative_energy);
    CHECK(code_of([&] {
              (void)history.record_trip(network, "nope", {{"s1", 0.01}});
          }) == Errc::unknown_route);
    CHECK(code_of([&] {
              (void)history.record_trip(network, "A", {{"s1", 0.01}, {"s3", 0.02}});
          }) == Errc::unknown_segment);
    CHECK(code_of([&] {
              (void)history.record_trip(network, "A", {{"s1", 0.01}});
          }) == Errc::missing_energy);
}

TEST_CASE("expected energy is the mean and max of the samples") {
    const RoadNetwork network = small_network();
    const TripHistory history = TripHistory::from_counts(
        network, {{"A", 1}}, {{"s1", {0.02, 0.04}}, {"s2", {0.025}}});

    const EnergyEstimate pair = history.expected_energy("s1");
    CHECK(pair.mean_kwh == doctest::Approx(0.03).epsilon(1e-12));
    CHECK(pair.max_kwh == doctest::Approx(0.04).epsilon(1e-12));
    CHECK(pair.sample_count == 2);

    const EnergyEstimate single = history.expected_energy("s2");
    CHECK(single.mean_kwh == doctest::Approx(0.025));
    CHECK(single.max_kwh == doctest::Approx(0.025));

    CHECK(code_of([&] { (void)history.expected_energy("s3"); }) == Errc::no_samples);
}

TEST_CASE("synthetic history draws uniform energies in range") {
    const RoadNetwork network = small_network();
    const TripHistory history = make_synthetic_history(network, {{"A", 1000}}, 42);
    const EnergyEstimate estimate = history.expected_energy("s1");
    CHECK(estimate.sample_count == 1000);
    CHECK(estimate.mean_kwh > 0.02);
    CHECK(estimate.mean_kwh < 0.03);
    CHECK(estimate.max_kwh <= 0.05);
    CHECK(estimate.mean_kwh <= estimate.max_kwh);

    // Same seed, same history.
    const TripHistory again = make_synthetic_history(network, {{"A", 1000}}, 42);
    CHECK(again.energy_samples().at("s1") == history.energy_samples().at("s1"));
}

TEST_CASE("eviction never removes the strictly most-frequent route") {
    const RoadNetwork network = small_network();
    Rng rng(7);
    for (int trial = 0; trial < 50; ++trial) {
        TripHistory history(2);
        std::uint64_t recorded = 0;
        std::uint64_t evicted = 0;
        const std::vector<RouteId> all{"A", "B", "C"};
        auto total_counts = [](const TripHistory& h) {
            std::uint64_t total = 0;
            for (const auto& [id, count] : h.route_counts()) {
                (void)id;
                total += count;
            }
            return total;
        };
        for (int i = 0; i < 30; ++i) {
            const RouteId route = all[rng.index(all.size())];
            // Who has the strictly largest count right now?
            RouteId leader;
            std::uint64_t best = 0;
            bool strict = false;
            for (const auto& [id, count] : history.route_counts()) {
                if (count > best) {
                    best = count;
                    leader = id;
                    strict = true;
                } else if (count == best) {
                    strict = false;
                }
            }
            const std::uint64_t before = total_counts(history);
            history = history.record_trip(network, route, trip_energies(network, route, 0.01));
            ++recorded;
            evicted += before + 1 - total_counts(history);
            if (strict && leader != route) {
                CHECK(history.count(leader) == best);
            }
            // Counts kept plus counts evicted equals record_trip calls.
            CHECK(total_counts(history) + evicted == recorded);
        }
        CHECK(history.route_counts().size() <= 2);
    }
}

TEST_CASE("mean never exceeds max on random sample sets") {
    const RoadNetwork network = small_network();
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> samples;
        const std::size_t n = 1 + rng.index(20);
        for (std::size_t i = 0; i < n; ++i) samples.push_back(rng.uniform(0.0, 0.08));
        const TripHistory history =
            TripHistory::from_counts(network, {{"A", 1}}, {{"s1", samples}});
        const EnergyEstimate estimate = history.expected_energy("s1");
        CHECK(estimate.mean_kwh <= estimate.max_kwh + 1e-15);
    }
}

TEST_CASE("from_counts validation") {
    const RoadNetwork network = small_network();
    CHECK(code_of([&] {
              (void)TripHistory::from_counts(network, {{"A", 1}, {"B", 1}}, {}, 1);
          }) == Errc::capacity_exceeded);
    CHECK(code_of([&] { (void)TripHistory::from_counts(network, {{"nope", 1}}, {}); }) ==
          Errc::unknown_route);
    CHECK(code_of([&] {
              (void)TripHistory::from_counts(network, {{"A", 1}}, {{"s1", {-0.1}}});
          }) == Errc::negative_energy);
}
