#include <doctest.h>

#include <cmath>

#include "drseg/entropy.hpp"

using namespace drseg;

namespace {

MembershipDistribution dist_of(std::string meter, std::vector<std::size_t> counts) {
    MembershipDistribution d;
    d.meter_id = std::move(meter);
    d.counts = std::move(counts);
    for (const auto c : d.counts) d.total += c;
    d.probabilities.resize(d.counts.size());
    for (std::size_t i = 0; i < d.counts.size(); ++i)
        d.probabilities[i] = static_cast<double>(d.counts[i]) / static_cast<double>(d.total);
    return d;
}

} // namespace

TEST_CASE("meter entropy values") {
    CHECK(meter_entropy(dist_of("A", {12, 0, 0})) == 0.0);
    CHECK(meter_entropy(dist_of("A", {6, 6})) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    CHECK(meter_entropy(dist_of("A", {2, 1, 1})) == doctest::Approx(1.0397207708399179).epsilon(1e-9));

    // uniform over K hits ln K, the maximum
    for (int k = 2; k <= 14; ++k) {
        std::vector<std::size_t> counts(static_cast<std::size_t>(k), 5);
        CHECK(meter_entropy(dist_of("A", counts)) ==
              doctest::Approx(std::log(static_cast<double>(k))).epsilon(1e-9));
    }
}

TEST_CASE("entropy discretization bins and monotonicity") {
    CHECK(discretize_entropy(0.3) == EntropyLabel::very_low);
    CHECK(discretize_entropy(1.2) == EntropyLabel::average);
    CHECK(discretize_entropy(0.0) == EntropyLabel::very_low);
    CHECK(discretize_entropy(0.5) == EntropyLabel::low);
    CHECK(discretize_entropy(1.0) == EntropyLabel::average);
    CHECK(discretize_entropy(1.5) == EntropyLabel::high);
    CHECK(discretize_entropy(2.0) == EntropyLabel::very_high);
    CHECK(discretize_entropy(7.5) == EntropyLabel::very_high);
    CHECK_THROWS_AS(discretize_entropy(-0.1), std::invalid_argument);

    EntropyLabel prev = EntropyLabel::very_low;
    for (double v = 0.0; v < 3.0; v += 0.01) {
        const auto label = discretize_entropy(v);
        CHECK(static_cast<int>(label) >= static_cast<int>(prev));
        prev = label;
    }
}

TEST_CASE("profile cluster entropy is share-weighted") {
    const std::vector<MembershipDistribution> dists{
        dist_of("A", {4, 0, 0, 4}),  // entropy ln 2, half of profiles in cluster 3
        dist_of("B", {0, 0, 0, 6}),  // entropy 0, all profiles in cluster 3
    };
    const std::vector<double> entropies{meter_entropy(dists[0]), meter_entropy(dists[1])};
    const auto per_cluster = profile_cluster_entropy(dists, entropies);

    // equal shares in cluster 3: (ln2 * 0.5 + 0 * 1.0) / 1.5
    CHECK(per_cluster.at(3) ==
          doctest::Approx((std::log(2.0) * 0.5) / 1.5).epsilon(1e-12));
    // cluster 0 touched only by A
    CHECK(per_cluster.at(0) == doctest::Approx(std::log(2.0)).epsilon(1e-12));
    // untouched clusters are absent
    CHECK(per_cluster.count(1) == 0);
    CHECK(per_cluster.count(2) == 0);

    // single-meter case: the cluster inherits that meter's entropy
    const std::vector<MembershipDistribution> solo{dist_of("A", {3, 9})};
    const std::vector<double> se{meter_entropy(solo[0])};
    const auto sc = profile_cluster_entropy(solo, se);
    CHECK(sc.at(0) == doctest::Approx(se[0]).epsilon(1e-12));
    CHECK(sc.at(1) == doctest::Approx(se[0]).epsilon(1e-12));

    // equal shares with entropies 0 and ln 2 average to ln(2)/2
    const std::vector<MembershipDistribution> equal{
        dist_of("X", {0, 0, 0, 4, 4, 0}),
        dist_of("Y", {0, 0, 0, 5, 0, 5}),
    };
    const std::vector<double> given{0.0, std::log(2.0)};
    CHECK(profile_cluster_entropy(equal, given).at(3) ==
          doctest::Approx(std::log(2.0) / 2.0).epsilon(1e-12));
}

TEST_CASE("prosumer assignment by majority with tie-breaks") {
    const std::vector<MembershipDistribution> dists{
        dist_of("A", {0, 0, 6, 0, 0, 4}), // 60/40 between clusters 2 and 5
        dist_of("B", {0, 0, 0, 0, 0, 0, 0, 0, 0, 7}),
        dist_of("C", {0, 0, 0, 5, 5}),    // 50/50 tie between 3 and 4
    };
    AssignmentTieBreak tb;
    tb.mean_distance[{"C", 3}] = 0.8;
    tb.mean_distance[{"C", 4}] = 0.2; // nearer on average
    const auto assignments = assign_prosumers(dists, &tb);
    CHECK(assignments.at("A") == 2);
    CHECK(assignments.at("B") == 9);
    CHECK(assignments.at("C") == 4);

    // without a tie-break table the lowest index wins
    const auto plain = assign_prosumers(dists);
    CHECK(plain.at("C") == 3);

    // every meter gets exactly one cluster, deterministically
    const auto again = assign_prosumers(dists, &tb);
    CHECK(again == assignments);
    CHECK(again.size() == dists.size());
}

TEST_CASE("prosumer cluster entropy is an unweighted mean") {
    const std::map<std::string, int> assignments{{"A", 4}, {"B", 4}, {"C", 7}};
    const std::map<std::string, double> entropies{{"A", 1.0}, {"B", 2.0}, {"C", 0.5}};
    const auto per_cluster = prosumer_cluster_entropy(assignments, entropies);
    CHECK(per_cluster.at(4) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(per_cluster.at(7) == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(per_cluster.count(0) == 0); // no assigned meter -> absent
}

TEST_CASE("membership distributions from labels") {
    const std::vector<ProfileKey> keys{{"A", 1}, {"A", 2}, {"B", 1}, {"A", 3}, {"B", 2}};
    const std::vector<int> labels{0, 1, 2, 0, 2};
    const auto dists = membership_distributions(keys, labels, 3);
    REQUIRE(dists.size() == 2);
    CHECK(dists[0].meter_id == "A");
    CHECK(dists[0].counts == std::vector<std::size_t>{2, 1, 0});
    CHECK(dists[1].counts == std::vector<std::size_t>{0, 0, 2});
    double sum = 0.0;
    for (const double p : dists[0].probabilities) sum += p;
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
}
