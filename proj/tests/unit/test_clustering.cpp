#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "drseg/clustering.hpp"
#include "drseg/errors.hpp"
#include "oracles.hpp"
#include "testutil.hpp"

using namespace drseg;
using testutil::impulse;

namespace {

std::vector<ProfileValues> two_groups(int per_group) {
    ProfileValues a{}, b{};
    a[8] = 0.7;
    b[19] = 0.7;
    std::vector<ProfileValues> out;
    for (int i = 0; i < per_group; ++i) out.push_back(a);
    for (int i = 0; i < per_group; ++i) out.push_back(b);
    return out;
}

} // namespace

TEST_CASE("kmeans degenerate and separable cases") {
    std::mt19937_64 rng(21);
    std::vector<ProfileValues> profiles;
    for (int i = 0; i < 10; ++i) profiles.push_back(testutil::random_profile(rng));

    const auto one = kmeans_fit(profiles, 1, DistanceMeasure::euclid(), 7);
    ProfileValues mean{};
    for (const auto& p : profiles)
        for (std::size_t h = 0; h < 24; ++h) mean[h] += p[h] / 10.0;
    for (std::size_t h = 0; h < 24; ++h)
        CHECK(one.centroids[0][h] == doctest::Approx(mean[h]).epsilon(1e-12));

    const auto groups = two_groups(3);
    const auto m = kmeans_fit(groups, 2, DistanceMeasure::euclid(), 7);
    CHECK(m.inertia == doctest::Approx(0.0));
    CHECK(m.labels[0] == m.labels[1]);
    CHECK(m.labels[1] == m.labels[2]);
    CHECK(m.labels[3] == m.labels[4]);
    CHECK(m.labels[0] != m.labels[3]);

    CHECK_THROWS_AS(kmeans_fit(groups, 0, DistanceMeasure::euclid(), 7), std::invalid_argument);
    CHECK_THROWS_AS(kmeans_fit(groups, 7, DistanceMeasure::euclid(), 7), std::invalid_argument);
}

TEST_CASE("kmeans recovers synthetic archetypes under constrained DTW") {
    std::vector<int> truth;
    const auto profiles = oracle::archetype_profiles(50, 0.01, 77, &truth);
    const auto model = kmeans_fit(profiles, 4, DistanceMeasure::dtw(1), 42);
    CHECK(oracle::adjusted_rand_index(model.labels, truth) >= 0.9);
}

TEST_CASE("kmeans inertia is non-increasing across lloyd iterations") {
    std::vector<int> truth;
    const auto profiles = oracle::archetype_profiles(30, 0.05, 5, &truth);
    for (const auto measure : {DistanceMeasure::euclid(), DistanceMeasure::dtw(1)}) {
        std::vector<double> trace;
        KMeansOptions opt;
        opt.inertia_trace = &trace;
        kmeans_fit(profiles, 4, measure, 3, opt);
        REQUIRE(trace.size() >= 1);
        for (std::size_t i = 1; i < trace.size(); ++i) CHECK(trace[i] <= trace[i - 1] + 1e-12);
    }
}

TEST_CASE("kmeans determinism and scale invariance of labels") {
    std::vector<int> truth;
    const auto profiles = oracle::archetype_profiles(20, 0.02, 9, &truth);
    const auto a = kmeans_fit(profiles, 4, DistanceMeasure::dtw(1), 123);
    const auto b = kmeans_fit(profiles, 4, DistanceMeasure::dtw(1), 123);
    CHECK(a.labels == b.labels);
    CHECK(a.inertia == b.inertia);

    // scaling raw inputs by a power of two leaves normalized values bit-identical
    std::vector<DailyProfile> raw;
    std::mt19937_64 rng(31);
    for (int i = 0; i < 30; ++i)
        raw.push_back(testutil::make_profile("M", i, testutil::random_profile(rng)));
    std::vector<ProfileValues> norm1, norm4;
    for (const auto& p : raw) {
        norm1.push_back(normalize_profile(p).values);
        auto scaled = p;
        for (double& v : scaled.values) v *= 4.0;
        norm4.push_back(normalize_profile(scaled).values);
    }
    const auto m1 = kmeans_fit(norm1, 3, DistanceMeasure::euclid(), 99);
    const auto m4 = kmeans_fit(norm4, 3, DistanceMeasure::euclid(), 99);
    CHECK(m1.labels == m4.labels);
}

TEST_CASE("dba barycenter") {
    const auto m1 = impulse(10, 1.0), m2 = impulse(11, 1.0);

    const std::vector<ProfileValues> single{m1};
    const auto b1 = dba_barycenter(single, 1, 10, m1);
    for (std::size_t h = 0; h < 24; ++h) CHECK(b1[h] == m1[h]);

    const std::vector<ProfileValues> same{m2, m2, m2};
    const auto b2 = dba_barycenter(same, 1, 10, m2);
    for (std::size_t h = 0; h < 24; ++h) CHECK(b2[h] == m2[h]);

    // the refined barycenter beats the arithmetic mean on total DTW cost
    const std::vector<ProfileValues> pair{m1, m2};
    ProfileValues mean{};
    for (std::size_t h = 0; h < 24; ++h) mean[h] = (m1[h] + m2[h]) / 2.0;
    const auto refined = dba_barycenter(pair, 1, 10, mean);
    const auto cost = [&](const ProfileValues& c) {
        double total = 0.0;
        for (const auto& m : pair) {
            const double d = dtw_constrained(c, m, 1);
            total += d * d;
        }
        return total;
    };
    CHECK(cost(refined) <= cost(mean) + 1e-15);

    CHECK_THROWS_AS(dba_barycenter({}, 1, 10, mean), std::invalid_argument);
}

TEST_CASE("kmedoids invariants and examples") {
    std::mt19937_64 rng(41);
    std::vector<ProfileValues> profiles;
    for (int i = 0; i < 8; ++i) profiles.push_back(testutil::random_profile(rng));
    const auto matrix = distance_matrix(profiles, DistanceMeasure::dtw(1));

    // k = n: every profile its own medoid, inertia 0
    const auto all = kmedoids_fit(profiles, 8, DistanceMeasure::dtw(1), 1, matrix);
    CHECK(all.inertia == 0.0);
    std::set<int> labels(all.labels.begin(), all.labels.end());
    CHECK(labels.size() == 8);

    // medoids are members, bitwise
    const auto m = kmedoids_fit(profiles, 3, DistanceMeasure::dtw(1), 1, matrix);
    for (int c = 0; c < 3; ++c) {
        bool found = false;
        for (std::size_t i = 0; i < profiles.size(); ++i)
            found = found || (m.labels[i] == c &&
                              profiles[i] == m.centroids[static_cast<std::size_t>(c)]);
        CHECK(found);
    }

    // the repeated zero profile is the medoid of {0, 0, e}
    ProfileValues zero{}, e = impulse(0, 1.0);
    const std::vector<ProfileValues> trio{zero, zero, e};
    const auto tm = distance_matrix(trio, DistanceMeasure::euclid());
    const auto tmod = kmedoids_fit(trio, 1, DistanceMeasure::euclid(), 5, tm);
    for (std::size_t h = 0; h < 24; ++h) CHECK(tmod.centroids[0][h] == 0.0);

    // separable groups put one medoid in each
    const auto groups = two_groups(4);
    const auto gm = distance_matrix(groups, DistanceMeasure::euclid());
    const auto gmod = kmedoids_fit(groups, 2, DistanceMeasure::euclid(), 3, gm);
    CHECK(gmod.inertia == doctest::Approx(0.0));
    CHECK(gmod.labels[0] != gmod.labels[7]);

    // determinism
    const auto again = kmedoids_fit(profiles, 3, DistanceMeasure::dtw(1), 1, matrix);
    CHECK(again.labels == m.labels);
}

TEST_CASE("agglomerative merge order matches the naive oracle") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<ProfileValues> profiles;
        const int n = 5 + static_cast<int>(testutil::unit(rng) * 4); // 5..8
        for (int i = 0; i < n; ++i) profiles.push_back(testutil::random_profile(rng));

        for (const auto linkage : {Linkage::ward, Linkage::average, Linkage::complete}) {
            const auto measure = linkage == Linkage::ward ? DistanceMeasure::euclid()
                                                          : DistanceMeasure::dtw(1);
            const auto matrix = distance_matrix(profiles, measure);
            const auto mine = agglomerative_dendrogram(matrix, linkage);
            const auto ref = oracle::agglomerative_merges_naive(profiles, measure, linkage);
            REQUIRE(mine.size() == ref.size());
            for (std::size_t t = 0; t < mine.size(); ++t) {
                CHECK(mine[t].left == ref[t].left);
                CHECK(mine[t].right == ref[t].right);
            }
        }
    }
}

TEST_CASE("agglomerative cuts and labels") {
    const auto groups = two_groups(2); // A A B B
    const auto matrix = distance_matrix(groups, DistanceMeasure::euclid());

    const auto singletons =
        agglomerative_fit(groups, 4, DistanceMeasure::euclid(), Linkage::ward, matrix);
    CHECK(singletons.labels == std::vector<int>{0, 1, 2, 3});

    const auto m = agglomerative_fit(groups, 2, DistanceMeasure::euclid(), Linkage::ward, matrix);
    CHECK(m.labels == std::vector<int>{0, 0, 1, 1});
    CHECK(m.inertia == doctest::Approx(0.0));

    // ward under DTW carries an explanatory note
    const auto dtw_matrix = distance_matrix(groups, DistanceMeasure::dtw(1));
    const auto heuristic =
        agglomerative_fit(groups, 2, DistanceMeasure::dtw(1), Linkage::ward, dtw_matrix);
    CHECK(!heuristic.notes.empty());
}

TEST_CASE("predict maps to the nearest centroid with lowest-index ties") {
    ClusterModel model;
    model.measure = DistanceMeasure::euclid();
    model.k = 3;
    model.centroids = {impulse(3, 1.0), impulse(10, 1.0), impulse(20, 1.0)};
    CHECK(predict(model, impulse(10, 1.0)) == 1);
    ProfileValues between{};
    between[10] = 0.5;
    between[20] = 0.5; // equidistant to centroids 1 and 2
    CHECK(predict(model, between) == 1);

    // converged kmeans: training profiles keep their labels
    std::vector<int> truth;
    const auto profiles = oracle::archetype_profiles(20, 0.02, 13, &truth);
    const auto fitted = kmeans_fit(profiles, 4, DistanceMeasure::dtw(1), 11);
    for (std::size_t i = 0; i < profiles.size(); ++i)
        CHECK(predict(fitted, profiles[i]) == fitted.labels[i]);
}

TEST_CASE("model json round-trip") {
    std::vector<int> truth;
    const auto profiles = oracle::archetype_profiles(10, 0.02, 17, &truth);
    auto model = kmeans_fit(profiles, 3, DistanceMeasure::dtw(1), 404);
    model.notes.push_back("test note");
    std::vector<ProfileKey> keys;
    for (std::size_t i = 0; i < profiles.size(); ++i)
        keys.push_back(ProfileKey{"M" + std::to_string(i % 5), static_cast<DayStamp>(18000 + i)});

    const auto text = model_to_json(model, keys);
    std::vector<ProfileKey> back_keys;
    const auto back = model_from_json(text, &back_keys);
    CHECK(back.algorithm == model.algorithm);
    CHECK(back.measure.kind == model.measure.kind);
    CHECK(back.measure.sakoe_chiba_radius == model.measure.sakoe_chiba_radius);
    CHECK(back.k == model.k);
    CHECK(back.seed == model.seed);
    CHECK(back.inertia == model.inertia);
    CHECK(back.labels == model.labels);
    CHECK(back.notes == model.notes);
    REQUIRE(back_keys.size() == keys.size());
    for (std::size_t i = 0; i < keys.size(); ++i) {
        CHECK(back_keys[i].meter_id == keys[i].meter_id);
        CHECK(back_keys[i].date == keys[i].date);
    }
    for (int c = 0; c < 3; ++c)
        for (std::size_t h = 0; h < 24; ++h)
            CHECK(back.centroids[static_cast<std::size_t>(c)][h] ==
                  model.centroids[static_cast<std::size_t>(c)][h]);

    CHECK_THROWS_AS(model_from_json("{not json"), DataError);
}
