// Acceptance suite: runs every criterion at its stated tolerance and prints
// one pass/fail line per criterion. Exit code is the number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "drseg/dr_engine.hpp"
#include "drseg/entropy.hpp"
#include "drseg/experiments.hpp"
#include "drseg/ingest.hpp"
#include "drseg/metrics.hpp"
#include "drseg/preprocess.hpp"
#include "oracles.hpp"
#include "synth.hpp"

using namespace drseg;

namespace {

struct Criterion {
    std::string name;
    std::function<void()> body;
};

void require(bool condition, const std::string& message) {
    if (!condition) throw std::runtime_error(message);
}

double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

ProfileValues impulse(int hour) {
    ProfileValues v{};
    v[static_cast<std::size_t>(hour)] = 1.0;
    return v;
}

ProfileValues random_profile(std::mt19937_64& rng) {
    ProfileValues v{};
    for (double& x : v) x = unit(rng);
    return v;
}

// ---- 1. published worked example ------------------------------------------

void pps_worked_example() {
    PeakVector l{}, c{};
    l[3] = 1;
    c[1] = 1;
    c[3] = 1;
    require(pps_sample(l, c, 0) == 0.5, "PPS sample is not exactly 0.5");
    require(pms_sample(l, c) == 1.0, "PMS sample is not exactly 1.0");
}

// ---- 2. banded DTW equals exhaustive enumeration ---------------------------

void dtw_oracle_equivalence() {
    for (std::size_t len = 1; len <= 6; ++len) {
        const std::size_t combos = 1u << len;
        for (std::size_t ia = 0; ia < combos; ++ia)
            for (std::size_t ib = 0; ib < combos; ++ib) {
                std::vector<double> a(len), b(len);
                for (std::size_t h = 0; h < len; ++h) {
                    a[h] = (ia >> h) & 1u;
                    b[h] = (ib >> h) & 1u;
                }
                for (int r = 0; r <= 2; ++r) {
                    const double dp = dtw_constrained(a, b, r);
                    const double ref = oracle::dtw_enumerated(a, b, r);
                    if (dp != ref) {
                        std::ostringstream msg;
                        msg << "mismatch at len=" << len << " a=" << ia << " b=" << ib
                            << " r=" << r << ": dp=" << dp << " enum=" << ref;
                        throw std::runtime_error(msg.str());
                    }
                }
            }
    }
}

// ---- 3. band semantics ------------------------------------------------------

void dtw_band_semantics() {
    require(dtw_constrained(impulse(10), impulse(11), 1) == 0.0,
            "one-hour shift not absorbed at radius 1");
    require(std::abs(dtw_constrained(impulse(10), impulse(12), 1) - std::sqrt(2.0)) <= 1e-12,
            "two-hour shift at radius 1 is not sqrt(2)");
    std::mt19937_64 rng(3001);
    for (int i = 0; i < 1000; ++i) {
        const auto a = random_profile(rng), b = random_profile(rng);
        require(std::abs(dtw_constrained(a, b, 0) - euclidean(a, b)) <= 1e-12,
                "radius 0 does not reduce to euclidean");
    }
}

// ---- 4. synthetic cluster recovery -----------------------------------------

void synthetic_recovery() {
    std::vector<int> truth;
    const auto profiles = oracle::archetype_profiles(50, 0.01, 2024, &truth);
    require(profiles.size() == 200, "generator did not produce 200 profiles");
    const auto model = kmeans_fit(profiles, 4, DistanceMeasure::dtw(1), 42);
    const double ari = oracle::adjusted_rand_index(model.labels, truth);
    require(ari >= 0.9, "adjusted Rand index " + std::to_string(ari) + " < 0.9");
}

// ---- 5. published selection table ------------------------------------------

void table_selection() {
    const auto row = [](int id, ClusterAlgorithm algo, DistanceKind kind, int k, double pps,
                        double sil) {
        ExperimentRow r;
        r.run_id = id;
        r.algorithm = algo;
        r.measure.kind = kind;
        r.measure.sakoe_chiba_radius = kind == DistanceKind::dtw_constrained ? 1 : 0;
        r.k = k;
        r.metrics.pps_relaxed = pps;
        r.metrics.silhouette_dtw = sil;
        return r;
    };
    ExperimentLog log;
    log.rows = {
        row(1, ClusterAlgorithm::kmeans, DistanceKind::dtw_constrained, 6, 0.652, 0.219),
        row(2, ClusterAlgorithm::kmeans, DistanceKind::dtw_constrained, 8, 0.634, 0.277),
        row(3, ClusterAlgorithm::kmeans, DistanceKind::dtw_constrained, 9, 0.616, 0.270),
        row(4, ClusterAlgorithm::kmeans, DistanceKind::dtw_constrained, 14, 0.689, 0.256),
        row(5, ClusterAlgorithm::kmeans, DistanceKind::euclidean, 8, 0.613, 0.284),
        row(6, ClusterAlgorithm::kmeans, DistanceKind::euclidean, 9, 0.622, 0.287),
        row(7, ClusterAlgorithm::kmedoids, DistanceKind::dtw_constrained, 13, 0.677, 0.248),
        row(8, ClusterAlgorithm::kmedoids, DistanceKind::dtw_constrained, 14, 0.670, 0.249),
    };
    SelectionCriteria criteria;
    criteria.min_k = 10;
    const int winner = select_best(log, criteria);
    require(winner == 4, "selected run " + std::to_string(winner) + ", expected 4");
    const auto& chosen = log.rows[3];
    require(chosen.algorithm == ClusterAlgorithm::kmeans &&
                chosen.measure.kind == DistanceKind::dtw_constrained && chosen.k == 14,
            "winner is not (kmeans, DTW, 14)");
}

// ---- 6. entropy values and bins --------------------------------------------

void entropy_criteria() {
    MembershipDistribution det;
    det.meter_id = "A";
    det.counts = {30, 0, 0};
    det.total = 30;
    det.probabilities = {1.0, 0.0, 0.0};
    require(std::abs(meter_entropy(det)) <= 1e-12, "deterministic distribution not 0");

    for (int k = 2; k <= 14; ++k) {
        MembershipDistribution uni;
        uni.meter_id = "A";
        uni.counts.assign(static_cast<std::size_t>(k), 7);
        uni.total = 7u * static_cast<std::size_t>(k);
        uni.probabilities.assign(static_cast<std::size_t>(k), 1.0 / k);
        require(std::abs(meter_entropy(uni) - std::log(static_cast<double>(k))) <= 1e-9,
                "uniform entropy misses ln " + std::to_string(k));
    }

    const std::pair<double, EntropyLabel> probes[] = {
        {0.0, EntropyLabel::very_low}, {0.5, EntropyLabel::low},
        {1.0, EntropyLabel::average},  {1.5, EntropyLabel::high},
        {2.0, EntropyLabel::very_high}};
    for (const auto& [value, expect] : probes)
        require(discretize_entropy(value) == expect,
                "bin mismatch at boundary " + std::to_string(value));
}

// ---- 7. imputation energy conservation --------------------------------------

void imputation_conservation() {
    std::mt19937_64 rng(7007);
    for (int trial = 0; trial < 500; ++trial) {
        const bool night = trial % 3 == 0;
        const int gap_start = night ? 1 : 7 + static_cast<int>(unit(rng) * 10);
        const int gap_len =
            night ? 2 + static_cast<int>(unit(rng) * 3) : 1 + static_cast<int>(unit(rng) * 2);
        const double cum0 = unit(rng) * 1000.0;
        const double delta = unit(rng) * 40.0;
        MeterSeries s{"M", {}};
        s.samples.push_back({gap_start - 1, 0.7, cum0});
        s.samples.push_back({static_cast<HourStamp>(gap_start + gap_len), 3.0, cum0 + delta});
        const auto imputed = impute_gaps(s);
        require(imputed.samples.size() == static_cast<std::size_t>(gap_len) + 2,
                "gap was not imputed");
        double energy = 0.0;
        for (std::size_t i = 1; i < imputed.samples.size(); ++i)
            energy += imputed.samples[i].active_power_kw;
        require(std::abs(energy - delta) <= 1e-6, "imputed energy misses the cumulative delta");
    }

    // a 3+ hour daytime gap stays missing and kills the day
    MeterSeries day{"M", {}};
    for (int h = 0; h < 24; ++h) {
        if (h >= 13 && h <= 15) continue;
        day.samples.push_back({100 * 24 + h, 1.0, std::nullopt});
    }
    const auto imputed = impute_gaps(day);
    require(imputed.samples.size() == day.samples.size(), "3-hour daytime gap was imputed");
    PreprocessStats stats;
    require(extract_daily_profiles(imputed, &stats).empty(), "incomplete day was not dropped");
    require(stats.days_dropped == 1, "dropped day not counted");
}

// ---- 8. normalization --------------------------------------------------------

void normalization_criteria() {
    std::mt19937_64 rng(8008);
    for (int trial = 0; trial < 1000; ++trial) {
        DailyProfile p;
        p.meter_id = "M";
        p.date = trial;
        for (double& v : p.values) v = (unit(rng) - 0.3) * 10.0; // mixed signs
        const auto n = normalize_profile(p);
        double abs_sum = 0.0;
        for (const double v : n.values) abs_sum += std::abs(v);
        require(std::abs(abs_sum - 1.0) <= 1e-9, "normalized |sum| misses 1");
        require(n.normalized, "normalized flag not set");
    }
    DailyProfile zero;
    zero.meter_id = "M";
    const auto z = normalize_profile(zero);
    require(z.normalized, "all-zero day not flagged normalized");
    for (const double v : z.values) require(v == 0.0, "all-zero day was altered");
}

// ---- 9. published recommendation table --------------------------------------

void recommendation_table() {
    struct Row {
        bool rpf, peak;
        DominantLoadType type;
        double res_share;
        EntropyLabel entropy;
        std::set<int> expect;
    };
    const std::vector<Row> rows{
        {true, false, DominantLoadType::commercial, 0.0, EntropyLabel::average, {1}},
        {false, true, DominantLoadType::residential, 1.0, EntropyLabel::very_high, {1, 2, 3}},
        {false, true, DominantLoadType::residential, 1.0, EntropyLabel::very_high, {1, 2, 3}},
        {true, true, DominantLoadType::mixed, 0.5, EntropyLabel::average, {1}},
        {true, false, DominantLoadType::commercial, 0.0, EntropyLabel::high, {1, 3}},
        {true, true, DominantLoadType::residential, 0.86, EntropyLabel::high, {1, 2, 3}},
    };
    for (std::size_t i = 0; i < rows.size(); ++i) {
        ClusterCharacter ch;
        ch.cluster = static_cast<int>(i);
        ch.rpf_contributor = rows[i].rpf;
        ch.peak_hours_demand = rows[i].peak;
        ch.dominant_load_type = rows[i].type;
        ch.residential_share = rows[i].res_share;
        ch.entropy_label = rows[i].entropy;
        const auto rec = recommend_schemes(ch);
        std::set<int> got;
        for (const auto s : rec.schemes) got.insert(static_cast<int>(s));
        if (got != rows[i].expect) {
            std::ostringstream msg;
            msg << "row " << i << ": scheme set {";
            for (const int s : got) msg << s << ' ';
            msg << "} does not match the published table";
            throw std::runtime_error(msg.str());
        }
    }
}

// ---- 10. full-pipeline determinism and scale ---------------------------------

std::string strip_wall_column(const std::filesystem::path& path) {
    std::ifstream in(path);
    require(in.good(), "cannot open log " + path.string());
    std::string out, line;
    while (std::getline(in, line)) {
        const auto comma = line.rfind(',');
        out.append(line, 0, comma);
        out.push_back('\n');
    }
    return out;
}

void pipeline_scale_and_determinism() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto dir = std::filesystem::temp_directory_path() / "drseg_acceptance_scale";
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);

    synth::CommunitySpec spec;
    spec.meters = 50;
    spec.days = 365 * 3;
    spec.seed = 99;
    synth::write_community(dir / "measurements.csv", dir / "metadata.csv", spec);

    MeasurementLoadStats stats;
    const auto series = load_measurements(dir / "measurements.csv", &stats);
    const auto metadata = load_metadata(dir / "metadata.csv");
    const auto validation = validate_dataset(series, metadata, 30);
    require(validation.accepted.size() == 50, "synthetic meters were rejected");

    std::map<std::string, const MeterMetadata*> meta_by_id;
    for (const auto& m : metadata) meta_by_id[m.meter_id] = &m;
    std::vector<DailyProfile> profiles;
    for (const auto& s : series) {
        for (const auto& p : preprocess_meter(s, *meta_by_id.at(s.meter_id)))
            profiles.push_back(p);
    }
    require(profiles.size() > 40000, "expected tens of thousands of complete days, got " +
                                         std::to_string(profiles.size()));

    GridSearchOptions options;
    options.seed = 4242;
    options.log_path = dir / "log_a.csv";
    const auto log_a = grid_search(profiles, options);
    require(log_a.rows.size() == 108, "grid did not produce 108 rows");

    options.log_path = dir / "log_b.csv";
    const auto log_b = grid_search(profiles, options);
    require(log_b.rows.size() == 108, "second grid did not produce 108 rows");

    require(strip_wall_column(dir / "log_a.csv") == strip_wall_column(dir / "log_b.csv"),
            "logs differ between identically seeded runs");

    const double minutes =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / 60.0;
    if (minutes >= 30.0)
        throw std::runtime_error("pipeline took " + std::to_string(minutes) + " minutes");
    std::filesystem::remove_all(dir);
}

// ---- 11. metric property suite -----------------------------------------------

void metric_property_suite() {
    std::vector<int> truth;
    const auto values = oracle::archetype_profiles(25, 0.02, 1111, &truth);
    std::vector<DailyProfile> profiles;
    for (std::size_t i = 0; i < values.size(); ++i) {
        DailyProfile p;
        p.meter_id = "M" + std::to_string(i % 10);
        p.date = static_cast<DayStamp>(18000 + i);
        p.values = values[i];
        p.normalized = true;
        profiles.push_back(p);
    }

    // pps_relaxed >= pps on every fitted model of a small grid
    GridSearchOptions opt;
    opt.k_min = 3;
    opt.k_max = 6;
    opt.seed = 5;
    opt.n_init = 2;
    const auto log = grid_search(profiles, opt);
    for (const auto& r : log.rows)
        require(r.metrics.pps_relaxed >= r.metrics.pps - 1e-12,
                "pps_relaxed < pps on a fitted model");

    // k-means inertia monotone per iteration
    for (const auto measure : {DistanceMeasure::euclid(), DistanceMeasure::dtw(1)}) {
        std::vector<double> trace;
        KMeansOptions kopt;
        kopt.inertia_trace = &trace;
        kmeans_fit(values, 4, measure, 31, kopt);
        for (std::size_t i = 1; i < trace.size(); ++i)
            require(trace[i] <= trace[i - 1] + 1e-12, "k-means inertia increased");
    }

    // k-medoids centroids are members
    const auto matrix = distance_matrix(values, DistanceMeasure::dtw(1));
    const auto medoids = kmedoids_fit(values, 5, DistanceMeasure::dtw(1), 17, matrix);
    for (int c = 0; c < 5; ++c) {
        bool found = false;
        for (std::size_t i = 0; i < values.size(); ++i)
            found = found || (medoids.labels[i] == c &&
                              values[i] == medoids.centroids[static_cast<std::size_t>(c)]);
        require(found, "k-medoids centroid is not a member of its cluster");
    }

    // agglomerative merge order equals the naive oracle on n <= 8
    std::mt19937_64 rng(202);
    for (int trial = 0; trial < 8; ++trial) {
        std::vector<ProfileValues> pts;
        const int n = 5 + static_cast<int>(unit(rng) * 4);
        for (int i = 0; i < n; ++i) pts.push_back(random_profile(rng));
        for (const auto linkage : {Linkage::ward, Linkage::average, Linkage::complete}) {
            const auto measure = linkage == Linkage::ward ? DistanceMeasure::euclid()
                                                          : DistanceMeasure::dtw(1);
            const auto m = distance_matrix(pts, measure);
            const auto mine = agglomerative_dendrogram(m, linkage);
            const auto ref = oracle::agglomerative_merges_naive(pts, measure, linkage);
            require(mine.size() == ref.size(), "merge count mismatch");
            for (std::size_t t = 0; t < mine.size(); ++t)
                require(mine[t].left == ref[t].left && mine[t].right == ref[t].right,
                        "merge order differs from the naive oracle");
        }
    }
}

} // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"PPS/PMS worked example (0.5 / 1.0, exact)", pps_worked_example},
        {"banded DTW equals exhaustive enumeration (len <= 6, radii 0-2)",
         dtw_oracle_equivalence},
        {"DTW band semantics (impulse shifts, radius 0 = euclidean)", dtw_band_semantics},
        {"synthetic 4-archetype recovery, ARI >= 0.9", synthetic_recovery},
        {"selection over the published table returns (kmeans, DTW, 14)", table_selection},
        {"entropy values and discretization bins", entropy_criteria},
        {"imputation conserves cumulative energy; long daytime gaps drop days",
         imputation_conservation},
        {"normalization: |sum| = 1 for non-zero days, all-zero passthrough",
         normalization_criteria},
        {"recommendation rules reproduce the published six rows", recommendation_table},
        {"50 meters x 3 years: 108-config grid < 30 min, bit-identical logs",
         pipeline_scale_and_determinism},
        {"metric properties: pps ordering, inertia, medoids, merge order",
         metric_property_suite},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        try {
            criteria[i].body();
            const double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            std::printf("PASS  %2zu. %s (%.2fs)\n", i + 1, criteria[i].name.c_str(), secs);
        } catch (const std::exception& e) {
            ++failures;
            std::printf("FAIL  %2zu. %s: %s\n", i + 1, criteria[i].name.c_str(), e.what());
        }
        std::fflush(stdout);
    }
    if (failures == 0)
        std::printf("all %zu acceptance criteria passed\n", criteria.size());
    else
        std::printf("%d of %zu acceptance criteria FAILED\n", failures, criteria.size());
    return failures;
}
