// drseg: smart-meter load-profile segmentation and DR recommendation toolkit.
//
// Pipeline: ingest -> preprocess -> (gridsearch -> select) -> cluster ->
// evaluate / assign / recommend / report. Exit codes: 0 success, 1 usage
// error, 2 data error.

#include <fstream>
#include <iostream>
#include <algorithm>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "drseg/config.hpp"
#include "drseg/csv.hpp"
#include "drseg/dr_engine.hpp"
#include "drseg/entropy.hpp"
#include "drseg/errors.hpp"
#include "drseg/experiments.hpp"
#include "drseg/ingest.hpp"
#include "drseg/metrics.hpp"
#include "drseg/preprocess.hpp"

namespace {

using namespace drseg;

Config g_config;

// flag > config file > built-in default
template <typename T>
T resolved(const CLI::Option* opt, T flag_value, const std::string& config_key, T fallback) {
    if (opt && opt->count() > 0) return flag_value;
    if constexpr (std::is_same_v<T, bool>)
        return g_config.get_bool(config_key, fallback);
    else if constexpr (std::is_integral_v<T>)
        return static_cast<T>(g_config.get_int(config_key, static_cast<int>(fallback)));
    else if constexpr (std::is_floating_point_v<T>)
        return static_cast<T>(g_config.get_double(config_key, fallback));
    else
        return g_config.get_string(config_key, fallback);
}

std::vector<HourWindow> parse_windows(const std::string& text) {
    std::vector<HourWindow> windows;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) {
        const auto dash = part.find('-');
        if (dash == std::string::npos)
            throw DataError("malformed hour window (want start-end): " + part);
        const auto lo = parse_double(part.substr(0, dash));
        const auto hi = parse_double(part.substr(dash + 1));
        if (!lo || !hi || *lo > *hi || *lo < 0 || *hi >= 24.5)
            throw DataError("malformed hour window: " + part);
        windows.push_back(HourWindow{*lo, *hi});
    }
    if (windows.empty()) throw DataError("empty hour window list");
    return windows;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::stringstream ss(text);
    std::string part;
    while (std::getline(ss, part, ',')) out.emplace_back(trim(part));
    return out;
}

struct LabeledProfiles {
    std::vector<ProfileKey> keys;
    std::vector<ProfileValues> values;
    std::vector<int> labels;
};

/// Stored label when the model saw the profile, predict() otherwise.
LabeledProfiles label_profiles(const ClusterModel& model,
                               const std::vector<ProfileKey>& model_keys,
                               const std::vector<DailyProfile>& profiles) {
    std::map<std::pair<std::string, DayStamp>, int> stored;
    for (std::size_t i = 0; i < model_keys.size(); ++i)
        stored[{model_keys[i].meter_id, model_keys[i].date}] = model.labels[i];
    LabeledProfiles out;
    out.keys.reserve(profiles.size());
    out.values.reserve(profiles.size());
    out.labels.reserve(profiles.size());
    for (const auto& p : profiles) {
        out.keys.push_back(ProfileKey{p.meter_id, p.date});
        out.values.push_back(p.values);
        const auto it = stored.find({p.meter_id, p.date});
        out.labels.push_back(it != stored.end() ? it->second : predict(model, p.values));
    }
    return out;
}

std::vector<DailyProfile> load_profiles_dir(const std::string& dir) {
    return load_profiles_csv(std::filesystem::path(dir) / "profiles.csv", true);
}

/// Characterize and recommend for every cluster that has assigned prosumers.
std::pair<std::vector<ClusterRecommendation>, std::vector<int>> build_recommendations(
    const ClusterModel& model, const std::vector<ProfileKey>& model_keys,
    const std::map<std::string, int>& assignments,
    const std::vector<MeterMetadata>& metadata, const DrRules& rules) {
    const auto dists = membership_distributions(model_keys, model.labels, model.k);
    std::map<std::string, double> entropy_by_meter;
    for (const auto& d : dists) entropy_by_meter[d.meter_id] = meter_entropy(d);
    for (const auto& [meter, cluster] : assignments) entropy_by_meter.emplace(meter, 0.0);
    const auto cluster_entropy = prosumer_cluster_entropy(assignments, entropy_by_meter);

    std::map<std::string, const MeterMetadata*> meta_by_id;
    for (const auto& m : metadata) meta_by_id[m.meter_id] = &m;

    std::vector<ClusterRecommendation> recs;
    std::vector<int> unpopulated;
    for (int c = 0; c < model.k; ++c) {
        std::vector<MeterMetadata> members;
        for (const auto& [meter, cluster] : assignments) {
            if (cluster != c) continue;
            const auto it = meta_by_id.find(meter);
            members.push_back(it != meta_by_id.end()
                                  ? *it->second
                                  : MeterMetadata{meter, {}, {}, LoadType::unknown});
        }
        if (members.empty()) {
            unpopulated.push_back(c);
            continue;
        }
        ClusterRecommendation rec;
        rec.entropy = cluster_entropy.at(c);
        rec.character = characterize_cluster(c, model.centroids[static_cast<std::size_t>(c)],
                                             members, rec.entropy, rules);
        rec.recommendation = recommend_schemes(rec.character);
        recs.push_back(std::move(rec));
    }
    return {recs, unpopulated};
}

int cmd_ingest(const std::string& measurements, const std::string& metadata_path,
               const std::string& out_dir, std::size_t min_days) {
    MeasurementLoadStats stats;
    auto series = load_measurements(measurements, &stats);
    std::vector<std::string> warnings;
    auto metadata = load_metadata(metadata_path, &warnings);
    for (const auto& w : stats.warnings) std::cerr << "warning: " << w << '\n';
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';

    const auto validation = validate_dataset(series, metadata, min_days);
    const std::set<std::string> accepted(validation.accepted.begin(), validation.accepted.end());
    std::vector<MeterSeries> kept_series;
    for (auto& s : series)
        if (accepted.count(s.meter_id)) kept_series.push_back(std::move(s));
    std::vector<MeterMetadata> kept_meta;
    for (auto& m : metadata)
        if (accepted.count(m.meter_id)) kept_meta.push_back(std::move(m));

    std::filesystem::create_directories(out_dir);
    write_measurements_csv(std::filesystem::path(out_dir) / "measurements.csv", kept_series);
    write_metadata_csv(std::filesystem::path(out_dir) / "metadata.csv", kept_meta);
    std::ofstream vj(std::filesystem::path(out_dir) / "validation.json");
    if (!vj) throw DataError("cannot write validation.json in " + out_dir);
    vj << to_json(validation) << '\n';

    std::cout << "rows: " << stats.rows_total << " (skipped " << stats.rows_skipped
              << ", duplicates " << stats.duplicates << ")\n"
              << "meters accepted: " << validation.accepted.size()
              << ", rejected: " << validation.rejected.size() << '\n';
    for (const auto& [id, reason] : validation.rejected)
        std::cout << "  rejected " << id << ": " << reason << '\n';
    return 0;
}

int cmd_preprocess(const std::string& in_dir, const std::string& out_dir,
                   const PreprocessConfig& cfg) {
    const auto series = load_measurements(std::filesystem::path(in_dir) / "measurements.csv");
    const auto metadata = load_metadata(std::filesystem::path(in_dir) / "metadata.csv");
    std::map<std::string, const MeterMetadata*> meta_by_id;
    for (const auto& m : metadata) meta_by_id[m.meter_id] = &m;

    std::vector<DailyProfile> raw, normalized;
    nlohmann::ordered_json per_meter;
    for (const auto& s : series) {
        const auto it = meta_by_id.find(s.meter_id);
        if (it == meta_by_id.end()) {
            std::cerr << "warning: skipping meter without metadata: " << s.meter_id << '\n';
            continue;
        }
        PreprocessStats stats;
        const MeterSeries cleaned = remove_outliers(s, *it->second, cfg, &stats);
        const MeterSeries imputed = impute_gaps(cleaned, cfg, &stats);
        auto day_profiles = extract_daily_profiles(imputed, &stats);
        for (const auto& p : day_profiles) {
            raw.push_back(p);
            normalized.push_back(normalize_profile(p));
        }
        per_meter[s.meter_id] = {{"outliers_removed", stats.outliers_removed},
                                 {"gaps_imputed", stats.gaps_imputed},
                                 {"hours_imputed", stats.hours_imputed},
                                 {"days_dropped", stats.days_dropped},
                                 {"days_kept", stats.days_kept},
                                 {"outlier_filter_skipped", stats.outlier_filter_skipped}};
        if (stats.outlier_filter_skipped)
            std::cerr << "warning: meter " << s.meter_id
                      << ": no power limits in metadata, outlier filter skipped\n";
    }
    if (normalized.empty()) throw DataError("preprocessing produced no complete days");

    std::filesystem::create_directories(out_dir);
    write_profiles_csv(std::filesystem::path(out_dir) / "profiles.csv", normalized);
    write_profiles_csv(std::filesystem::path(out_dir) / "raw_profiles.csv", raw);
    std::ofstream sj(std::filesystem::path(out_dir) / "preprocess_summary.json");
    if (!sj) throw DataError("cannot write preprocess_summary.json in " + out_dir);
    sj << per_meter.dump(2) << '\n';
    std::cout << "profiles: " << normalized.size() << " complete days across "
              << per_meter.size() << " meters\n";
    return 0;
}

int cmd_cluster(const std::string& profiles_dir, const std::string& algorithm,
                const std::string& distance, int k, int radius, std::uint64_t seed,
                const std::string& linkage, int n_init, int max_iter,
                const std::string& model_out) {
    const auto profiles = load_profiles_dir(profiles_dir);
    std::vector<ProfileKey> keys;
    std::vector<ProfileValues> values;
    keys.reserve(profiles.size());
    values.reserve(profiles.size());
    for (const auto& p : profiles) {
        keys.push_back(ProfileKey{p.meter_id, p.date});
        values.push_back(p.values);
    }
    DistanceMeasure measure;
    measure.kind = distance_kind_from_string(distance);
    measure.sakoe_chiba_radius = radius;
    const ClusterAlgorithm algo = algorithm_from_string(algorithm);

    if (algo != ClusterAlgorithm::kmeans) {
        // pairwise matrices grow quadratically; refuse absurd allocations
        const double bytes = static_cast<double>(values.size()) *
                             static_cast<double>(values.size()) * sizeof(double);
        if (bytes > 2.0e9)
            throw DataError(
                "profile count too large for a pairwise distance matrix (" +
                std::to_string(values.size()) +
                " profiles); use kmeans or reduce the dataset");
    }

    ClusterModel model;
    switch (algo) {
        case ClusterAlgorithm::kmeans: {
            KMeansOptions opt;
            opt.n_init = n_init;
            opt.max_iter = max_iter;
            model = kmeans_fit(values, k, measure, seed, opt);
            break;
        }
        case ClusterAlgorithm::kmedoids: {
            const auto matrix = distance_matrix(values, measure);
            model = kmedoids_fit(values, k, measure, seed, matrix, max_iter);
            break;
        }
        case ClusterAlgorithm::agglomerative: {
            const auto matrix = distance_matrix(values, measure);
            model = agglomerative_fit(values, k, measure, linkage_from_string(linkage), matrix);
            break;
        }
    }
    save_model(model_out, model, keys);
    std::cout << "fitted " << algorithm << "/" << distance << " k=" << k
              << " on " << values.size() << " profiles; inertia " << format_double(model.inertia)
              << "\nmodel written to " << model_out << '\n';
    return 0;
}

int cmd_gridsearch(const std::string& profiles_dir, const GridSearchOptions& options) {
    const auto profiles = load_profiles_dir(profiles_dir);
    const auto log = grid_search(profiles, options);
    std::cout << "grid search complete: " << log.rows.size() << " new rows in "
              << options.log_path->string() << '\n';
    return 0;
}

int cmd_select(const std::string& log_path, int min_k, double top_fraction) {
    const auto log = load_experiment_log(log_path);
    SelectionCriteria criteria;
    criteria.min_k = min_k;
    criteria.top_fraction = top_fraction;
    std::string warning;
    const int run_id = select_best(log, criteria, &warning);
    if (!warning.empty()) std::cerr << "warning: " << warning << '\n';
    for (const auto& row : log.rows) {
        if (row.run_id != run_id) continue;
        nlohmann::ordered_json j;
        j["run_id"] = row.run_id;
        j["algorithm"] = to_string(row.algorithm);
        j["distance"] = to_string(row.measure.kind);
        j["radius"] = row.measure.sakoe_chiba_radius;
        j["k"] = row.k;
        j["seed"] = row.seed;
        j["pps_relaxed"] = row.metrics.pps_relaxed;
        j["silhouette_dtw"] = row.metrics.silhouette_dtw;
        std::cout << j.dump(2) << '\n';
        return 0;
    }
    return 0;
}

int cmd_evaluate(const std::string& model_path, const std::string& profiles_dir,
                 std::size_t max_profiles, std::uint64_t seed_override, bool seed_given) {
    std::vector<ProfileKey> model_keys;
    const ClusterModel model = load_model(model_path, &model_keys);
    auto profiles = load_profiles_dir(profiles_dir);
    auto labeled = label_profiles(model, model_keys, profiles);

    // seeded subsample keeps the pairwise matrices affordable
    const std::uint64_t seed = seed_given ? seed_override : model.seed;
    if (labeled.values.size() > max_profiles) {
        std::mt19937_64 rng(seed);
        std::vector<std::size_t> idx(labeled.values.size());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        for (std::size_t i = 0; i < max_profiles; ++i) {
            const std::size_t j =
                i + static_cast<std::size_t>(
                        (static_cast<unsigned __int128>(rng()) * (idx.size() - i)) >> 64);
            std::swap(idx[i], idx[j]);
        }
        idx.resize(max_profiles);
        std::sort(idx.begin(), idx.end());
        LabeledProfiles sub;
        for (const std::size_t i : idx) {
            sub.keys.push_back(labeled.keys[i]);
            sub.values.push_back(labeled.values[i]);
            sub.labels.push_back(labeled.labels[i]);
        }
        labeled = std::move(sub);
        std::cerr << "note: metrics computed on a seeded subsample of " << max_profiles
                  << " profiles\n";
    }

    ClusterModel scored = model;
    scored.labels = labeled.labels;
    const int dtw_radius =
        model.measure.kind == DistanceKind::dtw_constrained ? model.measure.sakoe_chiba_radius : 1;
    const auto euclid_m = distance_matrix(labeled.values, DistanceMeasure::euclid());
    const auto dtw_m = distance_matrix(labeled.values, DistanceMeasure::dtw(dtw_radius));
    const auto report = evaluate_model(scored, labeled.values, euclid_m, dtw_m);
    std::cout << to_json(report) << '\n';
    return 0;
}

int cmd_assign(const std::string& model_path, const std::string& profiles_dir,
               const std::string& out_path) {
    std::vector<ProfileKey> model_keys;
    const ClusterModel model = load_model(model_path, &model_keys);
    const auto profiles = load_profiles_dir(profiles_dir);
    const auto labeled = label_profiles(model, model_keys, profiles);
    const auto dists = membership_distributions(labeled.keys, labeled.labels, model.k);
    const auto tie_break = make_tie_break(model, labeled.keys, labeled.values);
    const auto assignments = assign_prosumers(dists, &tie_break);
    write_assignments_csv(out_path, assignments);
    std::cout << "assigned " << assignments.size() << " prosumers; written to " << out_path
              << '\n';
    return 0;
}

int cmd_recommend(const std::string& model_path, const std::string& assignments_path,
                  const std::string& metadata_path, const std::string& out_path,
                  const DrRules& rules) {
    std::vector<ProfileKey> model_keys;
    const ClusterModel model = load_model(model_path, &model_keys);
    if (model_keys.empty())
        throw DataError("model has no profile keys; refit with the cluster subcommand");
    const auto assignments = load_assignments_csv(assignments_path);
    const auto metadata = load_metadata(metadata_path);
    const auto [recs, unpopulated] =
        build_recommendations(model, model_keys, assignments, metadata, rules);
    std::ofstream out(out_path);
    if (!out) throw DataError("cannot write " + out_path);
    out << recommendations_to_json(recs, unpopulated) << '\n';
    std::size_t eligible = 0;
    for (const auto& r : recs) eligible += r.recommendation.schemes.empty() ? 0 : 1;
    std::cout << "recommendations for " << recs.size() << " populated clusters (" << eligible
              << " eligible for DR); written to " << out_path << '\n';
    return 0;
}

int cmd_report(const std::string& model_path, const std::string& out_dir,
               const std::string& profiles_dir, const std::string& metadata_path,
               const DrRules& rules) {
    std::vector<ProfileKey> model_keys;
    const ClusterModel model = load_model(model_path, &model_keys);
    if (model_keys.empty())
        throw DataError("model has no profile keys; refit with the cluster subcommand");

    ReportInputs inputs;
    inputs.model = &model;
    inputs.keys = model_keys;

    std::vector<DailyProfile> profiles;
    if (!profiles_dir.empty()) {
        profiles = load_profiles_dir(profiles_dir);
        inputs.profiles = profiles;
    }
    std::vector<MeterMetadata> metadata;
    if (!metadata_path.empty()) {
        metadata = load_metadata(metadata_path);
        inputs.metadata = metadata;
    }

    // assignments and recommendations are derivable from the model itself
    const auto dists = membership_distributions(model_keys, model.labels, model.k);
    AssignmentTieBreak tie_break;
    const AssignmentTieBreak* tb = nullptr;
    if (!profiles.empty()) {
        const auto labeled = label_profiles(model, model_keys, profiles);
        tie_break = make_tie_break(model, labeled.keys, labeled.values);
        tb = &tie_break;
    }
    inputs.assignments = assign_prosumers(dists, tb);
    if (!metadata.empty())
        inputs.recommendations =
            build_recommendations(model, model_keys, inputs.assignments, metadata, rules).first;

    const auto files = emit_report(inputs, out_dir);
    std::cout << "report bundle: " << files.size() << " files in " << out_dir << '\n';
    return 0;
}

int run(int argc, char** argv) {
    CLI::App app{"Daily load-profile segmentation and demand-response recommendation toolkit"};
    app.require_subcommand(1);
    std::string config_path;
    app.add_option("--config", config_path, "Key = value configuration file");

    auto* ingest = app.add_subcommand("ingest", "Parse and validate measurement + metadata CSVs");
    std::string in_measurements, in_metadata, ingest_out;
    std::size_t min_days = 30;
    ingest->add_option("--measurements", in_measurements, "Measurement CSV")->required();
    ingest->add_option("--metadata", in_metadata, "Metadata CSV")->required();
    ingest->add_option("--out", ingest_out, "Output directory")->required();
    auto* opt_min_days = ingest->add_option("--min-days", min_days, "Complete-day threshold");

    auto* preprocess = app.add_subcommand("preprocess", "Clean, impute and normalize profiles");
    std::string pre_in, pre_out;
    int max_gap_hours = 2;
    std::string night_window = "0-6";
    bool no_outlier_filter = false;
    preprocess->add_option("--in", pre_in, "Directory written by ingest")->required();
    preprocess->add_option("--out", pre_out, "Output directory")->required();
    auto* opt_gap =
        preprocess->add_option("--max-gap-hours", max_gap_hours, "Longest imputable daytime gap");
    auto* opt_night = preprocess->add_option("--night-window", night_window,
                                             "Night window start-end, any gap length imputable");
    auto* opt_no_outlier =
        preprocess->add_flag("--no-outlier-filter", no_outlier_filter, "Skip outlier removal");

    std::string profiles_dir, algorithm = "kmeans", distance = "dtw", linkage = "ward";
    int k = 14, radius = 1, n_init = 5, max_iter = 100;
    std::uint64_t seed = 0;

    auto* cluster = app.add_subcommand("cluster", "Fit one clustering model");
    std::string model_out;
    cluster->add_option("--profiles", profiles_dir, "Directory written by preprocess")->required();
    auto* opt_algo =
        cluster->add_option("--algorithm", algorithm, "kmeans|kmedoids|agglomerative");
    auto* opt_dist = cluster->add_option("--distance", distance, "euclidean|dtw");
    auto* opt_k = cluster->add_option("--k", k, "Number of clusters");
    auto* opt_seed = cluster->add_option("--seed", seed, "Random seed");
    auto* opt_radius = cluster->add_option("--radius", radius, "Sakoe-Chiba radius");
    auto* opt_linkage = cluster->add_option("--linkage", linkage, "ward|average|complete");
    auto* opt_n_init = cluster->add_option("--n-init", n_init, "k-means restarts");
    auto* opt_max_iter = cluster->add_option("--max-iter", max_iter, "Iteration cap");
    cluster->add_option("--out", model_out, "Model JSON path")->required();

    auto* grid = app.add_subcommand("gridsearch", "Fit and evaluate the full configuration grid");
    int k_min = 3, k_max = 20;
    std::string log_path, algorithms_csv = "kmeans,kmedoids,agglomerative",
                          distances_csv = "euclidean,dtw";
    std::size_t max_profiles = 2000;
    bool quiet = false;
    grid->add_option("--profiles", profiles_dir, "Directory written by preprocess")->required();
    grid->add_option("--k-min", k_min, "Smallest cluster count");
    grid->add_option("--k-max", k_max, "Largest cluster count");
    auto* gopt_seed = grid->add_option("--seed", seed, "Random seed");
    grid->add_option("--log", log_path, "Experiment log CSV (appended, resumable)")->required();
    grid->add_option("--algorithms", algorithms_csv, "Comma list of algorithms");
    grid->add_option("--distances", distances_csv, "Comma list of distance measures");
    auto* gopt_radius = grid->add_option("--radius", radius, "Sakoe-Chiba radius");
    auto* gopt_max_profiles =
        grid->add_option("--max-profiles", max_profiles, "Seeded subsample cap for fitting");
    grid->add_flag("--quiet", quiet, "Suppress per-row progress output");

    auto* select = app.add_subcommand("select", "Pick the best run from an experiment log");
    std::string select_log;
    int min_k = 10;
    double top_fraction = 0.15;
    select->add_option("--log", select_log, "Experiment log CSV")->required();
    select->add_option("--min-k", min_k, "Smallest acceptable cluster count");
    select->add_option("--top-fraction", top_fraction, "Top metric-range fraction");

    auto* evaluate = app.add_subcommand("evaluate", "Compute all metrics for a saved model");
    std::string model_path;
    evaluate->add_option("--model", model_path, "Model JSON")->required();
    evaluate->add_option("--profiles", profiles_dir, "Directory written by preprocess")
        ->required();
    auto* eopt_max_profiles =
        evaluate->add_option("--max-profiles", max_profiles, "Seeded subsample cap");
    auto* eopt_seed = evaluate->add_option("--seed", seed, "Subsample seed");

    auto* assign = app.add_subcommand("assign", "Assign each prosumer to its majority cluster");
    std::string assign_out;
    assign->add_option("--model", model_path, "Model JSON")->required();
    assign->add_option("--profiles", profiles_dir, "Directory written by preprocess")->required();
    assign->add_option("--out", assign_out, "Assignment CSV path")->required();

    auto* recommend = app.add_subcommand("recommend", "Emit DR scheme recommendations");
    std::string assignments_path, metadata_path, recommend_out;
    std::string rpf_windows = "8-10,15-17", peak_window = "17-19.5";
    double working_ratio = 1.5, dominant_threshold = 0.6;
    recommend->add_option("--model", model_path, "Model JSON")->required();
    recommend->add_option("--assignments", assignments_path, "Assignment CSV")->required();
    recommend->add_option("--metadata", metadata_path, "Metadata CSV")->required();
    recommend->add_option("--out", recommend_out, "recommendations.json path")->required();
    auto* ropt_rpf = recommend->add_option("--rpf-windows", rpf_windows,
                                           "Shiftable peak windows, e.g. 8-10,15-17");
    auto* ropt_peak = recommend->add_option("--peak-window", peak_window, "Demand peak window");
    auto* ropt_ratio =
        recommend->add_option("--working-hours-ratio", working_ratio, "Sustained-load multiplier");
    auto* ropt_dom = recommend->add_option("--dominant-threshold", dominant_threshold,
                                           "Dominant load-type share");

    auto* report = app.add_subcommand("report", "Write the full report bundle for a model");
    std::string report_out, report_profiles_dir, report_metadata_path;
    report->add_option("--model", model_path, "Model JSON")->required();
    report->add_option("--out", report_out, "Output directory")->required();
    report->add_option("--profiles", report_profiles_dir,
                       "Optional profiles for quantile curves and tie-breaks");
    report->add_option("--metadata", report_metadata_path,
                       "Optional metadata for load types and recommendations");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1; // usage errors are exit code 1, --help is 0
    }
    if (!config_path.empty()) g_config = Config::from_file(config_path);

    const auto dr_rules = [&] {
        DrRules rules;
        rules.rpf_windows = parse_windows(
            resolved<std::string>(ropt_rpf, rpf_windows, "dr.rpf_windows", "8-10,15-17"));
        const auto peak = parse_windows(
            resolved<std::string>(ropt_peak, peak_window, "dr.peak_window", "17-19.5"));
        if (peak.size() != 1) throw DataError("peak window must be a single start-end range");
        rules.peak_window = peak[0];
        rules.working_hours_ratio =
            resolved(ropt_ratio, working_ratio, "dr.working_hours_ratio", 1.5);
        rules.dominant_type_threshold =
            resolved(ropt_dom, dominant_threshold, "dr.dominant_type_threshold", 0.6);
        return rules;
    };

    if (*ingest)
        return cmd_ingest(in_measurements, in_metadata, ingest_out,
                          resolved<std::size_t>(opt_min_days, min_days, "ingest.min_days", 30));

    if (*preprocess) {
        PreprocessConfig cfg;
        cfg.outlier_enabled = opt_no_outlier->count() > 0
                                  ? !no_outlier_filter
                                  : g_config.get_bool("outlier.enabled", true);
        cfg.max_gap_hours = resolved(opt_gap, max_gap_hours, "impute.max_gap_hours", 2);
        const auto night = parse_windows(
            resolved<std::string>(opt_night, night_window, "impute.night_window", "0-6"));
        if (night.size() != 1) throw DataError("night window must be a single start-end range");
        cfg.night_start_hour = static_cast<int>(night[0].start);
        cfg.night_end_hour = static_cast<int>(night[0].end);
        return cmd_preprocess(pre_in, pre_out, cfg);
    }

    if (*cluster)
        return cmd_cluster(
            profiles_dir,
            resolved<std::string>(opt_algo, algorithm, "cluster.algorithm", "kmeans"),
            resolved<std::string>(opt_dist, distance, "distance.kind", "dtw"),
            resolved(opt_k, k, "cluster.k", 14), resolved(opt_radius, radius, "distance.radius", 1),
            resolved<std::uint64_t>(opt_seed, seed, "cluster.seed", 0),
            resolved<std::string>(opt_linkage, linkage, "cluster.linkage", "ward"),
            resolved(opt_n_init, n_init, "cluster.n_init", 5),
            resolved(opt_max_iter, max_iter, "cluster.max_iter", 100), model_out);

    if (*grid) {
        GridSearchOptions options;
        options.algorithms.clear();
        for (const auto& name : split_list(algorithms_csv))
            options.algorithms.push_back(algorithm_from_string(name));
        options.measures.clear();
        const int r = resolved(gopt_radius, radius, "distance.radius", 1);
        for (const auto& name : split_list(distances_csv)) {
            DistanceMeasure m;
            m.kind = distance_kind_from_string(name);
            m.sakoe_chiba_radius = m.kind == DistanceKind::dtw_constrained ? r : 0;
            options.measures.push_back(m);
        }
        options.k_min = k_min;
        options.k_max = k_max;
        options.seed = resolved<std::uint64_t>(gopt_seed, seed, "cluster.seed", 0);
        options.max_profiles =
            resolved<std::size_t>(gopt_max_profiles, max_profiles, "grid.max_profiles", 2000);
        options.n_init = g_config.get_int("cluster.n_init", 5);
        options.max_iter = g_config.get_int("cluster.max_iter", 100);
        options.linkage = linkage_from_string(g_config.get_string("cluster.linkage", "ward"));
        options.log_path = log_path;
        if (!quiet) options.progress = &std::cerr;
        return cmd_gridsearch(profiles_dir, options);
    }

    if (*select) return cmd_select(select_log, min_k, top_fraction);
    if (*evaluate)
        return cmd_evaluate(model_path, profiles_dir,
                            resolved<std::size_t>(eopt_max_profiles, max_profiles,
                                                  "grid.max_profiles", 2000),
                            seed, eopt_seed->count() > 0);
    if (*assign) return cmd_assign(model_path, profiles_dir, assign_out);
    if (*recommend)
        return cmd_recommend(model_path, assignments_path, metadata_path, recommend_out,
                             dr_rules());
    if (*report)
        return cmd_report(model_path, report_out, report_profiles_dir, report_metadata_path,
                          dr_rules());
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
}
