#include "drseg/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "drseg/csv.hpp"
#include "drseg/entropy.hpp"
#include "drseg/errors.hpp"

namespace drseg {

const char* const kExperimentLogHeader =
    "run_id,algorithm,distance,radius,k,seed,pms,pps,pps_relaxed,silhouette,"
    "silhouette_dtw,davies_bouldin,n_profiles,wall_seconds";

std::string format_log_row(const ExperimentRow& r) {
    std::ostringstream out;
    out << r.run_id << ',' << to_string(r.algorithm) << ',' << to_string(r.measure.kind) << ','
        << (r.measure.kind == DistanceKind::dtw_constrained ? r.measure.sakoe_chiba_radius : 0)
        << ',' << r.k << ',' << r.seed << ',' << format_double(r.metrics.pms) << ','
        << format_double(r.metrics.pps) << ',' << format_double(r.metrics.pps_relaxed) << ','
        << format_double(r.metrics.silhouette) << ',' << format_double(r.metrics.silhouette_dtw)
        << ',' << format_double(r.metrics.davies_bouldin) << ',' << r.n_profiles << ','
        << format_double(r.wall_seconds);
    return out.str();
}

ExperimentLog load_experiment_log(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open experiment log: " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line) != kExperimentLogHeader)
        throw DataError("malformed experiment log header in " + path.string());
    ExperimentLog log;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 14)
            throw DataError("experiment log line " + std::to_string(lineno) +
                            ": expected 14 fields");
        const auto num = [&](const std::string& s) {
            if (s == "inf") return std::numeric_limits<double>::infinity();
            const auto v = parse_double(s);
            if (!v)
                throw DataError("experiment log line " + std::to_string(lineno) +
                                ": bad number: " + s);
            return *v;
        };
        ExperimentRow r;
        r.run_id = static_cast<int>(num(f[0]));
        r.algorithm = algorithm_from_string(f[1]);
        r.measure.kind = distance_kind_from_string(f[2]);
        r.measure.sakoe_chiba_radius = static_cast<int>(num(f[3]));
        r.k = static_cast<int>(num(f[4]));
        {
            // 64-bit seeds do not survive a double round-trip
            char* end = nullptr;
            r.seed = std::strtoull(f[5].c_str(), &end, 10);
            if (end != f[5].c_str() + f[5].size())
                throw DataError("experiment log line " + std::to_string(lineno) +
                                ": bad seed: " + f[5]);
        }
        r.metrics.pms = num(f[6]);
        r.metrics.pps = num(f[7]);
        r.metrics.pps_relaxed = num(f[8]);
        r.metrics.silhouette = num(f[9]);
        r.metrics.silhouette_dtw = num(f[10]);
        r.metrics.davies_bouldin = num(f[11]);
        r.n_profiles = static_cast<std::size_t>(num(f[12]));
        r.wall_seconds = num(f[13]);
        log.rows.push_back(r);
    }
    return log;
}

namespace {

std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Seeded sample of `cap` indices without replacement, returned sorted.
std::vector<std::size_t> subsample_indices(std::size_t n, std::size_t cap, std::uint64_t seed) {
    std::vector<std::size_t> idx(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    if (n <= cap) return idx;
    std::mt19937_64 rng(mix_seed(seed));
    for (std::size_t i = 0; i < cap; ++i) {
        const std::size_t j =
            i + static_cast<std::size_t>(
                    (static_cast<unsigned __int128>(rng()) * (n - i)) >> 64);
        std::swap(idx[i], idx[j]);
    }
    idx.resize(cap);
    std::sort(idx.begin(), idx.end());
    return idx;
}

} // namespace

ExperimentLog grid_search(std::span<const DailyProfile> profiles,
                          const GridSearchOptions& options) {
    if (options.k_min < 2 || options.k_max < options.k_min)
        throw std::invalid_argument("grid_search: need 2 <= k_min <= k_max");
    if (profiles.size() <= static_cast<std::size_t>(options.k_max))
        throw DataError("grid_search: not enough profiles for k_max=" +
                        std::to_string(options.k_max));

    const auto picked =
        subsample_indices(profiles.size(), options.max_profiles, options.seed);
    std::vector<ProfileValues> values;
    values.reserve(picked.size());
    for (const std::size_t i : picked) values.push_back(profiles[i].values);

    // one pairwise matrix per measure; silhouette and silhouette-DTW reuse them
    int dtw_radius = 1;
    for (const auto& m : options.measures)
        if (m.kind == DistanceKind::dtw_constrained) dtw_radius = m.sakoe_chiba_radius;
    const DistanceMatrix euclid_m = distance_matrix(values, DistanceMeasure::euclid());
    const DistanceMatrix dtw_m = distance_matrix(values, DistanceMeasure::dtw(dtw_radius));
    if (options.matrix_builds) *options.matrix_builds += 2;
    const auto matrix_for = [&](const DistanceMeasure& m) -> const DistanceMatrix& {
        return m.kind == DistanceKind::euclidean ? euclid_m : dtw_m;
    };

    // resume support: skip configurations already present in the log file
    std::set<std::tuple<std::string, std::string, int, int>> done;
    bool write_header = true;
    if (options.log_path && std::filesystem::exists(*options.log_path) &&
        std::filesystem::file_size(*options.log_path) > 0) {
        for (const auto& r : load_experiment_log(*options.log_path).rows)
            done.insert({to_string(r.algorithm), to_string(r.measure.kind),
                         r.measure.sakoe_chiba_radius, r.k});
        write_header = false;
    }
    std::ofstream log_file;
    if (options.log_path) {
        log_file.open(*options.log_path, std::ios::app);
        if (!log_file)
            throw DataError("cannot open experiment log for append: " +
                            options.log_path->string());
        if (write_header) log_file << kExperimentLogHeader << '\n' << std::flush;
    }

    // merge sequences are k-independent, so compute them once per measure
    std::map<std::pair<std::string, int>, std::vector<MergeStep>> dendrograms;

    ExperimentLog log;
    int run_id = 0;
    for (const auto& measure : options.measures) {
        for (const auto algorithm : options.algorithms) {
            for (int k = options.k_min; k <= options.k_max; ++k) {
                ++run_id;
                const auto key = std::make_tuple(
                    std::string(to_string(algorithm)), std::string(to_string(measure.kind)),
                    measure.kind == DistanceKind::dtw_constrained ? measure.sakoe_chiba_radius
                                                                  : 0,
                    k);
                if (done.count(key)) continue;

                ExperimentRow row;
                row.run_id = run_id;
                row.algorithm = algorithm;
                row.measure = measure;
                row.k = k;
                row.seed = mix_seed(options.seed + static_cast<std::uint64_t>(run_id));
                row.n_profiles = values.size();

                const auto t0 = std::chrono::steady_clock::now();
                ClusterModel model;
                switch (algorithm) {
                    case ClusterAlgorithm::kmeans: {
                        KMeansOptions kopt;
                        kopt.max_iter = options.max_iter;
                        kopt.n_init = options.n_init;
                        kopt.dba_iters = options.dba_iters;
                        model = kmeans_fit(values, k, measure, row.seed, kopt);
                        break;
                    }
                    case ClusterAlgorithm::kmedoids:
                        model = kmedoids_fit(values, k, measure, row.seed, matrix_for(measure),
                                             options.max_iter);
                        break;
                    case ClusterAlgorithm::agglomerative: {
                        auto& merges =
                            dendrograms[{std::string(to_string(measure.kind)),
                                         measure.sakoe_chiba_radius}];
                        if (merges.empty())
                            merges = agglomerative_dendrogram(matrix_for(measure),
                                                              options.linkage);
                        model = agglomerative_cut(values, k, measure, options.linkage, merges);
                        break;
                    }
                }
                row.metrics = evaluate_model(model, values, euclid_m, dtw_m,
                                             options.prominence_threshold);
                row.wall_seconds =
                    std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                        .count();
                log.rows.push_back(row);
                if (options.log_path) log_file << format_log_row(row) << '\n' << std::flush;
                if (options.progress)
                    *options.progress << format_log_row(row) << '\n' << std::flush;
            }
        }
    }
    return log;
}

int select_best(const ExperimentLog& log, const SelectionCriteria& criteria,
                std::string* warning) {
    if (log.rows.empty()) throw DataError("select_best: empty experiment log");
    if (criteria.min_k < 2) throw std::invalid_argument("select_best: min_k must be >= 2");
    if (!(criteria.top_fraction > 0.0) || criteria.top_fraction > 1.0)
        throw std::invalid_argument("select_best: top_fraction must be in (0, 1]");

    const auto& rows = log.rows;
    std::vector<std::size_t> candidates;
    double pps_lo = rows[0].metrics.pps_relaxed, pps_hi = pps_lo;
    double sil_lo = rows[0].metrics.silhouette_dtw, sil_hi = sil_lo;
    for (const auto& r : rows) {
        pps_lo = std::min(pps_lo, r.metrics.pps_relaxed);
        pps_hi = std::max(pps_hi, r.metrics.pps_relaxed);
        sil_lo = std::min(sil_lo, r.metrics.silhouette_dtw);
        sil_hi = std::max(sil_hi, r.metrics.silhouette_dtw);
    }
    const double pps_cut = pps_hi - criteria.top_fraction * (pps_hi - pps_lo);
    const double sil_cut = sil_hi - criteria.top_fraction * (sil_hi - sil_lo);

    for (std::size_t i = 0; i < rows.size(); ++i) {
        bool dominated = false;
        for (std::size_t j = 0; j < rows.size() && !dominated; ++j) {
            if (i == j) continue;
            dominated = rows[j].metrics.pps_relaxed >= rows[i].metrics.pps_relaxed &&
                        rows[j].metrics.silhouette_dtw >= rows[i].metrics.silhouette_dtw &&
                        (rows[j].metrics.pps_relaxed > rows[i].metrics.pps_relaxed ||
                         rows[j].metrics.silhouette_dtw > rows[i].metrics.silhouette_dtw);
        }
        const bool in_top_box = rows[i].metrics.pps_relaxed >= pps_cut &&
                                rows[i].metrics.silhouette_dtw >= sil_cut;
        if (!dominated || in_top_box) candidates.push_back(i);
    }

    std::vector<std::size_t> eligible;
    for (const std::size_t i : candidates)
        if (rows[i].k >= criteria.min_k) eligible.push_back(i);
    if (eligible.empty()) {
        if (warning)
            *warning = "no candidate reaches min_k=" + std::to_string(criteria.min_k) +
                       "; falling back to all candidates";
        eligible = candidates;
    }

    std::size_t best = eligible[0];
    for (const std::size_t i : eligible) {
        const auto& a = rows[i].metrics;
        const auto& b = rows[best].metrics;
        if (a.pps_relaxed > b.pps_relaxed ||
            (a.pps_relaxed == b.pps_relaxed &&
             (a.silhouette_dtw > b.silhouette_dtw ||
              (a.silhouette_dtw == b.silhouette_dtw &&
               (rows[i].k < rows[best].k ||
                (rows[i].k == rows[best].k && rows[i].run_id < rows[best].run_id))))))
            best = i;
    }
    return rows[best].run_id;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write report file: " + path.string());
    return out;
}

} // namespace

std::vector<std::filesystem::path> emit_report(const ReportInputs& inputs,
                                               const std::filesystem::path& out_dir) {
    if (!inputs.model) throw std::invalid_argument("emit_report: model is required");
    const ClusterModel& model = *inputs.model;
    if (inputs.keys.size() != model.labels.size())
        throw std::invalid_argument("emit_report: keys must align with model labels");
    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec && !std::filesystem::is_directory(out_dir))
        throw DataError("cannot create report directory: " + out_dir.string());

    std::vector<std::filesystem::path> written;
    const auto k = static_cast<std::size_t>(model.k);

    // centroid curves
    {
        const auto path = out_dir / "centroids.csv";
        auto out = open_out(path);
        out << "cluster";
        for (int h = 0; h < 24; ++h) out << ",h" << (h < 10 ? "0" : "") << h;
        out << '\n';
        for (std::size_t c = 0; c < k; ++c) {
            out << c;
            for (const double v : model.centroids[c]) out << ',' << format_double(v);
            out << '\n';
        }
        written.push_back(path);
    }

    // sample shares per cluster
    std::vector<std::size_t> cluster_profiles(k, 0);
    for (const int l : model.labels) cluster_profiles[static_cast<std::size_t>(l)]++;
    {
        const auto path = out_dir / "cluster_shares.csv";
        auto out = open_out(path);
        out << "cluster,profiles,share\n";
        for (std::size_t c = 0; c < k; ++c)
            out << c << ',' << cluster_profiles[c] << ','
                << format_double(static_cast<double>(cluster_profiles[c]) /
                                 static_cast<double>(model.labels.size()))
                << '\n';
        written.push_back(path);
    }

    // membership matrix: meter x cluster profile counts
    const auto dists = membership_distributions(inputs.keys, model.labels, model.k);
    {
        const auto path = out_dir / "membership_matrix.csv";
        auto out = open_out(path);
        out << "meter_id";
        for (std::size_t c = 0; c < k; ++c) out << ",c" << c;
        out << '\n';
        for (const auto& d : dists) {
            out << d.meter_id;
            for (const std::size_t count : d.counts) out << ',' << count;
            out << '\n';
        }
        written.push_back(path);
    }

    // entropy tables
    std::vector<double> entropies(dists.size());
    std::map<std::string, double> entropy_by_meter;
    for (std::size_t i = 0; i < dists.size(); ++i) {
        entropies[i] = meter_entropy(dists[i]);
        entropy_by_meter[dists[i].meter_id] = entropies[i];
    }
    {
        const auto path = out_dir / "entropy_per_meter.csv";
        auto out = open_out(path);
        out << "meter_id,entropy,label\n";
        for (std::size_t i = 0; i < dists.size(); ++i)
            out << dists[i].meter_id << ',' << format_double(entropies[i]) << ','
                << to_string(discretize_entropy(entropies[i])) << '\n';
        written.push_back(path);
    }

    std::map<std::string, int> assignments = inputs.assignments;
    if (assignments.empty()) {
        std::vector<ProfileValues> values;
        const AssignmentTieBreak* tb = nullptr;
        AssignmentTieBreak tie_break;
        if (!inputs.profiles.empty()) {
            // match profile values to keys for distance-based tie-breaking
            std::map<std::pair<std::string, DayStamp>, const DailyProfile*> by_key;
            for (const auto& p : inputs.profiles) by_key[{p.meter_id, p.date}] = &p;
            values.reserve(inputs.keys.size());
            bool complete = true;
            for (const auto& key : inputs.keys) {
                const auto it = by_key.find({key.meter_id, key.date});
                if (it == by_key.end()) {
                    complete = false;
                    break;
                }
                values.push_back(it->second->values);
            }
            if (complete) {
                tie_break = make_tie_break(model, inputs.keys, values);
                tb = &tie_break;
            }
        }
        assignments = assign_prosumers(dists, tb);
    }
    {
        const auto path = out_dir / "prosumer_assignments.csv";
        auto out = open_out(path);
        out << "meter_id,cluster\n";
        for (const auto& [meter, cluster] : assignments) out << meter << ',' << cluster << '\n';
        written.push_back(path);
    }

    const auto cluster_entropy = profile_cluster_entropy(dists, entropies);
    const auto prosumer_entropy = prosumer_cluster_entropy(assignments, entropy_by_meter);
    {
        const auto path = out_dir / "entropy_per_cluster.csv";
        auto out = open_out(path);
        out << "cluster,profile_cluster_entropy,prosumer_cluster_entropy\n";
        for (std::size_t c = 0; c < k; ++c) {
            out << c << ',';
            if (const auto it = cluster_entropy.find(static_cast<int>(c));
                it != cluster_entropy.end())
                out << format_double(it->second);
            out << ',';
            if (const auto it = prosumer_entropy.find(static_cast<int>(c));
                it != prosumer_entropy.end())
                out << format_double(it->second);
            out << '\n';
        }
        written.push_back(path);
    }

    // load-type distribution of profiles per cluster (needs metadata)
    if (!inputs.metadata.empty()) {
        std::map<std::string, LoadType> type_by_meter;
        for (const auto& m : inputs.metadata) type_by_meter[m.meter_id] = m.load_type;
        constexpr std::size_t kTypes = 8;
        std::vector<std::array<std::size_t, kTypes>> counts(k, std::array<std::size_t, kTypes>{});
        for (std::size_t i = 0; i < inputs.keys.size(); ++i) {
            const auto it = type_by_meter.find(inputs.keys[i].meter_id);
            const LoadType t = it != type_by_meter.end() ? it->second : LoadType::unknown;
            counts[static_cast<std::size_t>(model.labels[i])][static_cast<std::size_t>(t)]++;
        }
        const auto path = out_dir / "load_type_distribution.csv";
        auto out = open_out(path);
        out << "cluster";
        for (std::size_t t = 0; t < kTypes; ++t)
            out << ',' << to_string(static_cast<LoadType>(t));
        out << '\n';
        for (std::size_t c = 0; c < k; ++c) {
            out << c;
            for (const std::size_t n : counts[c]) out << ',' << n;
            out << '\n';
        }
        written.push_back(path);
    }

    // per-cluster curve files with member quantiles (needs profile values)
    if (!inputs.profiles.empty()) {
        std::map<std::pair<std::string, DayStamp>, const DailyProfile*> by_key;
        for (const auto& p : inputs.profiles) by_key[{p.meter_id, p.date}] = &p;
        for (std::size_t c = 0; c < k; ++c) {
            std::vector<const DailyProfile*> members;
            for (std::size_t i = 0; i < inputs.keys.size(); ++i) {
                if (static_cast<std::size_t>(model.labels[i]) != c) continue;
                const auto it = by_key.find({inputs.keys[i].meter_id, inputs.keys[i].date});
                if (it != by_key.end()) members.push_back(it->second);
            }
            char name[32];
            std::snprintf(name, sizeof name, "cluster_%02zu.csv", c);
            const auto path = out_dir / name;
            auto out = open_out(path);
            out << "hour,centroid,q10,q50,q90\n";
            for (std::size_t h = 0; h < 24; ++h) {
                std::vector<double> vals;
                vals.reserve(members.size());
                for (const auto* p : members) vals.push_back(p->values[h]);
                std::sort(vals.begin(), vals.end());
                const auto quantile = [&](double q) {
                    if (vals.empty()) return 0.0;
                    const double pos = q * static_cast<double>(vals.size() - 1);
                    const std::size_t lo = static_cast<std::size_t>(pos);
                    const std::size_t hi = std::min(lo + 1, vals.size() - 1);
                    const double frac = pos - static_cast<double>(lo);
                    return vals[lo] + (vals[hi] - vals[lo]) * frac;
                };
                out << h << ',' << format_double(model.centroids[c][h]) << ','
                    << format_double(quantile(0.1)) << ',' << format_double(quantile(0.5))
                    << ',' << format_double(quantile(0.9)) << '\n';
            }
            written.push_back(path);
        }
    }

    if (!inputs.recommendations.empty()) {
        const auto path = out_dir / "recommendations.json";
        auto out = open_out(path);
        out << recommendations_to_json(inputs.recommendations) << '\n';
        written.push_back(path);
    }

    // model summary
    {
        nlohmann::ordered_json j;
        j["algorithm"] = to_string(model.algorithm);
        j["distance"] = to_string(model.measure.kind);
        j["radius"] = model.measure.sakoe_chiba_radius;
        j["k"] = model.k;
        j["seed"] = model.seed;
        j["inertia"] = model.inertia;
        j["profiles"] = model.labels.size();
        j["meters"] = dists.size();
        if (!model.notes.empty()) j["notes"] = model.notes;
        const auto path = out_dir / "summary.json";
        auto out = open_out(path);
        out << j.dump(2) << '\n';
        written.push_back(path);
    }
    return written;
}

} // namespace drseg
