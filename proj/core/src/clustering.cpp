#include "drseg/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "drseg/errors.hpp"

namespace drseg {

const char* to_string(ClusterAlgorithm a) {
    switch (a) {
        case ClusterAlgorithm::kmeans: return "kmeans";
        case ClusterAlgorithm::kmedoids: return "kmedoids";
        case ClusterAlgorithm::agglomerative: return "agglomerative";
    }
    return "?";
}

const char* to_string(Linkage l) {
    switch (l) {
        case Linkage::ward: return "ward";
        case Linkage::average: return "average";
        case Linkage::complete: return "complete";
    }
    return "?";
}

ClusterAlgorithm algorithm_from_string(std::string_view name) {
    if (name == "kmeans") return ClusterAlgorithm::kmeans;
    if (name == "kmedoids") return ClusterAlgorithm::kmedoids;
    if (name == "agglomerative") return ClusterAlgorithm::agglomerative;
    throw DataError("unknown clustering algorithm: " + std::string(name));
}

Linkage linkage_from_string(std::string_view name) {
    if (name == "ward") return Linkage::ward;
    if (name == "average") return Linkage::average;
    if (name == "complete") return Linkage::complete;
    throw DataError("unknown linkage: " + std::string(name));
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Drawing helpers on top of mt19937_64: the engine output is pinned by the
// standard, while std::uniform_*_distribution is not, so roll our own.
double unit_real(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::size_t uniform_index(std::mt19937_64& rng, std::size_t n) {
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(rng()) * n) >> 64);
}

/// k-means++ style seeding: weights are squared distances to the nearest
/// already chosen centre. `dist` maps (point index, chosen point index) to a
/// distance. All-zero weights fall back to the lowest unchosen index.
template <typename DistFn>
std::vector<std::size_t> kmeanspp_indices(std::size_t n, int k, std::mt19937_64& rng,
                                          DistFn&& dist) {
    std::vector<std::size_t> chosen;
    chosen.reserve(static_cast<std::size_t>(k));
    chosen.push_back(uniform_index(rng, n));
    std::vector<double> weight(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double d = dist(i, chosen[0]);
        weight[i] = d * d;
    }
    std::vector<char> is_chosen(n, 0);
    is_chosen[chosen[0]] = 1;
    while (chosen.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (double w : weight) total += w;
        std::size_t pick = n;
        if (total > 0.0) {
            const double r = unit_real(rng) * total;
            double acc = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                acc += weight[i];
                if (r < acc) {
                    pick = i;
                    break;
                }
            }
            if (pick == n) { // numerical tail; take the last positive weight
                for (std::size_t i = n; i-- > 0;)
                    if (weight[i] > 0.0) {
                        pick = i;
                        break;
                    }
            }
        }
        if (pick == n) { // all duplicates of chosen points
            for (std::size_t i = 0; i < n; ++i)
                if (!is_chosen[i]) {
                    pick = i;
                    break;
                }
        }
        if (pick == n) pick = chosen.size() % n; // k > distinct points
        chosen.push_back(pick);
        is_chosen[pick] = 1;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = dist(i, pick);
            weight[i] = std::min(weight[i], d * d);
        }
    }
    return chosen;
}

/// Optimal banded warping path between two length-24 series, as (i, j) cell
/// pairs. Backtrack prefers diagonal, then vertical, then horizontal.
std::vector<std::pair<int, int>> banded_path(const ProfileValues& a, const ProfileValues& b,
                                             int radius) {
    constexpr int n = 24;
    constexpr double kInf = std::numeric_limits<double>::infinity();
    const int w = std::max(radius, 0);
    std::array<std::array<double, n>, n> acc;
    for (auto& row : acc) row.fill(kInf);
    for (int i = 0; i < n; ++i) {
        const int jlo = std::max(0, i - w);
        const int jhi = std::min(n - 1, i + w);
        for (int j = jlo; j <= jhi; ++j) {
            const double diff = a[static_cast<std::size_t>(i)] - b[static_cast<std::size_t>(j)];
            const double cost = diff * diff;
            if (i == 0 && j == 0) {
                acc[0][0] = cost;
                continue;
            }
            double best = kInf;
            if (i > 0 && j > 0) best = std::min(best, acc[i - 1][j - 1]);
            if (i > 0) best = std::min(best, acc[i - 1][j]);
            if (j > 0) best = std::min(best, acc[i][j - 1]);
            acc[i][j] = best + cost;
        }
    }
    std::vector<std::pair<int, int>> path;
    int i = n - 1, j = n - 1;
    path.emplace_back(i, j);
    while (i > 0 || j > 0) {
        const double diag = (i > 0 && j > 0) ? acc[i - 1][j - 1] : kInf;
        const double vert = i > 0 ? acc[i - 1][j] : kInf;
        const double horz = j > 0 ? acc[i][j - 1] : kInf;
        if (diag <= vert && diag <= horz) {
            --i;
            --j;
        } else if (vert <= horz) {
            --i;
        } else {
            --j;
        }
        path.emplace_back(i, j);
    }
    std::reverse(path.begin(), path.end());
    return path;
}

double total_sq_cost(const ProfileValues& center, std::span<const ProfileValues> members,
                     const DistanceMeasure& measure) {
    double total = 0.0;
    for (const auto& m : members) {
        const double d = profile_distance(measure, center, m);
        total += d * d;
    }
    return total;
}

ProfileValues mean_of(std::span<const ProfileValues> profiles,
                      std::span<const std::size_t> indices) {
    ProfileValues mean{};
    for (const std::size_t idx : indices)
        for (std::size_t h = 0; h < 24; ++h) mean[h] += profiles[idx][h];
    if (!indices.empty())
        for (double& v : mean) v /= static_cast<double>(indices.size());
    return mean;
}

} // namespace

ProfileValues dba_barycenter(std::span<const ProfileValues> members, int radius, int iters,
                             const ProfileValues& init) {
    if (members.empty()) throw std::invalid_argument("dba_barycenter: empty member list");
    const DistanceMeasure measure = DistanceMeasure::dtw(radius);
    ProfileValues best = init;
    double best_cost = total_sq_cost(best, members, measure);
    ProfileValues current = init;
    for (int it = 0; it < iters; ++it) {
        std::array<double, 24> sums{};
        std::array<std::size_t, 24> counts{};
        for (const auto& m : members) {
            for (const auto& [i, j] : banded_path(current, m, radius)) {
                sums[static_cast<std::size_t>(i)] += m[static_cast<std::size_t>(j)];
                counts[static_cast<std::size_t>(i)]++;
            }
        }
        for (std::size_t h = 0; h < 24; ++h)
            current[h] = counts[h] > 0 ? sums[h] / static_cast<double>(counts[h]) : current[h];
        const double cost = total_sq_cost(current, members, measure);
        if (cost >= best_cost) break;
        best = current;
        best_cost = cost;
    }
    return best;
}

ClusterModel kmeans_fit(std::span<const ProfileValues> profiles, int k,
                        const DistanceMeasure& measure, std::uint64_t seed,
                        const KMeansOptions& options) {
    const std::size_t n = profiles.size();
    if (k < 1) throw std::invalid_argument("kmeans_fit: k must be >= 1");
    if (static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("kmeans_fit: k exceeds number of profiles");

    const auto point_dist = [&](std::size_t i, std::size_t j) {
        return profile_distance(measure, profiles[i], profiles[j]);
    };

    ClusterModel best_model;
    double best_inertia = std::numeric_limits<double>::infinity();
    std::vector<double> best_trace;

    for (int init = 0; init < std::max(options.n_init, 1); ++init) {
        std::mt19937_64 rng(splitmix64(seed + static_cast<std::uint64_t>(init)));
        std::vector<ProfileValues> centroids;
        for (const std::size_t idx : kmeanspp_indices(n, k, rng, point_dist))
            centroids.push_back(profiles[idx]);

        std::vector<int> labels(n, -1);
        std::vector<double> dist_to_own(n, 0.0);
        std::vector<double> trace;
        double inertia = 0.0;

        for (int iter = 0; iter < options.max_iter; ++iter) {
            bool changed = false;
            inertia = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                int best_c = 0;
                double best_d = std::numeric_limits<double>::infinity();
                for (int c = 0; c < k; ++c) {
                    const double d =
                        profile_distance(measure, profiles[i], centroids[static_cast<std::size_t>(c)]);
                    if (d < best_d) {
                        best_d = d;
                        best_c = c;
                    }
                }
                if (labels[i] != best_c) {
                    labels[i] = best_c;
                    changed = true;
                }
                dist_to_own[i] = best_d;
                inertia += best_d * best_d;
            }
            trace.push_back(inertia);
            if (!changed) break;

            // member lists; repair empty clusters by conscripting the profile
            // farthest from its current centroid
            std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(k));
            for (std::size_t i = 0; i < n; ++i)
                members[static_cast<std::size_t>(labels[i])].push_back(i);
            for (int c = 0; c < k; ++c) {
                auto& cluster = members[static_cast<std::size_t>(c)];
                if (!cluster.empty()) continue;
                std::size_t farthest = 0;
                double far_d = -1.0;
                for (std::size_t i = 0; i < n; ++i)
                    if (dist_to_own[i] > far_d &&
                        members[static_cast<std::size_t>(labels[i])].size() > 1) {
                        far_d = dist_to_own[i];
                        farthest = i;
                    }
                auto& old_cluster = members[static_cast<std::size_t>(labels[farthest])];
                old_cluster.erase(std::find(old_cluster.begin(), old_cluster.end(), farthest));
                labels[farthest] = c;
                dist_to_own[farthest] = 0.0;
                cluster.push_back(farthest);
                centroids[static_cast<std::size_t>(c)] = profiles[farthest];
            }

            for (int c = 0; c < k; ++c) {
                const auto& cluster = members[static_cast<std::size_t>(c)];
                if (measure.kind == DistanceKind::euclidean) {
                    centroids[static_cast<std::size_t>(c)] = mean_of(profiles, cluster);
                } else {
                    std::vector<ProfileValues> vals;
                    vals.reserve(cluster.size());
                    for (const std::size_t idx : cluster) vals.push_back(profiles[idx]);
                    centroids[static_cast<std::size_t>(c)] =
                        dba_barycenter(vals, measure.sakoe_chiba_radius, options.dba_iters,
                                       centroids[static_cast<std::size_t>(c)]);
                }
            }
        }

        // final inertia consistent with the returned centroids and labels
        inertia = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double d = profile_distance(measure, profiles[i],
                                              centroids[static_cast<std::size_t>(labels[i])]);
            inertia += d * d;
        }
        if (inertia < best_inertia) {
            best_inertia = inertia;
            best_model.centroids = std::move(centroids);
            best_model.labels = std::move(labels);
            best_trace = std::move(trace);
        }
    }

    best_model.algorithm = ClusterAlgorithm::kmeans;
    best_model.measure = measure;
    best_model.k = k;
    best_model.inertia = best_inertia;
    best_model.seed = seed;
    if (options.inertia_trace) *options.inertia_trace = best_trace;
    return best_model;
}

ClusterModel kmedoids_fit(std::span<const ProfileValues> profiles, int k,
                          const DistanceMeasure& measure, std::uint64_t seed,
                          const DistanceMatrix& matrix, int max_iter) {
    const std::size_t n = profiles.size();
    if (k < 1) throw std::invalid_argument("kmedoids_fit: k must be >= 1");
    if (static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("kmedoids_fit: k exceeds number of profiles");
    if (matrix.size() != n)
        throw std::invalid_argument("kmedoids_fit: matrix size mismatch");

    std::mt19937_64 rng(splitmix64(seed));
    std::vector<std::size_t> medoids = kmeanspp_indices(
        n, k, rng, [&](std::size_t i, std::size_t j) { return matrix(i, j); });

    std::vector<int> labels(n, 0);
    const auto assign = [&] {
        for (std::size_t i = 0; i < n; ++i) {
            int best_c = 0;
            double best_d = std::numeric_limits<double>::infinity();
            for (int c = 0; c < k; ++c) {
                const double d = matrix(i, medoids[static_cast<std::size_t>(c)]);
                if (d < best_d) {
                    best_d = d;
                    best_c = c;
                }
            }
            labels[i] = best_c;
        }
        // a medoid always anchors its own cluster, so none can empty out
        for (int c = 0; c < k; ++c) labels[medoids[static_cast<std::size_t>(c)]] = c;
    };

    for (int iter = 0; iter < max_iter; ++iter) {
        assign();
        bool changed = false;
        std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(k));
        for (std::size_t i = 0; i < n; ++i)
            members[static_cast<std::size_t>(labels[i])].push_back(i);
        for (int c = 0; c < k; ++c) {
            const auto& cluster = members[static_cast<std::size_t>(c)];
            std::size_t best_m = medoids[static_cast<std::size_t>(c)];
            double best_total = std::numeric_limits<double>::infinity();
            for (const std::size_t cand : cluster) {
                double total = 0.0;
                for (const std::size_t other : cluster) total += matrix(cand, other);
                if (total < best_total) {
                    best_total = total;
                    best_m = cand;
                }
            }
            if (best_m != medoids[static_cast<std::size_t>(c)]) {
                medoids[static_cast<std::size_t>(c)] = best_m;
                changed = true;
            }
        }
        if (!changed) break;
    }
    assign();

    ClusterModel model;
    model.algorithm = ClusterAlgorithm::kmedoids;
    model.measure = measure;
    model.k = k;
    model.seed = seed;
    model.centroids.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c)
        model.centroids.push_back(profiles[medoids[static_cast<std::size_t>(c)]]);
    model.labels = labels;
    model.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        model.inertia += matrix(i, medoids[static_cast<std::size_t>(labels[i])]);
    return model;
}

std::vector<MergeStep> agglomerative_dendrogram(const DistanceMatrix& matrix, Linkage linkage) {
    const std::size_t n = matrix.size();
    if (n == 0) throw std::invalid_argument("agglomerative_dendrogram: empty matrix");

    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            const double v = matrix(i, j);
            d[i * n + j] = linkage == Linkage::ward ? v * v : v;
        }
    std::vector<char> alive(n, 1);
    std::vector<double> size(n, 1.0);
    std::vector<int> id(n);
    for (std::size_t i = 0; i < n; ++i) id[i] = static_cast<int>(i);

    std::vector<MergeStep> merges;
    merges.reserve(n - 1);
    for (std::size_t t = 0; t + 1 < n; ++t) {
        std::size_t best_a = 0, best_b = 0;
        double best_d = std::numeric_limits<double>::infinity();
        std::pair<int, int> best_pair{std::numeric_limits<int>::max(), 0};
        for (std::size_t a = 0; a < n; ++a) {
            if (!alive[a]) continue;
            for (std::size_t b = a + 1; b < n; ++b) {
                if (!alive[b]) continue;
                const double dist = d[a * n + b];
                const std::pair<int, int> pair{std::min(id[a], id[b]), std::max(id[a], id[b])};
                if (dist < best_d || (dist == best_d && pair < best_pair)) {
                    best_d = dist;
                    best_a = a;
                    best_b = b;
                    best_pair = pair;
                }
            }
        }
        const double na = size[best_a], nb = size[best_b];
        for (std::size_t l = 0; l < n; ++l) {
            if (!alive[l] || l == best_a || l == best_b) continue;
            const double dal = d[best_a * n + l];
            const double dbl = d[best_b * n + l];
            double merged;
            switch (linkage) {
                case Linkage::ward: {
                    const double nl = size[l];
                    merged = ((na + nl) * dal + (nb + nl) * dbl - nl * best_d) / (na + nb + nl);
                    break;
                }
                case Linkage::average:
                    merged = (na * dal + nb * dbl) / (na + nb);
                    break;
                case Linkage::complete:
                    merged = std::max(dal, dbl);
                    break;
                default:
                    merged = 0.0;
            }
            d[best_a * n + l] = merged;
            d[l * n + best_a] = merged;
        }
        merges.push_back(MergeStep{best_pair.first, best_pair.second, best_d});
        alive[best_b] = 0;
        size[best_a] += size[best_b];
        id[best_a] = static_cast<int>(n + t);
    }
    return merges;
}

ClusterModel agglomerative_cut(std::span<const ProfileValues> profiles, int k,
                               const DistanceMeasure& measure, Linkage linkage,
                               std::span<const MergeStep> merges) {
    const std::size_t n = profiles.size();
    if (k < 1) throw std::invalid_argument("agglomerative_cut: k must be >= 1");
    if (static_cast<std::size_t>(k) > n)
        throw std::invalid_argument("agglomerative_cut: k exceeds number of profiles");

    // union-find over the first n - k merges
    std::vector<int> parent(2 * n - 1);
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    const auto find = [&](int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] =
                parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    };
    for (std::size_t t = 0; t < n - static_cast<std::size_t>(k); ++t) {
        const int target = static_cast<int>(n + t);
        parent[static_cast<std::size_t>(find(merges[t].left))] = target;
        parent[static_cast<std::size_t>(find(merges[t].right))] = target;
    }

    // order clusters by smallest member index
    std::vector<int> root_to_label(2 * n - 1, -1);
    int next_label = 0;
    std::vector<int> labels(n, -1);
    for (std::size_t i = 0; i < n; ++i) {
        const int root = find(static_cast<int>(i));
        if (root_to_label[static_cast<std::size_t>(root)] < 0)
            root_to_label[static_cast<std::size_t>(root)] = next_label++;
        labels[i] = root_to_label[static_cast<std::size_t>(root)];
    }

    ClusterModel model;
    model.algorithm = ClusterAlgorithm::agglomerative;
    model.measure = measure;
    model.k = k;
    model.linkage = linkage;
    model.labels = labels;
    std::vector<std::vector<std::size_t>> members(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i)
        members[static_cast<std::size_t>(labels[i])].push_back(i);
    model.centroids.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c)
        model.centroids.push_back(mean_of(profiles, members[static_cast<std::size_t>(c)]));
    model.inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dist = profile_distance(measure, profiles[i],
                                             model.centroids[static_cast<std::size_t>(labels[i])]);
        model.inertia += dist * dist;
    }
    if (linkage == Linkage::ward && measure.kind == DistanceKind::dtw_constrained)
        model.notes.push_back(
            "ward linkage applied to DTW distances via Lance-Williams updates; "
            "the variance interpretation of ward assumes euclidean geometry");
    return model;
}

ClusterModel agglomerative_fit(std::span<const ProfileValues> profiles, int k,
                               const DistanceMeasure& measure, Linkage linkage,
                               const DistanceMatrix& matrix) {
    if (matrix.size() != profiles.size())
        throw std::invalid_argument("agglomerative_fit: matrix size mismatch");
    const auto merges = agglomerative_dendrogram(matrix, linkage);
    return agglomerative_cut(profiles, k, measure, linkage, merges);
}

int predict(const ClusterModel& model, const ProfileValues& profile) {
    int best_c = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < model.centroids.size(); ++c) {
        const double d = profile_distance(model.measure, profile, model.centroids[c]);
        if (d < best_d) {
            best_d = d;
            best_c = static_cast<int>(c);
        }
    }
    return best_c;
}

std::string model_to_json(const ClusterModel& model, std::span<const ProfileKey> keys) {
    if (!keys.empty() && keys.size() != model.labels.size())
        throw std::invalid_argument("model_to_json: key/label count mismatch");
    nlohmann::ordered_json j;
    j["format_version"] = 1;
    j["algorithm"] = to_string(model.algorithm);
    j["distance"] = to_string(model.measure.kind);
    j["radius"] = model.measure.sakoe_chiba_radius;
    j["k"] = model.k;
    j["seed"] = model.seed;
    if (model.algorithm == ClusterAlgorithm::agglomerative)
        j["linkage"] = to_string(model.linkage);
    j["inertia"] = model.inertia;
    j["centroids"] = model.centroids;
    if (keys.empty()) {
        j["labels"] = model.labels;
    } else {
        auto& labels = j["labels"];
        labels = nlohmann::ordered_json::array();
        for (std::size_t i = 0; i < keys.size(); ++i)
            labels.push_back({{"meter_id", keys[i].meter_id},
                              {"date", format_date(keys[i].date)},
                              {"cluster", model.labels[i]}});
    }
    if (!model.notes.empty()) j["notes"] = model.notes;
    return j.dump(2);
}

ClusterModel model_from_json(const std::string& text, std::vector<ProfileKey>* keys) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("model JSON parse error: ") + e.what());
    }
    try {
        if (j.at("format_version").get<int>() != 1)
            throw DataError("unsupported model format version");
        ClusterModel model;
        model.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
        model.measure.kind = distance_kind_from_string(j.at("distance").get<std::string>());
        model.measure.sakoe_chiba_radius = j.at("radius").get<int>();
        model.k = j.at("k").get<int>();
        model.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("linkage"))
            model.linkage = linkage_from_string(j["linkage"].get<std::string>());
        model.inertia = j.at("inertia").get<double>();
        for (const auto& c : j.at("centroids")) {
            if (c.size() != 24) throw DataError("model centroid is not a 24-vector");
            ProfileValues v{};
            for (std::size_t h = 0; h < 24; ++h) v[h] = c[h].get<double>();
            model.centroids.push_back(v);
        }
        if (keys) keys->clear();
        for (const auto& l : j.at("labels")) {
            if (l.is_number_integer()) {
                model.labels.push_back(l.get<int>());
            } else {
                model.labels.push_back(l.at("cluster").get<int>());
                if (keys) {
                    const auto date = parse_date(l.at("date").get<std::string>());
                    if (!date) throw DataError("model label has malformed date");
                    keys->push_back(ProfileKey{l.at("meter_id").get<std::string>(), *date});
                }
            }
        }
        if (j.contains("notes"))
            for (const auto& note : j["notes"]) model.notes.push_back(note.get<std::string>());
        if (static_cast<int>(model.centroids.size()) != model.k)
            throw DataError("model centroid count does not match k");
        return model;
    } catch (const nlohmann::json::exception& e) {
        throw DataError(std::string("malformed model document: ") + e.what());
    }
}

void save_model(const std::filesystem::path& path, const ClusterModel& model,
                std::span<const ProfileKey> keys) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write model file: " + path.string());
    out << model_to_json(model, keys) << '\n';
}

ClusterModel load_model(const std::filesystem::path& path, std::vector<ProfileKey>* keys) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open model file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return model_from_json(buf.str(), keys);
}

} // namespace drseg
