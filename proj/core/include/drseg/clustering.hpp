#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "drseg/distance.hpp"
#include "drseg/timeaxis.hpp"

namespace drseg {

enum class ClusterAlgorithm { kmeans, kmedoids, agglomerative };
enum class Linkage { ward, average, complete };

const char* to_string(ClusterAlgorithm a);
const char* to_string(Linkage l);
ClusterAlgorithm algorithm_from_string(std::string_view name);
Linkage linkage_from_string(std::string_view name);

struct ClusterModel {
    ClusterAlgorithm algorithm = ClusterAlgorithm::kmeans;
    DistanceMeasure measure;
    int k = 0;
    std::vector<ProfileValues> centroids; // k entries; medoid copies for kmedoids
    std::vector<int> labels;              // per training profile, in [0, k)
    double inertia = 0.0;                 // total within-cluster dissimilarity
    std::uint64_t seed = 0;
    Linkage linkage = Linkage::ward;      // agglomerative only
    std::vector<std::string> notes;
};

struct KMeansOptions {
    int max_iter = 100;
    int n_init = 5;
    int dba_iters = 10;
    std::vector<double>* inertia_trace = nullptr; // per-iteration, best init only
};

/// Lloyd iteration under the given measure; centroids are arithmetic means
/// (euclidean) or DBA barycenters (DTW). Best of n_init k-means++ style
/// seedings by inertia (sum of squared distances). Deterministic given seed.
ClusterModel kmeans_fit(std::span<const ProfileValues> profiles, int k,
                        const DistanceMeasure& measure, std::uint64_t seed,
                        const KMeansOptions& options = {});

/// Iterative barycenter refinement under the banded DTW: align every member
/// to the current barycenter, average the values mapped to each coordinate,
/// stop after `iters` rounds or when the total squared DTW cost stops
/// decreasing.
ProfileValues dba_barycenter(std::span<const ProfileValues> members, int radius, int iters,
                             const ProfileValues& init);

/// Voronoi iteration on a precomputed distance matrix; medoid of a cluster is
/// the member minimising total within-cluster distance. Inertia is the sum of
/// member-to-medoid distances.
ClusterModel kmedoids_fit(std::span<const ProfileValues> profiles, int k,
                          const DistanceMeasure& measure, std::uint64_t seed,
                          const DistanceMatrix& matrix, int max_iter = 100);

struct MergeStep {
    int left = 0;   // cluster ids; singletons are 0..n-1, merge t creates n+t
    int right = 0;
    double distance = 0.0; // linkage value at merge time (squared for ward)
};

/// Full merge sequence via Lance-Williams updates; ties broken by lowest
/// (left, right) pair. Ward operates on squared distances.
std::vector<MergeStep> agglomerative_dendrogram(const DistanceMatrix& matrix, Linkage linkage);

/// Cut a dendrogram at k clusters; labels ordered by smallest member index,
/// centroids are member means (reporting only).
ClusterModel agglomerative_cut(std::span<const ProfileValues> profiles, int k,
                               const DistanceMeasure& measure, Linkage linkage,
                               std::span<const MergeStep> merges);

ClusterModel agglomerative_fit(std::span<const ProfileValues> profiles, int k,
                               const DistanceMeasure& measure, Linkage linkage,
                               const DistanceMatrix& matrix);

/// Index of the nearest centroid under the model's measure; ties -> lowest.
int predict(const ClusterModel& model, const ProfileValues& profile);

struct ProfileKey {
    std::string meter_id;
    DayStamp date = 0;
};

// Versioned JSON model document; keys align with model.labels.
std::string model_to_json(const ClusterModel& model, std::span<const ProfileKey> keys);
ClusterModel model_from_json(const std::string& text, std::vector<ProfileKey>* keys = nullptr);
void save_model(const std::filesystem::path& path, const ClusterModel& model,
                std::span<const ProfileKey> keys);
ClusterModel load_model(const std::filesystem::path& path,
                        std::vector<ProfileKey>* keys = nullptr);

} // namespace drseg
