#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drseg/clustering.hpp"
#include "drseg/dr_engine.hpp"
#include "drseg/metrics.hpp"
#include "drseg/preprocess.hpp"

namespace drseg {

struct ExperimentRow {
    int run_id = 0;
    ClusterAlgorithm algorithm = ClusterAlgorithm::kmeans;
    DistanceMeasure measure;
    int k = 0;
    std::uint64_t seed = 0;
    EvaluationReport metrics;
    std::size_t n_profiles = 0;
    double wall_seconds = 0.0;
};

struct ExperimentLog {
    std::vector<ExperimentRow> rows;
};

extern const char* const kExperimentLogHeader;
std::string format_log_row(const ExperimentRow& row);
ExperimentLog load_experiment_log(const std::filesystem::path& path);

struct GridSearchOptions {
    std::vector<ClusterAlgorithm> algorithms{ClusterAlgorithm::kmeans,
                                             ClusterAlgorithm::kmedoids,
                                             ClusterAlgorithm::agglomerative};
    std::vector<DistanceMeasure> measures{DistanceMeasure::euclid(), DistanceMeasure::dtw(1)};
    int k_min = 3;
    int k_max = 20;
    std::uint64_t seed = 0;
    /// Fitting and metric evaluation run on a seeded subsample when the
    /// profile count exceeds this cap; pairwise matrices grow quadratically.
    std::size_t max_profiles = 2000;
    int n_init = 5;
    int max_iter = 100;
    int dba_iters = 10;
    Linkage linkage = Linkage::ward;
    double prominence_threshold = 0.2;
    /// When set, rows already present are skipped and new rows are appended
    /// and flushed one by one, so partial logs survive interruption.
    std::optional<std::filesystem::path> log_path;
    std::ostream* progress = nullptr;
    std::size_t* matrix_builds = nullptr; // test hook
};

/// Fits every algorithm x measure x k configuration and evaluates all
/// metrics, computing each pairwise matrix once per measure. Deterministic
/// given the seed; per-row seeds are derived from it.
ExperimentLog grid_search(std::span<const DailyProfile> profiles,
                          const GridSearchOptions& options);

struct SelectionCriteria {
    int min_k = 10;
    double top_fraction = 0.15; // of each metric's observed range
};

/// Pareto-efficient rows on (pps_relaxed, silhouette_dtw) plus rows within
/// the top fraction of both metric ranges; among candidates with k >= min_k
/// the one with maximum pps_relaxed wins (ties: larger silhouette_dtw, then
/// smaller k). Falls back to ignoring min_k with a warning.
int select_best(const ExperimentLog& log, const SelectionCriteria& criteria,
                std::string* warning = nullptr);

struct ReportInputs {
    const ClusterModel* model = nullptr;
    std::span<const ProfileKey> keys;                   // parallel to model->labels
    std::span<const DailyProfile> profiles;             // optional, for quantile curves
    std::span<const MeterMetadata> metadata;            // optional, for load types
    std::map<std::string, int> assignments;             // may be empty (recomputed)
    std::vector<ClusterRecommendation> recommendations; // may be empty
};

/// Writes the report bundle (centroid curves, shares, load-type tables,
/// membership matrix, entropy tables, assignments, recommendations) and
/// returns the list of files written.
std::vector<std::filesystem::path> emit_report(const ReportInputs& inputs,
                                               const std::filesystem::path& out_dir);

} // namespace drseg
