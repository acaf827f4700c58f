#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "drseg/clustering.hpp"

namespace drseg {

struct MembershipDistribution {
    std::string meter_id;
    std::vector<std::size_t> counts;     // per cluster, length k
    std::vector<double> probabilities;   // counts / total
    std::size_t total = 0;
};

/// One distribution per meter from per-profile cluster labels (keys and
/// labels run in parallel). Meters are emitted in sorted id order.
std::vector<MembershipDistribution> membership_distributions(std::span<const ProfileKey> keys,
                                                             std::span<const int> labels, int k);

/// Shannon entropy, natural logarithm, sign-corrected: S = -sum p ln p.
double meter_entropy(const MembershipDistribution& dist);

enum class EntropyLabel { very_low, low, average, high, very_high };
const char* to_string(EntropyLabel label);

/// Bins of width 0.5: [0,0.5) very_low ... [2,inf) very_high; boundaries
/// belong to the upper bin.
EntropyLabel discretize_entropy(double value);

/// Weighted mean of member entropies per cluster; the weight of a meter is
/// the share of its own profiles lying in that cluster. Clusters with no
/// profiles are absent.
std::map<int, double> profile_cluster_entropy(std::span<const MembershipDistribution> dists,
                                              std::span<const double> entropies);

/// Optional tie-break context for assign_prosumers: mean distance from a
/// meter's profiles to each candidate centroid.
struct AssignmentTieBreak {
    std::map<std::pair<std::string, int>, double> mean_distance;
};

/// Majority cluster per meter; ties broken by smaller mean distance when a
/// tie-break table is supplied, then by lowest cluster index.
std::map<std::string, int> assign_prosumers(std::span<const MembershipDistribution> dists,
                                            const AssignmentTieBreak* tie_break = nullptr);

/// Unweighted mean entropy of the meters assigned to each cluster; clusters
/// with no assigned meter are absent.
std::map<int, double> prosumer_cluster_entropy(const std::map<std::string, int>& assignments,
                                               const std::map<std::string, double>& entropies);

/// Tie-break table from a fitted model and the profiles behind the labels.
AssignmentTieBreak make_tie_break(const ClusterModel& model,
                                  std::span<const ProfileKey> keys,
                                  std::span<const ProfileValues> values);

/// Assignment CSV: header `meter_id,cluster`, one row per meter.
void write_assignments_csv(const std::filesystem::path& path,
                           const std::map<std::string, int>& assignments);
std::map<std::string, int> load_assignments_csv(const std::filesystem::path& path);

} // namespace drseg
