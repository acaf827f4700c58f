#include "drseg/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

#include "drseg/csv.hpp"
#include "drseg/errors.hpp"

namespace drseg {

std::vector<MembershipDistribution> membership_distributions(std::span<const ProfileKey> keys,
                                                             std::span<const int> labels,
                                                             int k) {
    if (keys.size() != labels.size())
        throw std::invalid_argument("membership_distributions: key/label count mismatch");
    std::map<std::string, MembershipDistribution> by_meter;
    for (std::size_t i = 0; i < keys.size(); ++i) {
        auto& dist = by_meter[keys[i].meter_id];
        if (dist.counts.empty()) {
            dist.meter_id = keys[i].meter_id;
            dist.counts.assign(static_cast<std::size_t>(k), 0);
        }
        const int label = labels[i];
        if (label < 0 || label >= k)
            throw std::invalid_argument("membership_distributions: label out of range");
        dist.counts[static_cast<std::size_t>(label)]++;
        dist.total++;
    }
    std::vector<MembershipDistribution> result;
    result.reserve(by_meter.size());
    for (auto& [id, dist] : by_meter) {
        dist.probabilities.resize(dist.counts.size());
        for (std::size_t c = 0; c < dist.counts.size(); ++c)
            dist.probabilities[c] =
                static_cast<double>(dist.counts[c]) / static_cast<double>(dist.total);
        result.push_back(std::move(dist));
    }
    return result;
}

double meter_entropy(const MembershipDistribution& dist) {
    double s = 0.0;
    for (const double p : dist.probabilities)
        if (p > 0.0) s -= p * std::log(p);
    return s;
}

const char* to_string(EntropyLabel label) {
    switch (label) {
        case EntropyLabel::very_low: return "very_low";
        case EntropyLabel::low: return "low";
        case EntropyLabel::average: return "average";
        case EntropyLabel::high: return "high";
        case EntropyLabel::very_high: return "very_high";
    }
    return "?";
}

EntropyLabel discretize_entropy(double value) {
    if (!(value >= 0.0) || !std::isfinite(value))
        throw std::invalid_argument("discretize_entropy: value must be finite and >= 0");
    if (value < 0.5) return EntropyLabel::very_low;
    if (value < 1.0) return EntropyLabel::low;
    if (value < 1.5) return EntropyLabel::average;
    if (value < 2.0) return EntropyLabel::high;
    return EntropyLabel::very_high;
}

std::map<int, double> profile_cluster_entropy(std::span<const MembershipDistribution> dists,
                                              std::span<const double> entropies) {
    if (dists.size() != entropies.size())
        throw std::invalid_argument("profile_cluster_entropy: size mismatch");
    std::map<int, std::pair<double, double>> acc; // cluster -> (weighted sum, weight)
    for (std::size_t m = 0; m < dists.size(); ++m) {
        for (std::size_t c = 0; c < dists[m].probabilities.size(); ++c) {
            const double share = dists[m].probabilities[c];
            if (share <= 0.0) continue;
            auto& [sum, weight] = acc[static_cast<int>(c)];
            sum += entropies[m] * share;
            weight += share;
        }
    }
    std::map<int, double> result;
    for (const auto& [cluster, sw] : acc) result[cluster] = sw.first / sw.second;
    return result;
}

std::map<std::string, int> assign_prosumers(std::span<const MembershipDistribution> dists,
                                            const AssignmentTieBreak* tie_break) {
    std::map<std::string, int> result;
    for (const auto& dist : dists) {
        if (dist.total == 0)
            throw std::invalid_argument("assign_prosumers: meter without profiles: " +
                                        dist.meter_id);
        std::size_t max_count = 0;
        for (const std::size_t c : dist.counts) max_count = std::max(max_count, c);
        int best = -1;
        double best_dist = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < dist.counts.size(); ++c) {
            if (dist.counts[c] != max_count) continue;
            double d = 0.0; // without a tie-break table every tie looks equal
            if (tie_break) {
                const auto it =
                    tie_break->mean_distance.find({dist.meter_id, static_cast<int>(c)});
                d = it != tie_break->mean_distance.end()
                        ? it->second
                        : std::numeric_limits<double>::infinity();
            }
            if (best < 0 || d < best_dist) {
                best = static_cast<int>(c);
                best_dist = d;
            }
        }
        result[dist.meter_id] = best;
    }
    return result;
}

std::map<int, double> prosumer_cluster_entropy(const std::map<std::string, int>& assignments,
                                               const std::map<std::string, double>& entropies) {
    std::map<int, std::pair<double, std::size_t>> acc;
    for (const auto& [meter, cluster] : assignments) {
        const auto it = entropies.find(meter);
        if (it == entropies.end())
            throw std::invalid_argument("prosumer_cluster_entropy: missing entropy for meter " +
                                        meter);
        auto& [sum, count] = acc[cluster];
        sum += it->second;
        count++;
    }
    std::map<int, double> result;
    for (const auto& [cluster, sc] : acc)
        result[cluster] = sc.first / static_cast<double>(sc.second);
    return result;
}

AssignmentTieBreak make_tie_break(const ClusterModel& model,
                                  std::span<const ProfileKey> keys,
                                  std::span<const ProfileValues> values) {
    if (keys.size() != values.size())
        throw std::invalid_argument("make_tie_break: key/value count mismatch");
    AssignmentTieBreak tb;
    std::map<std::string, std::vector<std::size_t>> by_meter;
    for (std::size_t i = 0; i < keys.size(); ++i) by_meter[keys[i].meter_id].push_back(i);
    for (const auto& [meter, indices] : by_meter) {
        for (int c = 0; c < model.k; ++c) {
            double sum = 0.0;
            for (const std::size_t i : indices)
                sum += profile_distance(model.measure, values[i],
                                        model.centroids[static_cast<std::size_t>(c)]);
            tb.mean_distance[{meter, c}] = sum / static_cast<double>(indices.size());
        }
    }
    return tb;
}

void write_assignments_csv(const std::filesystem::path& path,
                           const std::map<std::string, int>& assignments) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << "meter_id,cluster\n";
    for (const auto& [meter, cluster] : assignments) out << meter << ',' << cluster << '\n';
}

std::map<std::string, int> load_assignments_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open assignment file: " + path.string());
    std::string line;
    if (!std::getline(in, line) || trim(line) != "meter_id,cluster")
        throw DataError("malformed assignment header in " + path.string());
    std::map<std::string, int> result;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        const auto cluster = fields.size() == 2 ? parse_double(fields[1]) : std::nullopt;
        if (!cluster || fields[0].empty())
            throw DataError("assignment line " + std::to_string(lineno) + ": expected id,cluster");
        result[fields[0]] = static_cast<int>(*cluster);
    }
    return result;
}

} // namespace drseg
