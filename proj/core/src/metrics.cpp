#include "drseg/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "drseg/csv.hpp"
#include "drseg/errors.hpp"

namespace drseg {

namespace {

constexpr int kHours = 24;

// Value of the nearest local minimum walking left from a candidate peak;
// the left series endpoint stands in when the walk never turns upward.
double left_min_value(const ProfileValues& v, int h) {
    if (h == 0) return v[0];
    int j = h - 1;
    while (j > 0) {
        if (v[static_cast<std::size_t>(j - 1)] > v[static_cast<std::size_t>(j)])
            return v[static_cast<std::size_t>(j)];
        --j;
    }
    return v[0];
}

double right_min_value(const ProfileValues& v, int h) {
    if (h == kHours - 1) return v[kHours - 1];
    int j = h + 1;
    while (j < kHours - 1) {
        if (v[static_cast<std::size_t>(j + 1)] > v[static_cast<std::size_t>(j)])
            return v[static_cast<std::size_t>(j)];
        ++j;
    }
    return v[kHours - 1];
}

} // namespace

PeakVector detect_peaks(const ProfileValues& values, double prominence_threshold) {
    if (!(prominence_threshold > 0.0))
        throw std::invalid_argument("detect_peaks: threshold must be > 0");
    PeakVector peaks{};
    for (int h = 0; h < kHours; ++h) {
        const double vh = values[static_cast<std::size_t>(h)];
        if (h > 0 && !(vh > values[static_cast<std::size_t>(h - 1)])) continue;
        // end of the plateau of equal values starting at h
        int e = h;
        while (e + 1 < kHours && values[static_cast<std::size_t>(e + 1)] == vh) ++e;
        if (e + 1 < kHours && !(values[static_cast<std::size_t>(e + 1)] < vh)) continue;
        if (h == 0 && e == kHours - 1) continue; // flat series
        const double flank =
            std::min(left_min_value(values, h), right_min_value(values, e));
        if (vh - flank > prominence_threshold) peaks[static_cast<std::size_t>(h)] = 1;
    }
    return peaks;
}

double pms_sample(const PeakVector& l, const PeakVector& c) {
    const int nl = peak_count(l);
    const int nc = peak_count(c);
    if (nl == 0) return nc == 0 ? 1.0 : 0.0;
    int dot = 0;
    for (std::size_t h = 0; h < kHours; ++h) dot += l[h] * c[h];
    return static_cast<double>(dot) / static_cast<double>(nl);
}

double pps_sample(const PeakVector& l, const PeakVector& c, int relaxation) {
    if (relaxation != 0 && relaxation != 1)
        throw std::invalid_argument("pps_sample: relaxation must be 0 or 1");
    const int nl = peak_count(l);
    const int nc = peak_count(c);
    if (nl == 0 && nc == 0) return 1.0;
    int dot = 0;
    for (int h = 0; h < kHours; ++h) {
        if (!l[static_cast<std::size_t>(h)]) continue;
        std::uint8_t match = c[static_cast<std::size_t>(h)];
        if (relaxation == 1) {
            if (h > 0) match = std::max(match, c[static_cast<std::size_t>(h - 1)]);
            if (h + 1 < kHours) match = std::max(match, c[static_cast<std::size_t>(h + 1)]);
        }
        dot += match;
    }
    return static_cast<double>(dot) / static_cast<double>(std::max(nl, nc));
}

namespace {

std::vector<PeakVector> centroid_peaks(const ClusterModel& model, double threshold) {
    std::vector<PeakVector> peaks;
    peaks.reserve(model.centroids.size());
    for (const auto& c : model.centroids) peaks.push_back(detect_peaks(c, threshold));
    return peaks;
}

void check_labels(const ClusterModel& model, std::size_t n) {
    if (model.labels.size() != n)
        throw std::invalid_argument("profile count does not match model labels");
}

} // namespace

double pms(const ClusterModel& model, std::span<const ProfileValues> profiles,
           double prominence_threshold) {
    check_labels(model, profiles.size());
    const auto cpeaks = centroid_peaks(model, prominence_threshold);
    double total = 0.0;
    for (std::size_t i = 0; i < profiles.size(); ++i)
        total += pms_sample(detect_peaks(profiles[i], prominence_threshold),
                            cpeaks[static_cast<std::size_t>(model.labels[i])]);
    return total / static_cast<double>(profiles.size());
}

double pps(const ClusterModel& model, std::span<const ProfileValues> profiles, int relaxation,
           double prominence_threshold) {
    check_labels(model, profiles.size());
    const auto cpeaks = centroid_peaks(model, prominence_threshold);
    double total = 0.0;
    for (std::size_t i = 0; i < profiles.size(); ++i)
        total += pps_sample(detect_peaks(profiles[i], prominence_threshold),
                            cpeaks[static_cast<std::size_t>(model.labels[i])], relaxation);
    return total / static_cast<double>(profiles.size());
}

double silhouette(const DistanceMatrix& matrix, std::span<const int> labels) {
    const std::size_t n = matrix.size();
    if (labels.size() != n)
        throw std::invalid_argument("silhouette: label count does not match matrix");
    int k = 0;
    for (const int l : labels) k = std::max(k, l + 1);
    if (k < 2) throw std::invalid_argument("silhouette: needs at least 2 clusters");
    std::vector<std::size_t> cluster_size(static_cast<std::size_t>(k), 0);
    for (const int l : labels) cluster_size[static_cast<std::size_t>(l)]++;
    for (const std::size_t s : cluster_size)
        if (s == 0) throw std::invalid_argument("silhouette: empty cluster");

    double total = 0.0;
    std::vector<double> sum_to_cluster(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t own = static_cast<std::size_t>(labels[i]);
        if (cluster_size[own] == 1) continue; // contributes 0
        std::fill(sum_to_cluster.begin(), sum_to_cluster.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j)
            sum_to_cluster[static_cast<std::size_t>(labels[j])] += matrix(i, j);
        const double a = sum_to_cluster[own] / static_cast<double>(cluster_size[own] - 1);
        double b = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (c == own) continue;
            b = std::min(b, sum_to_cluster[c] / static_cast<double>(cluster_size[c]));
        }
        const double denom = std::max(a, b);
        total += denom > 0.0 ? (b - a) / denom : 0.0;
    }
    return total / static_cast<double>(n);
}

double davies_bouldin(std::span<const ProfileValues> profiles, const ClusterModel& model) {
    check_labels(model, profiles.size());
    const int k = model.k;
    if (k < 2) throw std::invalid_argument("davies_bouldin: needs at least 2 clusters");

    std::vector<double> scatter(static_cast<std::size_t>(k), 0.0);
    std::vector<std::size_t> count(static_cast<std::size_t>(k), 0);
    for (std::size_t i = 0; i < profiles.size(); ++i) {
        const auto c = static_cast<std::size_t>(model.labels[i]);
        scatter[c] += profile_distance(model.measure, profiles[i], model.centroids[c]);
        count[c]++;
    }
    for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
        if (count[c] == 0) throw std::invalid_argument("davies_bouldin: empty cluster");
        scatter[c] /= static_cast<double>(count[c]);
    }

    double total = 0.0;
    for (int i = 0; i < k; ++i) {
        double worst = 0.0;
        for (int j = 0; j < k; ++j) {
            if (i == j) continue;
            const double sep = profile_distance(model.measure,
                                                model.centroids[static_cast<std::size_t>(i)],
                                                model.centroids[static_cast<std::size_t>(j)]);
            const double spread = scatter[static_cast<std::size_t>(i)] +
                                  scatter[static_cast<std::size_t>(j)];
            if (sep == 0.0) {
                if (spread > 0.0)
                    throw DataError("davies_bouldin: coincident centroids with nonzero scatter");
                continue; // both degenerate, ratio treated as 0
            }
            worst = std::max(worst, spread / sep);
        }
        total += worst;
    }
    return total / static_cast<double>(k);
}

EvaluationReport evaluate_model(const ClusterModel& model,
                                std::span<const ProfileValues> profiles,
                                const DistanceMatrix& euclid_matrix,
                                const DistanceMatrix& dtw_matrix,
                                double prominence_threshold) {
    EvaluationReport r;
    r.pms = pms(model, profiles, prominence_threshold);
    r.pps = pps(model, profiles, 0, prominence_threshold);
    r.pps_relaxed = pps(model, profiles, 1, prominence_threshold);
    r.silhouette = silhouette(euclid_matrix, model.labels);
    r.silhouette_dtw = silhouette(dtw_matrix, model.labels);
    try {
        r.davies_bouldin = davies_bouldin(profiles, model);
    } catch (const DataError&) {
        r.davies_bouldin = std::numeric_limits<double>::infinity();
    }
    return r;
}

std::string to_json(const EvaluationReport& r) {
    nlohmann::ordered_json j;
    j["pms"] = r.pms;
    j["pps"] = r.pps;
    j["pps_relaxed"] = r.pps_relaxed;
    j["silhouette"] = r.silhouette;
    j["silhouette_dtw"] = r.silhouette_dtw;
    j["davies_bouldin"] = r.davies_bouldin;
    return j.dump(2);
}

} // namespace drseg
