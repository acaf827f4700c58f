#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "drseg/clustering.hpp"
#include "drseg/distance.hpp"

namespace drseg {

/// Binary per-hour peak indicators; never has two adjacent bits set.
using PeakVector = std::array<std::uint8_t, 24>;

inline int peak_count(const PeakVector& p) {
    int n = 0;
    for (const auto b : p) n += b;
    return n;
}

/// Local maxima (leftmost sample of plateaus; boundary hours count when they
/// exceed their single neighbour) whose prominence exceeds the threshold.
/// Prominence is the drop to the lower of the two flanking local minima, with
/// series endpoints standing in when a side has none.
PeakVector detect_peaks(const ProfileValues& values, double prominence_threshold = 0.2);

/// Per-sample peak match score: 1 when both vectors are empty, 0 when only
/// the sample is, otherwise <l,c> / sum(l).
double pms_sample(const PeakVector& l, const PeakVector& c);

/// Per-sample peak performance score: 1 when both vectors are empty,
/// otherwise <l, dilate(c)> / max(sum(l), sum(c)) with undilated counts.
/// relaxation in {0, 1} widens each centroid peak by one hour.
double pps_sample(const PeakVector& l, const PeakVector& c, int relaxation);

double pms(const ClusterModel& model, std::span<const ProfileValues> profiles,
           double prominence_threshold = 0.2);
double pps(const ClusterModel& model, std::span<const ProfileValues> profiles, int relaxation,
           double prominence_threshold = 0.2);

/// Mean silhouette over a precomputed matrix; singleton clusters contribute 0.
double silhouette(const DistanceMatrix& matrix, std::span<const int> labels);

/// Scatter = mean member-to-centroid distance, separation = centroid-to-
/// centroid distance, both under the model's measure. Lower is better.
double davies_bouldin(std::span<const ProfileValues> profiles, const ClusterModel& model);

struct EvaluationReport {
    double pms = 0.0;
    double pps = 0.0;
    double pps_relaxed = 0.0;
    double silhouette = 0.0;
    double silhouette_dtw = 0.0;
    double davies_bouldin = 0.0;
};

/// All five validity metrics for one fitted model. The two matrices must
/// cover the same profiles the model's labels refer to. A Davies-Bouldin
/// coincident-centroid failure is reported as +infinity rather than thrown.
EvaluationReport evaluate_model(const ClusterModel& model,
                                std::span<const ProfileValues> profiles,
                                const DistanceMatrix& euclid_matrix,
                                const DistanceMatrix& dtw_matrix,
                                double prominence_threshold = 0.2);

std::string to_json(const EvaluationReport& report);

} // namespace drseg
