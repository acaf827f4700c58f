#include "drseg/distance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "drseg/errors.hpp"

namespace drseg {

const char* to_string(DistanceKind kind) {
    switch (kind) {
        case DistanceKind::euclidean: return "euclidean";
        case DistanceKind::dtw_constrained: return "dtw";
    }
    return "?";
}

DistanceKind distance_kind_from_string(std::string_view name) {
    if (name == "euclidean" || name == "euclid") return DistanceKind::euclidean;
    if (name == "dtw" || name == "dtw_constrained") return DistanceKind::dtw_constrained;
    throw DataError("unknown distance measure: " + std::string(name));
}

double euclidean(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size())
        throw std::invalid_argument("euclidean: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        acc += d * d;
    }
    return std::sqrt(acc);
}

double dtw_constrained(std::span<const double> a, std::span<const double> b, int radius) {
    if (a.size() != b.size())
        throw std::invalid_argument("dtw_constrained: length mismatch");
    if (radius < 0)
        throw std::invalid_argument("dtw_constrained: negative radius");
    const std::size_t n = a.size();
    if (n == 0) return 0.0;

    constexpr double kInf = std::numeric_limits<double>::infinity();
    const std::size_t w = static_cast<std::size_t>(radius);

    // Two rolling rows over the banded lattice; row i covers j in
    // [i - w, i + w] clamped to [0, n). Steps from cells outside the band
    // are excluded by the guards below, so stale row contents are never read.
    std::vector<double> prev(n, kInf), curr(n, kInf);
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t jlo = i > w ? i - w : 0;
        const std::size_t jhi = std::min(i + w, n - 1);
        for (std::size_t j = jlo; j <= jhi; ++j) {
            const double diff = a[i] - b[j];
            const double cost = diff * diff;
            double best;
            if (i == 0 && j == 0) {
                best = 0.0;
            } else {
                best = kInf;
                if (i > 0 && j + 1 <= i + w) best = std::min(best, prev[j]); // vertical
                if (j > jlo) best = std::min(best, curr[j - 1]);             // horizontal
                if (i > 0 && j > 0) best = std::min(best, prev[j - 1]);      // diagonal
            }
            curr[j] = best + cost;
        }
        std::swap(prev, curr);
    }
    return std::sqrt(prev[n - 1]);
}

double profile_distance(const DistanceMeasure& m, std::span<const double> a,
                        std::span<const double> b) {
    return m.kind == DistanceKind::euclidean
               ? euclidean(a, b)
               : dtw_constrained(a, b, m.sakoe_chiba_radius);
}

DistanceMatrix distance_matrix(std::span<const ProfileValues> profiles,
                               const DistanceMeasure& measure) {
    if (profiles.empty())
        throw std::invalid_argument("distance_matrix: empty profile list");
    DistanceMatrix m(profiles.size());
    for (std::size_t i = 0; i < profiles.size(); ++i)
        for (std::size_t j = i + 1; j < profiles.size(); ++j)
            m.set(i, j, profile_distance(measure, profiles[i], profiles[j]));
    return m;
}

} // namespace drseg
