#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace drseg {

/// One daily load profile as a bare value vector, hour 0..23.
using ProfileValues = std::array<double, 24>;

enum class DistanceKind { euclidean, dtw_constrained };

struct DistanceMeasure {
    DistanceKind kind = DistanceKind::euclidean;
    int sakoe_chiba_radius = 1; // only meaningful for dtw_constrained

    static DistanceMeasure euclid() { return {DistanceKind::euclidean, 0}; }
    static DistanceMeasure dtw(int radius = 1) {
        return {DistanceKind::dtw_constrained, radius};
    }
    bool operator==(const DistanceMeasure&) const = default;
};

const char* to_string(DistanceKind kind);
DistanceKind distance_kind_from_string(std::string_view name);

double euclidean(std::span<const double> a, std::span<const double> b);

/// Banded DTW over equal-length series: local cost (a_i - b_j)^2, steps
/// diagonal/horizontal/vertical, band |i - j| <= radius, endpoints pinned.
/// Returns the square root of the accumulated cost so that radius 0 equals
/// the euclidean distance and both measures share a scale.
double dtw_constrained(std::span<const double> a, std::span<const double> b, int radius);

double profile_distance(const DistanceMeasure& m, std::span<const double> a,
                        std::span<const double> b);

/// Dense symmetric pairwise matrix with zero diagonal.
class DistanceMatrix {
public:
    DistanceMatrix() = default;
    explicit DistanceMatrix(std::size_t n) : n_(n), d_(n * n, 0.0) {}

    std::size_t size() const { return n_; }
    double operator()(std::size_t i, std::size_t j) const { return d_[i * n_ + j]; }
    void set(std::size_t i, std::size_t j, double v) {
        d_[i * n_ + j] = v;
        d_[j * n_ + i] = v;
    }

private:
    std::size_t n_ = 0;
    std::vector<double> d_;
};

DistanceMatrix distance_matrix(std::span<const ProfileValues> profiles,
                               const DistanceMeasure& measure);

} // namespace drseg
