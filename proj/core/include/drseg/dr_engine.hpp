#pragma once

#include <span>
#include <string>
#include <vector>

#include "drseg/distance.hpp"
#include "drseg/entropy.hpp"
#include "drseg/ingest.hpp"

namespace drseg {

enum class DominantLoadType { residential, commercial, mixed, generation, inactive };
const char* to_string(DominantLoadType t);

/// Closed hour windows evaluated on integer peak hours. "8-10,15-17" covers
/// the same hours as [08:00,11:00) and (14:00,17:00].
struct HourWindow {
    double start = 0.0;
    double end = 0.0;
    bool contains(int hour) const { return hour >= start && hour <= end; }
};

struct DrRules {
    std::vector<HourWindow> rpf_windows{{8.0, 10.0}, {15.0, 17.0}}; // shiftable into 11-14
    HourWindow peak_window{17.0, 19.5};                             // evening demand peak
    double working_hours_ratio = 1.5;   // sustained working-hours consumption test
    double dominant_type_threshold = 0.6;
    double inactive_std_max = 0.01;     // on normalized profiles
    double peak_prominence = 0.2;
};

struct ClusterCharacter {
    int cluster = 0;
    bool rpf_contributor = false;
    bool peak_hours_demand = false;
    DominantLoadType dominant_load_type = DominantLoadType::mixed;
    double residential_share = 0.0; // fraction of member meters that are households
    EntropyLabel entropy_label = EntropyLabel::very_low;
    std::vector<int> centroid_peak_hours;
};

ClusterCharacter characterize_cluster(int cluster, const ProfileValues& centroid,
                                      std::span<const MeterMetadata> member_meters,
                                      double entropy, const DrRules& rules = {});

enum class DrScheme { tou = 1, cpp = 2, rtp = 3 };
const char* to_string(DrScheme s);

enum class PriceLevel { low, moderate, high };
const char* to_string(PriceLevel p);

struct TouWindow {
    double start_hour = 0.0; // [start, end) in decimal hours
    double end_hour = 0.0;
    PriceLevel price = PriceLevel::low;
};

struct DrRecommendation {
    int cluster = 0;
    std::vector<DrScheme> schemes;
    std::vector<std::string> rationale;
    std::vector<TouWindow> tou_schedule; // filled when TOU is recommended
};

/// Rules in order: ineligible clusters (no flag) get nothing; every eligible
/// cluster gets TOU; CPP added for residential-leaning clusters with
/// high/very high entropy; RTP added for high/very high entropy.
DrRecommendation recommend_schemes(const ClusterCharacter& character);

/// The fixed six-window day partition: cheap around the generation peak and
/// overnight, expensive over the evening demand peak.
std::vector<TouWindow> tou_schedule();

PriceLevel tou_price_at(double hour_of_day);

/// -%dE / %dp; positive when consumption falls as price rises.
double flexibility_index(double delta_energy_pct, double delta_price_pct);

struct ClusterRecommendation {
    ClusterCharacter character;
    DrRecommendation recommendation;
    double entropy = 0.0;
};

std::string recommendations_to_json(std::span<const ClusterRecommendation> recs,
                                    std::span<const int> unpopulated_clusters = {});

} // namespace drseg
