#include "drseg/dr_engine.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "drseg/metrics.hpp"

namespace drseg {

const char* to_string(DominantLoadType t) {
    switch (t) {
        case DominantLoadType::residential: return "residential";
        case DominantLoadType::commercial: return "commercial";
        case DominantLoadType::mixed: return "mixed";
        case DominantLoadType::generation: return "generation";
        case DominantLoadType::inactive: return "inactive";
    }
    return "?";
}

const char* to_string(DrScheme s) {
    switch (s) {
        case DrScheme::tou: return "TOU";
        case DrScheme::cpp: return "CPP";
        case DrScheme::rtp: return "RTP";
    }
    return "?";
}

const char* to_string(PriceLevel p) {
    switch (p) {
        case PriceLevel::low: return "low";
        case PriceLevel::moderate: return "moderate";
        case PriceLevel::high: return "high";
    }
    return "?";
}

ClusterCharacter characterize_cluster(int cluster, const ProfileValues& centroid,
                                      std::span<const MeterMetadata> member_meters,
                                      double entropy, const DrRules& rules) {
    ClusterCharacter ch;
    ch.cluster = cluster;
    ch.entropy_label = discretize_entropy(entropy);

    const PeakVector peaks = detect_peaks(centroid, rules.peak_prominence);
    for (int h = 0; h < 24; ++h)
        if (peaks[static_cast<std::size_t>(h)]) ch.centroid_peak_hours.push_back(h);

    for (const int h : ch.centroid_peak_hours) {
        for (const auto& w : rules.rpf_windows) ch.rpf_contributor |= w.contains(h);
        ch.peak_hours_demand |= rules.peak_window.contains(h);
    }
    // sustained working-hours consumption also qualifies for peak shifting
    // into the 11:00-14:00 generation window
    double working = 0.0, remaining = 0.0;
    for (int h = 0; h < 24; ++h) {
        const double v = centroid[static_cast<std::size_t>(h)];
        if (h >= 7 && h < 19)
            working += v / 12.0;
        else
            remaining += v / 12.0;
    }
    if (working > rules.working_hours_ratio * remaining && working > 0.0)
        ch.rpf_contributor = true;

    std::size_t residential = 0, commercial = 0;
    for (const auto& m : member_meters) {
        if (m.load_type == LoadType::household)
            ++residential;
        else if (m.load_type != LoadType::unknown)
            ++commercial;
    }
    if (!member_meters.empty())
        ch.residential_share =
            static_cast<double>(residential) / static_cast<double>(member_meters.size());

    double sum = 0.0, sq = 0.0;
    for (const double v : centroid) {
        sum += v;
        sq += v * v;
    }
    const double mean = sum / 24.0;
    const double variance = sq / 24.0 - mean * mean;
    const bool no_peaks = ch.centroid_peak_hours.empty();

    const double commercial_share = member_meters.empty()
                                        ? 0.0
                                        : static_cast<double>(commercial) /
                                              static_cast<double>(member_meters.size());
    if (sum < 0.0) {
        ch.dominant_load_type = DominantLoadType::generation;
    } else if (no_peaks && std::sqrt(std::max(variance, 0.0)) < rules.inactive_std_max) {
        ch.dominant_load_type = DominantLoadType::inactive;
    } else if (ch.residential_share > rules.dominant_type_threshold) {
        ch.dominant_load_type = DominantLoadType::residential;
    } else if (commercial_share > rules.dominant_type_threshold) {
        ch.dominant_load_type = DominantLoadType::commercial;
    } else {
        ch.dominant_load_type = DominantLoadType::mixed;
    }
    return ch;
}

DrRecommendation recommend_schemes(const ClusterCharacter& ch) {
    DrRecommendation rec;
    rec.cluster = ch.cluster;
    if (!ch.rpf_contributor && !ch.peak_hours_demand) {
        rec.rationale.push_back(
            "R0: no peak in a shiftable or demand-peak window; not eligible for DR");
        return rec;
    }
    rec.schemes.push_back(DrScheme::tou);
    std::string why = "R1: TOU for every eligible cluster (";
    if (ch.rpf_contributor) why += "shiftable toward the 11:00-14:00 generation window";
    if (ch.rpf_contributor && ch.peak_hours_demand) why += "; ";
    if (ch.peak_hours_demand) why += "demand inside the evening peak window";
    rec.rationale.push_back(why + ")");

    const bool high_entropy =
        ch.entropy_label == EntropyLabel::high || ch.entropy_label == EntropyLabel::very_high;
    const bool residential_leaning =
        ch.dominant_load_type == DominantLoadType::residential ||
        (ch.dominant_load_type == DominantLoadType::mixed && ch.residential_share > 0.0);
    if (residential_leaning && high_entropy) {
        rec.schemes.push_back(DrScheme::cpp);
        rec.rationale.push_back("R2: CPP for residential-leaning clusters with high entropy");
    }
    if (high_entropy) {
        rec.schemes.push_back(DrScheme::rtp);
        rec.rationale.push_back("R3: RTP for high-entropy clusters (requires EMC equipment)");
    }
    rec.tou_schedule = tou_schedule();
    return rec;
}

std::vector<TouWindow> tou_schedule() {
    return {
        {0.0, 7.0, PriceLevel::low},      {7.0, 11.0, PriceLevel::moderate},
        {11.0, 14.0, PriceLevel::low},    {14.0, 17.0, PriceLevel::moderate},
        {17.0, 19.5, PriceLevel::high},   {19.5, 24.0, PriceLevel::moderate},
    };
}

PriceLevel tou_price_at(double hour_of_day) {
    if (hour_of_day < 0.0 || hour_of_day >= 24.0)
        throw std::invalid_argument("tou_price_at: hour out of range");
    for (const auto& w : tou_schedule())
        if (hour_of_day >= w.start_hour && hour_of_day < w.end_hour) return w.price;
    return PriceLevel::moderate; // unreachable; windows partition the day
}

double flexibility_index(double delta_energy_pct, double delta_price_pct) {
    if (delta_price_pct == 0.0)
        throw std::invalid_argument("flexibility_index: zero price delta");
    return -(delta_energy_pct / delta_price_pct);
}

std::string recommendations_to_json(std::span<const ClusterRecommendation> recs,
                                    std::span<const int> unpopulated_clusters) {
    nlohmann::ordered_json j;
    j["clusters"] = nlohmann::ordered_json::array();
    for (const auto& r : recs) {
        nlohmann::ordered_json e;
        e["cluster"] = r.character.cluster;
        e["character"] = {
            {"rpf_contributor", r.character.rpf_contributor},
            {"peak_hours_demand", r.character.peak_hours_demand},
            {"dominant_load_type", to_string(r.character.dominant_load_type)},
            {"residential_share", r.character.residential_share},
            {"entropy", r.entropy},
            {"entropy_label", to_string(r.character.entropy_label)},
            {"centroid_peak_hours", r.character.centroid_peak_hours},
        };
        e["schemes"] = nlohmann::ordered_json::array();
        for (const auto s : r.recommendation.schemes) e["schemes"].push_back(to_string(s));
        e["rationale"] = r.recommendation.rationale;
        if (!r.recommendation.tou_schedule.empty()) {
            e["tou_schedule"] = nlohmann::ordered_json::array();
            for (const auto& w : r.recommendation.tou_schedule)
                e["tou_schedule"].push_back({{"start_hour", w.start_hour},
                                             {"end_hour", w.end_hour},
                                             {"price", to_string(w.price)}});
        }
        j["clusters"].push_back(std::move(e));
    }
    if (!unpopulated_clusters.empty())
        j["unpopulated_clusters"] = unpopulated_clusters;
    return j.dump(2);
}

} // namespace drseg
