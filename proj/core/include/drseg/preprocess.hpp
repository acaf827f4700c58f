#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <span>
#include <vector>

#include "drseg/distance.hpp"
#include "drseg/ingest.hpp"
#include "drseg/timeaxis.hpp"

namespace drseg {

struct DailyProfile {
    std::string meter_id;
    DayStamp date = 0;
    ProfileValues values{}; // kW if raw, dimensionless if normalized
    bool normalized = false;
};

struct PreprocessConfig {
    bool outlier_enabled = true;
    int max_gap_hours = 2;
    int night_start_hour = 0; // night window [start, end), any gap length imputable
    int night_end_hour = 6;
};

struct PreprocessStats {
    std::size_t outliers_removed = 0;
    std::size_t gaps_imputed = 0;
    std::size_t hours_imputed = 0;
    std::size_t days_dropped = 0;
    std::size_t days_kept = 0;
    bool outlier_filter_skipped = false; // both power limits absent
};

/// Deletes samples with |active_power| above max(contractual, production).
/// With both limits absent the series passes through and the skip is flagged.
MeterSeries remove_outliers(const MeterSeries& series, const MeterMetadata& metadata,
                            const PreprocessConfig& config = {},
                            PreprocessStats* stats = nullptr);

/// Fills gaps of at most max_gap_hours, and night gaps of any length, between
/// two observed samples. With cumulative energy on both brackets the energy
/// delta is spread evenly over the missing hours plus the first following
/// observed hour (whose power is overwritten); otherwise the power is
/// linearly interpolated. Longer daytime gaps are left missing.
MeterSeries impute_gaps(const MeterSeries& series, const PreprocessConfig& config = {},
                        PreprocessStats* stats = nullptr);

/// One raw profile per calendar day with all 24 hourly values present.
std::vector<DailyProfile> extract_daily_profiles(const MeterSeries& series,
                                                 PreprocessStats* stats = nullptr);

/// Divides by the sum of absolute values; all-zero days pass through.
DailyProfile normalize_profile(const DailyProfile& profile);

/// remove_outliers + impute_gaps + extract + normalize for one meter.
std::vector<DailyProfile> preprocess_meter(const MeterSeries& series,
                                           const MeterMetadata& metadata,
                                           const PreprocessConfig& config = {},
                                           PreprocessStats* stats = nullptr);

/// Profile CSV: header `meter_id,date,h00..h23`, date `YYYY-MM-DD`. The
/// normalized flag is a property of the file, not a column; pass it on load.
void write_profiles_csv(const std::filesystem::path& path,
                        std::span<const DailyProfile> profiles);
std::vector<DailyProfile> load_profiles_csv(const std::filesystem::path& path,
                                            bool normalized);

} // namespace drseg
