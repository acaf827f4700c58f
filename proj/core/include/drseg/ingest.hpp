#pragma once

#include <array>
#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "drseg/timeaxis.hpp"

namespace drseg {

enum class LoadType {
    household,
    company,
    university,
    pool,
    pump,
    ev_charger,
    substation,
    unknown
};

const char* to_string(LoadType t);
/// Case-insensitive; "-" and unrecognised strings map to unknown (the latter
/// flagged through the warning flag below).
LoadType load_type_from_string(std::string_view name, bool* recognised = nullptr);

struct MeterMetadata {
    std::string meter_id;
    std::optional<double> contractual_power_kw;
    std::optional<double> production_power_kw;
    LoadType load_type = LoadType::unknown;
};

struct MeterSample {
    HourStamp t = 0;                              // hour-aligned naive local time
    double active_power_kw = 0.0;                 // negative = net generation
    std::optional<double> cumulative_energy_kwh;  // non-decreasing where present
};

struct MeterSeries {
    std::string meter_id;
    std::vector<MeterSample> samples; // strictly increasing t
};

struct MeasurementLoadStats {
    std::size_t rows_total = 0;       // data rows seen (excl. header)
    std::size_t rows_skipped = 0;     // unparseable timestamp or power
    std::size_t duplicates = 0;       // (meter, timestamp) collisions; last kept
    std::size_t cumulative_dropped = 0; // values violating monotonicity
    std::vector<std::string> warnings;
};

/// Measurement CSV: header `meter_id,timestamp,active_power_kw,cumulative_energy_kwh`,
/// timestamp `YYYY-MM-DDTHH:00:00`, empty cell = missing. Output is sorted by
/// meter id and timestamp.
std::vector<MeterSeries> load_measurements(const std::filesystem::path& path,
                                           MeasurementLoadStats* stats = nullptr);

/// Metadata CSV: header `meter_id,contractual_power_kw,production_kw,type`,
/// "-" (or empty) = absent.
std::vector<MeterMetadata> load_metadata(const std::filesystem::path& path,
                                         std::vector<std::string>* warnings = nullptr);

struct ValidationReport {
    struct MeterCounts {
        std::array<std::size_t, 12> by_month{};                   // calendar month 1..12
        std::array<std::array<std::size_t, 24>, 7> by_weekday_hour{}; // 0 = Monday
        std::size_t total_samples = 0;
        std::size_t complete_days = 0; // days surviving preprocessing
    };
    std::vector<std::string> accepted;
    std::vector<std::pair<std::string, std::string>> rejected; // (meter_id, reason)
    std::map<std::string, MeterCounts> counts;
};

/// Rejects meters with no metadata row or fewer than `min_days` complete days
/// after outlier removal and imputation. Report-only; never throws on content.
ValidationReport validate_dataset(const std::vector<MeterSeries>& series,
                                  const std::vector<MeterMetadata>& metadata,
                                  std::size_t min_days = 30);

std::string to_json(const ValidationReport& report);

// Round-trip writers for the two CSV formats above.
void write_measurements_csv(const std::filesystem::path& path,
                            std::span<const MeterSeries> series);
void write_metadata_csv(const std::filesystem::path& path,
                        std::span<const MeterMetadata> metadata);

} // namespace drseg
