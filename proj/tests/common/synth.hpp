#pragma once

// Synthetic smart-meter community generator: writes measurement and metadata
// CSVs in the ingest formats, with seeded gaps, outliers and duplicates.

#include <cstdint>
#include <filesystem>
#include <string>

namespace drseg::synth {

struct CommunitySpec {
    int meters = 50;
    int days = 365 * 3;
    int start_year = 2019;
    std::uint64_t seed = 1;
    double gap_rate = 0.01;      // chance a day gets a short daytime gap
    double night_gap_rate = 0.02;
    double long_gap_rate = 0.005; // 3+ daytime hours; the day should drop
    double outlier_rate = 0.001;  // per sample, power beyond the contract
    double duplicate_rate = 0.0005;
};

void write_community(const std::filesystem::path& measurements_csv,
                     const std::filesystem::path& metadata_csv, const CommunitySpec& spec);

} // namespace drseg::synth
