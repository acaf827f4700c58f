#include "drseg/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <stdexcept>

#include "drseg/csv.hpp"
#include "drseg/errors.hpp"

namespace drseg {

MeterSeries remove_outliers(const MeterSeries& series, const MeterMetadata& metadata,
                            const PreprocessConfig& config, PreprocessStats* stats) {
    if (!metadata.meter_id.empty() && metadata.meter_id != series.meter_id)
        throw std::invalid_argument("remove_outliers: metadata belongs to another meter");
    if (!config.outlier_enabled) return series;
    if (!metadata.contractual_power_kw && !metadata.production_power_kw) {
        if (stats) stats->outlier_filter_skipped = true;
        return series;
    }
    double limit = 0.0;
    if (metadata.contractual_power_kw) limit = std::max(limit, *metadata.contractual_power_kw);
    if (metadata.production_power_kw) limit = std::max(limit, *metadata.production_power_kw);

    MeterSeries out{series.meter_id, {}};
    out.samples.reserve(series.samples.size());
    for (const auto& s : series.samples) {
        if (std::abs(s.active_power_kw) > limit) {
            if (stats) stats->outliers_removed++;
        } else {
            out.samples.push_back(s);
        }
    }
    return out;
}

namespace {

bool in_night_window(HourStamp t, const PreprocessConfig& cfg) {
    const int h = hour_of_day(t);
    return h >= cfg.night_start_hour && h < cfg.night_end_hour;
}

} // namespace

MeterSeries impute_gaps(const MeterSeries& series, const PreprocessConfig& config,
                        PreprocessStats* stats) {
    MeterSeries out{series.meter_id, {}};
    out.samples.reserve(series.samples.size());
    for (std::size_t i = 0; i < series.samples.size(); ++i) {
        const MeterSample& next = series.samples[i];
        if (i == 0) {
            out.samples.push_back(next);
            continue;
        }
        const MeterSample prev = out.samples.back();
        const HourStamp gap_len = next.t - prev.t - 1;
        if (gap_len <= 0) {
            out.samples.push_back(next);
            continue;
        }
        bool night = true;
        for (HourStamp t = prev.t + 1; t < next.t && night; ++t)
            night = in_night_window(t, config);
        if (gap_len > config.max_gap_hours && !night) {
            out.samples.push_back(next); // non-imputable, leave hours missing
            continue;
        }
        if (prev.cumulative_energy_kwh && next.cumulative_energy_kwh) {
            // a sample at t covers the hour ending at t, so the energy delta
            // spans the missing hours plus the next observed hour
            const double delta = *next.cumulative_energy_kwh - *prev.cumulative_energy_kwh;
            const double per_hour = delta / static_cast<double>(gap_len + 1);
            for (HourStamp t = prev.t + 1; t < next.t; ++t) {
                const double cum =
                    *prev.cumulative_energy_kwh + per_hour * static_cast<double>(t - prev.t);
                out.samples.push_back(MeterSample{t, per_hour, cum});
            }
            MeterSample leveled = next;
            leveled.active_power_kw = per_hour;
            out.samples.push_back(leveled);
        } else {
            const double span = static_cast<double>(next.t - prev.t);
            for (HourStamp t = prev.t + 1; t < next.t; ++t) {
                const double frac = static_cast<double>(t - prev.t) / span;
                const double p =
                    prev.active_power_kw + (next.active_power_kw - prev.active_power_kw) * frac;
                out.samples.push_back(MeterSample{t, p, std::nullopt});
            }
            out.samples.push_back(next);
        }
        if (stats) {
            stats->gaps_imputed++;
            stats->hours_imputed += static_cast<std::size_t>(gap_len);
        }
    }
    return out;
}

std::vector<DailyProfile> extract_daily_profiles(const MeterSeries& series,
                                                 PreprocessStats* stats) {
    std::map<DayStamp, std::pair<ProfileValues, unsigned>> days; // values, hour mask
    for (const auto& s : series.samples) {
        auto& [values, mask] = days[day_of(s.t)];
        const int h = hour_of_day(s.t);
        values[static_cast<std::size_t>(h)] = s.active_power_kw;
        mask |= 1u << h;
    }
    std::vector<DailyProfile> profiles;
    profiles.reserve(days.size());
    constexpr unsigned kFullDay = 0xFFFFFFu;
    for (const auto& [date, entry] : days) {
        if (entry.second != kFullDay) {
            if (stats) stats->days_dropped++;
            continue;
        }
        bool finite = true;
        for (double v : entry.first) finite = finite && std::isfinite(v);
        if (!finite) {
            if (stats) stats->days_dropped++;
            continue;
        }
        profiles.push_back(DailyProfile{series.meter_id, date, entry.first, false});
        if (stats) stats->days_kept++;
    }
    return profiles;
}

DailyProfile normalize_profile(const DailyProfile& profile) {
    DailyProfile out = profile;
    double abs_sum = 0.0;
    for (double v : profile.values) abs_sum += std::abs(v);
    if (abs_sum > 0.0)
        for (double& v : out.values) v /= abs_sum;
    out.normalized = true;
    return out;
}

std::vector<DailyProfile> preprocess_meter(const MeterSeries& series,
                                           const MeterMetadata& metadata,
                                           const PreprocessConfig& config,
                                           PreprocessStats* stats) {
    const MeterSeries cleaned = remove_outliers(series, metadata, config, stats);
    const MeterSeries imputed = impute_gaps(cleaned, config, stats);
    auto profiles = extract_daily_profiles(imputed, stats);
    for (auto& p : profiles) p = normalize_profile(p);
    return profiles;
}

void write_profiles_csv(const std::filesystem::path& path,
                        std::span<const DailyProfile> profiles) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << "meter_id,date";
    for (int h = 0; h < 24; ++h) out << ",h" << (h < 10 ? "0" : "") << h;
    out << '\n';
    for (const auto& p : profiles) {
        out << p.meter_id << ',' << format_date(p.date);
        for (const double v : p.values) out << ',' << format_double(v);
        out << '\n';
    }
}

std::vector<DailyProfile> load_profiles_csv(const std::filesystem::path& path,
                                            bool normalized) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open profile file: " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw DataError("profile file is empty: " + path.string());
    std::vector<DailyProfile> profiles;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 26)
            throw DataError("profile line " + std::to_string(lineno) + ": expected 26 fields");
        DailyProfile p;
        p.meter_id = fields[0];
        const auto date = parse_date(fields[1]);
        if (!date)
            throw DataError("profile line " + std::to_string(lineno) + ": malformed date");
        p.date = *date;
        for (std::size_t h = 0; h < 24; ++h) {
            const auto v = parse_double(fields[h + 2]);
            if (!v)
                throw DataError("profile line " + std::to_string(lineno) +
                                ": malformed value in hour " + std::to_string(h));
            p.values[h] = *v;
        }
        p.normalized = normalized;
        profiles.push_back(std::move(p));
    }
    if (profiles.empty()) throw DataError("no profiles in " + path.string());
    return profiles;
}

} // namespace drseg
