#include "drseg/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <set>
#include <unordered_map>

#include <nlohmann/json.hpp>

#include "drseg/csv.hpp"
#include "drseg/errors.hpp"
#include "drseg/preprocess.hpp"

namespace drseg {

const char* to_string(LoadType t) {
    switch (t) {
        case LoadType::household: return "household";
        case LoadType::company: return "company";
        case LoadType::university: return "university";
        case LoadType::pool: return "pool";
        case LoadType::pump: return "pump";
        case LoadType::ev_charger: return "ev_charger";
        case LoadType::substation: return "substation";
        case LoadType::unknown: return "unknown";
    }
    return "?";
}

LoadType load_type_from_string(std::string_view name, bool* recognised) {
    std::string lower;
    lower.reserve(name.size());
    for (char c : name) lower.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    if (recognised) *recognised = true;
    if (lower == "household") return LoadType::household;
    if (lower == "company") return LoadType::company;
    if (lower == "university") return LoadType::university;
    if (lower == "pool") return LoadType::pool;
    if (lower == "pump") return LoadType::pump;
    if (lower == "ev_charger" || lower == "electric vehicle charging station")
        return LoadType::ev_charger;
    if (lower == "substation") return LoadType::substation;
    if (lower == "unknown" || lower == "-" || lower.empty()) return LoadType::unknown;
    if (recognised) *recognised = false;
    return LoadType::unknown;
}

namespace {

std::ifstream open_or_throw(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open file: " + path.string());
    return in;
}

bool header_matches(const std::vector<std::string>& fields,
                    const std::vector<std::string_view>& expected) {
    if (fields.size() != expected.size()) return false;
    for (std::size_t i = 0; i < fields.size(); ++i)
        if (fields[i] != expected[i]) return false;
    return true;
}

} // namespace

std::vector<MeterSeries> load_measurements(const std::filesystem::path& path,
                                           MeasurementLoadStats* stats) {
    auto in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line))
        throw DataError("measurement file is empty: " + path.string());
    if (!header_matches(split_csv_line(line),
                        {"meter_id", "timestamp", "active_power_kw", "cumulative_energy_kwh"}))
        throw DataError("malformed measurement header in " + path.string());

    MeasurementLoadStats local;
    MeasurementLoadStats& s = stats ? *stats : local;

    // last occurrence in file order wins for duplicate (meter, timestamp)
    std::unordered_map<std::string, std::unordered_map<HourStamp, MeterSample>> by_meter;
    while (std::getline(in, line)) {
        if (trim(line).empty()) continue;
        ++s.rows_total;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4) {
            ++s.rows_skipped;
            continue;
        }
        const auto t = parse_hour_stamp(fields[1]);
        const auto power = parse_double(fields[2]);
        if (fields[0].empty() || !t || !power) {
            ++s.rows_skipped;
            continue;
        }
        MeterSample sample{*t, *power, parse_double(fields[3])};
        auto& samples = by_meter[fields[0]];
        if (!samples.emplace(*t, sample).second) {
            samples[*t] = sample;
            ++s.duplicates;
        }
    }
    if (by_meter.empty())
        throw DataError("zero parseable rows in " + path.string());

    std::vector<MeterSeries> result;
    result.reserve(by_meter.size());
    for (auto& [id, samples] : by_meter) {
        MeterSeries series{id, {}};
        series.samples.reserve(samples.size());
        for (auto& [t, sample] : samples) series.samples.push_back(sample);
        std::sort(series.samples.begin(), series.samples.end(),
                  [](const MeterSample& a, const MeterSample& b) { return a.t < b.t; });
        // enforce non-decreasing cumulative energy by dropping violating values
        double max_seen = -std::numeric_limits<double>::infinity();
        for (auto& sample : series.samples) {
            if (!sample.cumulative_energy_kwh) continue;
            if (*sample.cumulative_energy_kwh < max_seen) {
                sample.cumulative_energy_kwh.reset();
                ++s.cumulative_dropped;
            } else {
                max_seen = *sample.cumulative_energy_kwh;
            }
        }
        result.push_back(std::move(series));
    }
    std::sort(result.begin(), result.end(),
              [](const MeterSeries& a, const MeterSeries& b) { return a.meter_id < b.meter_id; });
    if (s.cumulative_dropped > 0)
        s.warnings.push_back(std::to_string(s.cumulative_dropped) +
                             " cumulative energy values dropped (non-monotonic)");
    return result;
}

std::vector<MeterMetadata> load_metadata(const std::filesystem::path& path,
                                         std::vector<std::string>* warnings) {
    auto in = open_or_throw(path);
    std::string line;
    if (!std::getline(in, line))
        throw DataError("metadata file is empty: " + path.string());
    if (!header_matches(split_csv_line(line),
                        {"meter_id", "contractual_power_kw", "production_kw", "type"}))
        throw DataError("malformed metadata header in " + path.string());

    const auto parse_power = [&](const std::string& field,
                                 const std::string& id) -> std::optional<double> {
        if (field == "-" || field.empty()) return std::nullopt;
        const auto v = parse_double(field);
        if (!v) throw DataError("meter " + id + ": unparseable power value: " + field);
        if (*v < 0) throw DataError("meter " + id + ": negative power value: " + field);
        return v;
    };

    std::vector<MeterMetadata> result;
    std::set<std::string> seen;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        const auto fields = split_csv_line(line);
        if (fields.size() != 4 || fields[0].empty())
            throw DataError("metadata line " + std::to_string(lineno) + ": expected 4 fields");
        if (!seen.insert(fields[0]).second)
            throw DataError("duplicate meter_id in metadata: " + fields[0]);
        MeterMetadata m;
        m.meter_id = fields[0];
        m.contractual_power_kw = parse_power(fields[1], m.meter_id);
        m.production_power_kw = parse_power(fields[2], m.meter_id);
        bool recognised = true;
        m.load_type = load_type_from_string(fields[3], &recognised);
        if (!recognised && warnings)
            warnings->push_back("meter " + m.meter_id + ": unknown load type '" + fields[3] +
                                "', treated as unknown");
        result.push_back(std::move(m));
    }
    return result;
}

ValidationReport validate_dataset(const std::vector<MeterSeries>& series,
                                  const std::vector<MeterMetadata>& metadata,
                                  std::size_t min_days) {
    if (min_days < 1) throw std::invalid_argument("validate_dataset: min_days must be >= 1");

    std::unordered_map<std::string, const MeterMetadata*> meta_by_id;
    for (const auto& m : metadata) meta_by_id[m.meter_id] = &m;

    ValidationReport report;
    for (const auto& s : series) {
        auto& counts = report.counts[s.meter_id];
        for (const auto& sample : s.samples) {
            const DayStamp day = day_of(sample.t);
            counts.by_month[static_cast<std::size_t>(civil_from_days(day).month - 1)]++;
            counts.by_weekday_hour[static_cast<std::size_t>(weekday(day))]
                                  [static_cast<std::size_t>(hour_of_day(sample.t))]++;
            counts.total_samples++;
        }

        const auto meta_it = meta_by_id.find(s.meter_id);
        if (meta_it == meta_by_id.end()) {
            report.rejected.emplace_back(s.meter_id, "no metadata");
            continue;
        }
        const MeterSeries cleaned = remove_outliers(s, *meta_it->second);
        const MeterSeries imputed = impute_gaps(cleaned);
        counts.complete_days = extract_daily_profiles(imputed).size();
        if (counts.complete_days < min_days)
            report.rejected.emplace_back(s.meter_id, "insufficient days");
        else
            report.accepted.push_back(s.meter_id);
    }
    return report;
}

void write_measurements_csv(const std::filesystem::path& path,
                            std::span<const MeterSeries> series) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << "meter_id,timestamp,active_power_kw,cumulative_energy_kwh\n";
    for (const auto& s : series)
        for (const auto& sample : s.samples) {
            out << s.meter_id << ',' << format_hour_stamp(sample.t) << ','
                << format_double(sample.active_power_kw) << ',';
            if (sample.cumulative_energy_kwh)
                out << format_double(*sample.cumulative_energy_kwh);
            out << '\n';
        }
}

void write_metadata_csv(const std::filesystem::path& path,
                        std::span<const MeterMetadata> metadata) {
    std::ofstream out(path);
    if (!out) throw DataError("cannot write file: " + path.string());
    out << "meter_id,contractual_power_kw,production_kw,type\n";
    for (const auto& m : metadata) {
        out << m.meter_id << ',';
        out << (m.contractual_power_kw ? format_double(*m.contractual_power_kw) : "-") << ',';
        out << (m.production_power_kw ? format_double(*m.production_power_kw) : "-") << ',';
        out << to_string(m.load_type) << '\n';
    }
}

std::string to_json(const ValidationReport& report) {
    nlohmann::ordered_json j;
    j["accepted"] = report.accepted;
    j["rejected"] = nlohmann::ordered_json::array();
    for (const auto& [id, reason] : report.rejected)
        j["rejected"].push_back({{"meter_id", id}, {"reason", reason}});
    auto& meters = j["meters"];
    for (const auto& [id, c] : report.counts) {
        nlohmann::ordered_json m;
        m["total_samples"] = c.total_samples;
        m["complete_days"] = c.complete_days;
        m["samples_by_month"] = c.by_month;
        m["samples_by_weekday_hour"] = c.by_weekday_hour;
        meters[id] = std::move(m);
    }
    return j.dump(2);
}

} // namespace drseg
