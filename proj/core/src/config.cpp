#include "drseg/config.hpp"

#include <fstream>
#include <sstream>

#include "drseg/csv.hpp"
#include "drseg/errors.hpp"

namespace drseg {

Config Config::from_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file: " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return from_string(buf.str());
}

Config Config::from_string(std::string_view text) {
    Config cfg;
    std::size_t pos = 0;
    int lineno = 0;
    while (pos <= text.size()) {
        const std::size_t nl = text.find('\n', pos);
        std::string_view line =
            text.substr(pos, nl == std::string_view::npos ? text.size() - pos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++lineno;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string_view::npos)
            throw DataError("config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key{trim(line.substr(0, eq))};
        if (key.empty())
            throw DataError("config line " + std::to_string(lineno) + ": empty key");
        cfg.values_[key] = std::string{trim(line.substr(eq + 1))};
    }
    return cfg;
}

std::optional<std::string> Config::get(const std::string& key) const {
    const auto it = values_.find(key);
    if (it == values_.end()) return std::nullopt;
    return it->second;
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
    const auto v = get(key);
    return v ? *v : fallback;
}

double Config::get_double(const std::string& key, double fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    const auto d = parse_double(*v);
    if (!d) throw DataError("config key '" + key + "': not a number: " + *v);
    return *d;
}

int Config::get_int(const std::string& key, int fallback) const {
    const double d = get_double(key, fallback);
    const int i = static_cast<int>(d);
    if (static_cast<double>(i) != d)
        throw DataError("config key '" + key + "': not an integer");
    return i;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
    const auto v = get(key);
    if (!v) return fallback;
    if (*v == "true" || *v == "1" || *v == "yes" || *v == "on") return true;
    if (*v == "false" || *v == "0" || *v == "no" || *v == "off") return false;
    throw DataError("config key '" + key + "': not a boolean: " + *v);
}

} // namespace drseg
