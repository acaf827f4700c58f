#pragma once

#include <cstdint>
#include <random>

#include "drseg/distance.hpp"
#include "drseg/preprocess.hpp"

namespace drseg::testutil {

inline double unit(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline ProfileValues random_profile(std::mt19937_64& rng, double scale = 1.0) {
    ProfileValues v{};
    for (double& x : v) x = unit(rng) * scale;
    return v;
}

inline ProfileValues impulse(int hour, double height = 1.0) {
    ProfileValues v{};
    v[static_cast<std::size_t>(hour)] = height;
    return v;
}

inline DailyProfile make_profile(std::string meter, DayStamp date, const ProfileValues& values,
                                 bool normalized = false) {
    DailyProfile p;
    p.meter_id = std::move(meter);
    p.date = date;
    p.values = values;
    p.normalized = normalized;
    return p;
}

} // namespace drseg::testutil
