#pragma once

#include <stdexcept>
#include <string>

namespace drseg {

/// Problems with input data content (missing files, malformed rows,
/// contract violations in datasets). The CLI maps these to exit code 2.
class DataError : public std::runtime_error {
public:
    explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace drseg
