#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>

namespace mono {

// Malformed or inconsistent input data (files, tables, vectors).
struct DataError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Caller misuse: bad arguments, missing required inputs.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// 6 significant digits, the table/vector-file number rendering.
inline std::string fmt_sig6(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Full-precision rendering for matrix persistence.
inline std::string fmt_full(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

}  // namespace mono
