// Shared basic types, error hierarchy and clamped log helpers.

#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nrs {

using NodeId = std::int32_t;
using Round = std::int32_t;   // 1-based protocol / simulation round index
using Payload = std::string;  // opaque bounded byte string

// Invalid parameters, bad CLI/config combinations.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

// A protocol action function failed; carries the offending round.
class ProtocolError : public std::runtime_error {
public:
    ProtocolError(Round round, const std::string& what)
        : std::runtime_error("round " + std::to_string(round) + ": " + what), round_(round) {}
    Round round() const { return round_; }

private:
    Round round_;
};

// Schedule derivation found an input-dependent receive pattern.
class NotStaticError : public std::runtime_error {
public:
    explicit NotStaticError(const std::string& what) : std::runtime_error(what) {}
};

// A virtual round fell outside the [L-Q, L] search window (oracle mode only).
class WindowError : public std::runtime_error {
public:
    explicit WindowError(const std::string& what) : std::runtime_error(what) {}
};

// Token store lacks an entry the reconstruction needs.
class IncompleteHistoryError : public std::runtime_error {
public:
    explicit IncompleteHistoryError(const std::string& what) : std::runtime_error(what) {}
};

// ceil(log2(x)) clamped to >= 1; log factors in loop lengths must never vanish.
inline int lg2_clamped(std::int64_t x) {
    if (x <= 2) return 1;
    int bits = 0;
    std::int64_t v = x - 1;
    while (v > 0) {
        v >>= 1;
        ++bits;
    }
    return bits;
}

// max(1, ceil(log2(max(2, log2(max(2, log2(n))))))), the log log log factor.
inline int lglglg_clamped(std::int64_t n) {
    double l1 = n > 1 ? std::log2(static_cast<double>(n)) : 0.0;
    double l2 = std::log2(std::max(2.0, l1));
    double l3 = std::log2(std::max(2.0, l2));
    int r = static_cast<int>(std::ceil(l3 - 1e-12));
    return r < 1 ? 1 : r;
}

// max(1, ceil(ln n)); clamped so windows stay non-degenerate at n = 1.
inline int ln_ceil_clamped(std::int64_t n) {
    if (n <= 2) return 1;
    int r = static_cast<int>(std::ceil(std::log(static_cast<double>(n)) - 1e-12));
    return r < 1 ? 1 : r;
}

}  // namespace nrs
