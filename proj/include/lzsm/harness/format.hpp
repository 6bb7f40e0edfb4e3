#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace lzsm::harness {

// Locale-independent 17-significant-digit rendering (same digits as "%.17g").
inline std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 17);
    if (res.ec != std::errc()) return "nan";
    return std::string(buf, res.ptr);
}

}  // namespace lzsm::harness
