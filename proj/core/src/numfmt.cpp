#include "odeid/numfmt.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

namespace odeid {

std::string format_full(double value) {
    char buf[64];
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc()) {
        std::snprintf(buf, sizeof(buf), "%.17g", value);
        return buf;
    }
    return std::string(buf, end);
}

std::string fortran_d(double value, int significant_digits) {
    if (significant_digits < 1) significant_digits = 1;
    char buf[64];
    // print in C scientific form, then shift to the 0.xxx mantissa convention
    std::snprintf(buf, sizeof(buf), "%.*e", significant_digits - 1, std::abs(value));
    std::string s(buf);
    auto epos = s.find('e');
    std::string mantissa = s.substr(0, epos);
    int exponent = std::atoi(s.c_str() + epos + 1);

    std::string digits;
    for (char c : mantissa)
        if (c != '.') digits.push_back(c);
    // rounding may carry into an extra digit ("9.99" -> "10.0")
    if (static_cast<int>(digits.size()) > significant_digits) {
        digits.pop_back();
        ++exponent;
    }
    if (value != 0.0 && std::isfinite(value)) ++exponent;  // x.yz -> 0.xyz

    std::string out = value < 0 ? "-0." : "0.";
    out += digits;
    char tail[8];
    std::snprintf(tail, sizeof(tail), "D%+03d", (value == 0.0 ? 0 : exponent));
    return out + tail;
}

} // namespace odeid
