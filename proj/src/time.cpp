#include "brillo/time.hpp"

#include <cmath>
#include <cstdlib>

#include "brillo/error.hpp"

namespace brillo {

SimTime SimTime::from_seconds(double s) {
    return SimTime{static_cast<std::int64_t>(std::llround(s * 1000.0))};
}

SimTime SimTime::parse(std::string_view text) {
    if (text.empty()) throw DataError("empty time value");
    std::size_t i = 0;
    bool negative = false;
    if (text[i] == '-') {
        negative = true;
        ++i;
    }
    std::int64_t whole = 0;
    std::size_t digits = 0;
    for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++digits) {
        whole = whole * 10 + (text[i] - '0');
    }
    if (digits == 0) throw DataError("malformed time value '" + std::string(text) + "'");
    std::int64_t frac_ms = 0;
    if (i < text.size()) {
        if (text[i] != '.') throw DataError("malformed time value '" + std::string(text) + "'");
        ++i;
        std::size_t frac_digits = 0;
        std::int64_t frac = 0;
        for (; i < text.size() && text[i] >= '0' && text[i] <= '9'; ++i, ++frac_digits) {
            frac = frac * 10 + (text[i] - '0');
        }
        if (frac_digits == 0 || frac_digits > 3) {
            throw DataError("time value '" + std::string(text) +
                            "' must have 1-3 fractional digits");
        }
        for (std::size_t k = frac_digits; k < 3; ++k) frac *= 10;
        frac_ms = frac;
    }
    if (i != text.size()) throw DataError("malformed time value '" + std::string(text) + "'");
    std::int64_t ms = whole * 1000 + frac_ms;
    return SimTime{negative ? -ms : ms};
}

std::string SimTime::str() const {
    std::int64_t ms = ms_;
    bool negative = ms < 0;
    if (negative) ms = -ms;
    std::string out = negative ? "-" : "";
    out += std::to_string(ms / 1000);
    std::int64_t frac = ms % 1000;
    out += '.';
    out += static_cast<char>('0' + frac / 100);
    out += static_cast<char>('0' + (frac / 10) % 10);
    out += static_cast<char>('0' + frac % 10);
    return out;
}

}  // namespace brillo
