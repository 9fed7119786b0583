#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

namespace brillo {

// Simulated clock value. Fixed-point milliseconds so that ordering and
// arithmetic are exact; scenario files and traces use decimal seconds
// with at most three fractional digits.
class SimTime {
public:
    constexpr SimTime() = default;

    static constexpr SimTime from_ms(std::int64_t ms) { return SimTime{ms}; }
    static SimTime from_seconds(double s);

    // Parses "12", "12.5" or "12.500". Rejects more than three fractional
    // digits (sub-millisecond) and malformed text.
    static SimTime parse(std::string_view text);

    constexpr std::int64_t ms() const { return ms_; }
    double seconds() const { return static_cast<double>(ms_) / 1000.0; }

    // Canonical text form, always three fractional digits: "7.250".
    std::string str() const;

    constexpr auto operator<=>(const SimTime&) const = default;

    constexpr SimTime operator+(SimTime o) const { return SimTime{ms_ + o.ms_}; }
    constexpr SimTime operator-(SimTime o) const { return SimTime{ms_ - o.ms_}; }
    SimTime& operator+=(SimTime o) {
        ms_ += o.ms_;
        return *this;
    }

private:
    constexpr explicit SimTime(std::int64_t ms) : ms_(ms) {}
    std::int64_t ms_ = 0;
};

}  // namespace brillo
