#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "brillo/bus.hpp"

namespace brillo {

// Parses trace text back into messages. Throws DataError with the line
// number on malformed lines.
Trace trace_from_text(const std::string& text);

struct UserReport {
    std::string user_id;
    SimTime arrival;
    std::optional<SimTime> serving_start;
    std::optional<SimTime> wait;  // serving_start - arrival
    std::vector<std::string> drinks_served;
    std::optional<double> mean_engagement;
};

struct OrderReport {
    std::string order_id;
    std::string drink;
    std::optional<SimTime> makespan;  // last arm end - first arm start
};

struct RunReport {
    std::vector<UserReport> users;            // by first arrival
    std::vector<OrderReport> orders;          // by order id
    std::map<std::string, int> strategy_use;  // strategy label -> count
    int gestures_placed = 0;
    int gestures_dropped = 0;
    std::vector<std::string> transcript;      // "time speaker: text" lines

    std::string to_text() const;
};

// Pure function of the trace: consumes only delivered messages.
RunReport build_report(const Trace& trace);

}  // namespace brillo
