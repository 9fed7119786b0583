#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "brillo/bus.hpp"
#include "brillo/events.hpp"
#include "brillo/rng.hpp"
#include "brillo/time.hpp"

namespace brillo {

// One scripted event: either a percept or a kiosk registration.
struct ScenarioEvent {
    SimTime at;
    std::optional<PerceptEvent> percept;
    std::optional<RegistrationEvent> registration;
};

// Validated timed event list plus the user cast it may reference.
struct Scenario {
    std::vector<std::string> users;  // declaration order
    std::vector<ScenarioEvent> events;  // file order; times validated non-negative
};

// Plain-text scenario format, one event per line:
//   user <user_id>
//   t=<seconds> <kind> <user_id> <key=value ...>
// `#` starts a comment. Utterance lines carry text="..." intent=<label>.
Scenario script_load(const std::string& path);
Scenario scenario_from_text(const std::string& text, const std::string& origin = "<memory>");

// Intent misclassification channel calibrated from published recall rates.
// A true intent survives with probability recall[intent]; otherwise a
// uniformly chosen different intent is reported. Confidence is drawn
// uniformly from confidence_range.
class ConfusionChannel {
public:
    ConfusionChannel(std::map<Intent, double> recall, double confidence_lo, double confidence_hi,
                     std::uint64_t seed);

    // Default channel: the published per-intent recall table, the
    // configured fallback for the one intent without a published row,
    // confidence uniform in [0.5, 1].
    static ConfusionChannel with_default_recall(std::uint64_t seed,
                                                double delete_order_recall = 0.9);

    std::pair<Intent, double> corrupt_intent(Intent true_intent);

    double recall(Intent i) const;

private:
    std::map<Intent, double> recall_;
    double confidence_lo_;
    double confidence_hi_;
    Rng rng_;
};

// Publishes every scenario event at its scripted time: user-seen/user-lost
// on /users, registrations on /registration, everything else on /percepts.
// Utterances pass through the channel when one is given.
void emit(const Scenario& scenario, Bus& bus, ConfusionChannel* channel);

}  // namespace brillo
