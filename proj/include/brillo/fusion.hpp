#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "brillo/domain.hpp"
#include "brillo/time.hpp"

namespace brillo {

// Word-list sentiment classifier standing in for the cloud service.
class Lexicon {
public:
    static Lexicon load(const std::string& positive_path, const std::string& negative_path);
    static Lexicon from_words(std::vector<std::string> positive,
                              std::vector<std::string> negative);

    // Sign of (positive hits - negative hits); zero hits read as neutral.
    Sentiment sentiment(const std::string& text) const;

private:
    std::set<std::string> positive_;
    std::set<std::string> negative_;
};

struct FusionWeights {
    double pose = 1.0;
    double valence = 1.0;
    double mood = 1.0;
    double sentiment = 1.0;
};

struct EngagementEstimate {
    double score = 0.0;                       // weighted mean of present components
    std::map<std::string, double> components; // normalized per-signal values
    SimTime at;
};

// Normalizations into [0,1]:
//   valence v -> (v+1)/2
//   mood: pacey 0.8, neutral 0.5, calm 0.4
//   sentiment: positive 1, neutral 0.5, negative 0
// Absent components are excluded and the weights renormalized. At least one
// component must be present and carry positive weight.
EngagementEstimate fuse(std::optional<double> pose, std::optional<double> valence,
                        std::optional<VoiceMood> mood, std::optional<Sentiment> sentiment,
                        const FusionWeights& weights, SimTime at = SimTime{});

inline constexpr double kDefaultEngagementThreshold = 0.4;

// Strict comparison so a zero threshold disables the behavior.
bool is_low_engagement(const EngagementEstimate& e,
                       double threshold = kDefaultEngagementThreshold);

double mood_component(VoiceMood mood);
double sentiment_component(Sentiment s);

}  // namespace brillo
