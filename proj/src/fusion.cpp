#include "brillo/fusion.hpp"

#include <cctype>
#include <fstream>
#include <set>
#include <vector>

#include "brillo/error.hpp"
#include "brillo/text.hpp"

namespace brillo {

namespace {

std::set<std::string> load_words(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open lexicon file '" + path + "'");
    std::set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        auto word = trim(line);
        if (word.empty() || word.front() == '#') continue;
        words.insert(to_lower(word));
    }
    return words;
}

}  // namespace

Lexicon Lexicon::load(const std::string& positive_path, const std::string& negative_path) {
    Lexicon lex;
    lex.positive_ = load_words(positive_path);
    lex.negative_ = load_words(negative_path);
    return lex;
}

Lexicon Lexicon::from_words(std::vector<std::string> positive, std::vector<std::string> negative) {
    Lexicon lex;
    for (auto& w : positive) lex.positive_.insert(to_lower(w));
    for (auto& w : negative) lex.negative_.insert(to_lower(w));
    return lex;
}

Sentiment Lexicon::sentiment(const std::string& text) const {
    if (trim(text).empty()) throw Error("cannot score empty text");
    int balance = 0;
    std::string word;
    auto flush = [&] {
        if (word.empty()) return;
        if (positive_.count(word)) ++balance;
        if (negative_.count(word)) --balance;
        word.clear();
    };
    for (char c : text) {
        if (std::isalnum(static_cast<unsigned char>(c)) || c == '\'') {
            word += static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        } else {
            flush();
        }
    }
    flush();
    if (balance > 0) return Sentiment::Positive;
    if (balance < 0) return Sentiment::Negative;
    return Sentiment::Neutral;
}

double mood_component(VoiceMood mood) {
    switch (mood) {
        case VoiceMood::Pacey:
            return 0.8;
        case VoiceMood::Neutral:
            return 0.5;
        case VoiceMood::Calm:
            return 0.4;
    }
    return 0.5;
}

double sentiment_component(Sentiment s) {
    switch (s) {
        case Sentiment::Positive:
            return 1.0;
        case Sentiment::Neutral:
            return 0.5;
        case Sentiment::Negative:
            return 0.0;
    }
    return 0.5;
}

EngagementEstimate fuse(std::optional<double> pose, std::optional<double> valence,
                        std::optional<VoiceMood> mood, std::optional<Sentiment> sentiment,
                        const FusionWeights& weights, SimTime at) {
    if (weights.pose < 0 || weights.valence < 0 || weights.mood < 0 || weights.sentiment < 0) {
        throw Error("fusion weights must be non-negative");
    }
    EngagementEstimate e;
    e.at = at;
    double weighted_sum = 0.0;
    double weight_sum = 0.0;
    auto take = [&](const char* name, double value, double weight) {
        e.components[name] = value;
        weighted_sum += weight * value;
        weight_sum += weight;
    };
    if (pose) {
        if (*pose < 0.0 || *pose > 1.0) throw Error("pose engagement outside [0,1]");
        take("pose", *pose, weights.pose);
    }
    if (valence) {
        if (*valence < -1.0 || *valence > 1.0) throw Error("valence outside [-1,1]");
        take("valence", (*valence + 1.0) / 2.0, weights.valence);
    }
    if (mood) take("mood", mood_component(*mood), weights.mood);
    if (sentiment) take("sentiment", sentiment_component(*sentiment), weights.sentiment);
    if (e.components.empty()) throw Error("fuse needs at least one component");
    if (weight_sum <= 0.0) throw Error("present components carry zero total weight");
    e.score = weighted_sum / weight_sum;
    return e;
}

bool is_low_engagement(const EngagementEstimate& e, double threshold) {
    return e.score < threshold;
}

}  // namespace brillo
