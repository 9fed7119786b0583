#include "brillo/config.hpp"

#include <filesystem>
#include <fstream>
#include <map>

#include "brillo/error.hpp"
#include "brillo/text.hpp"

namespace brillo {

namespace {

bool parse_bool(const std::string& raw, const std::string& key) {
    if (raw == "true" || raw == "1" || raw == "yes" || raw == "on") return true;
    if (raw == "false" || raw == "0" || raw == "no" || raw == "off") return false;
    throw DataError("bad boolean '" + raw + "' for key '" + key + "'");
}

double parse_num(const std::string& raw, const std::string& key) {
    try {
        std::size_t pos = 0;
        double v = std::stod(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw DataError("bad number '" + raw + "' for key '" + key + "'");
    }
}

}  // namespace

void RunConfig::rebase_paths(const std::string& base_dir) {
    auto rebase = [&](std::string& path) {
        if (path.empty()) return;
        std::filesystem::path p(path);
        if (p.is_relative()) path = (std::filesystem::path(base_dir) / p).string();
    };
    rebase(graph_path);
    rebase(profiles_path);
    rebase(recipes_path);
    rebase(rules_path);
    rebase(corpus_path);
    rebase(positive_lexicon_path);
    rebase(negative_lexicon_path);
    rebase(news_path);
    rebase(utilities_path);
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open config file '" + path + "'");
    RunConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        auto eq = trimmed.find('=');
        if (eq == std::string_view::npos) {
            throw DataError(path + ":" + std::to_string(line_no) + ": expected key=value");
        }
        std::string key(trim(trimmed.substr(0, eq)));
        std::string value(trim(trimmed.substr(eq + 1)));

        if (key == "graph_path") cfg.graph_path = value;
        else if (key == "profiles_path") cfg.profiles_path = value;
        else if (key == "recipes_path") cfg.recipes_path = value;
        else if (key == "rules_path") cfg.rules_path = value;
        else if (key == "corpus_path") cfg.corpus_path = value;
        else if (key == "positive_lexicon_path") cfg.positive_lexicon_path = value;
        else if (key == "negative_lexicon_path") cfg.negative_lexicon_path = value;
        else if (key == "news_path") cfg.news_path = value;
        else if (key == "utilities_path") cfg.utilities_path = value;
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_num(value, key));
        else if (key == "noise_enabled") cfg.noise_enabled = parse_bool(value, key);
        else if (key == "trace_path") cfg.trace_path = value;
        else if (key == "delete_order_recall") cfg.delete_order_recall = parse_num(value, key);
        else if (key == "confidence_lo") cfg.confidence_lo = parse_num(value, key);
        else if (key == "confidence_hi") cfg.confidence_hi = parse_num(value, key);
        else if (key == "cr_threshold") cfg.cr_threshold = parse_num(value, key);
        else if (key == "engagement_threshold") cfg.engagement_threshold = parse_num(value, key);
        else if (key == "optimistic_missing_rating")
            cfg.optimistic_missing_rating = parse_bool(value, key);
        else if (key == "weight_wait") cfg.weight_wait = parse_num(value, key);
        else if (key == "weight_group") cfg.weight_group = parse_num(value, key);
        else if (key == "weight_arrival") cfg.weight_arrival = parse_num(value, key);
        else if (key == "attention_bonus") cfg.attention_bonus = parse_num(value, key);
        else if (key == "fusion_weight_pose") cfg.fusion_weight_pose = parse_num(value, key);
        else if (key == "fusion_weight_valence") cfg.fusion_weight_valence = parse_num(value, key);
        else if (key == "fusion_weight_mood") cfg.fusion_weight_mood = parse_num(value, key);
        else if (key == "fusion_weight_sentiment")
            cfg.fusion_weight_sentiment = parse_num(value, key);
        else if (key == "arms") cfg.arms = static_cast<int>(parse_num(value, key));
        else if (key == "greet_delay") cfg.greet_delay = parse_num(value, key);
        else if (key == "confirm_grace") cfg.confirm_grace = parse_num(value, key);
        else if (key == "handover_duration") cfg.handover_duration = parse_num(value, key);
        else if (key == "farewell_delay") cfg.farewell_delay = parse_num(value, key);
        else if (key == "gesture_duration") cfg.gesture_duration = parse_num(value, key);
        else if (key == "interactive_user") cfg.interactive_user = value;
        else if (key == "interactive_persona") cfg.interactive_persona = value;
        else {
            throw DataError(path + ":" + std::to_string(line_no) + ": unknown key '" + key +
                            "'");
        }
    }
    cfg.rebase_paths(std::filesystem::path(path).parent_path().string());
    return cfg;
}

}  // namespace brillo
