#pragma once

#include <cstdint>
#include <string>

namespace brillo {

// Flat key=value run configuration. Relative data paths are resolved
// against the config file's directory.
struct RunConfig {
    // Data files
    std::string graph_path = "data/graph.tsv";
    std::string profiles_path = "data/profiles.jsonl";
    std::string recipes_path = "data/recipes.tsv";
    std::string rules_path = "data/rules.tsv";
    std::string corpus_path = "data/corpus.tsv";
    std::string positive_lexicon_path = "data/lexicon_positive.txt";
    std::string negative_lexicon_path = "data/lexicon_negative.txt";
    std::string news_path = "data/news.tsv";
    std::string utilities_path;  // empty: built-in default table

    // Run parameters
    std::uint64_t seed = 0;
    bool noise_enabled = true;
    std::string scenario_path;
    std::string trace_path;

    // Perception channel
    double delete_order_recall = 0.9;  // no published recall row for DeleteOrder
    double confidence_lo = 0.5;
    double confidence_hi = 1.0;

    // Decision thresholds
    double cr_threshold = 0.6;
    double engagement_threshold = 0.4;
    bool optimistic_missing_rating = true;

    // Turn-taking policy
    double weight_wait = 1.0;
    double weight_group = 0.5;
    double weight_arrival = 0.5;
    double attention_bonus = 2.0;

    // Fusion weights
    double fusion_weight_pose = 1.0;
    double fusion_weight_valence = 1.0;
    double fusion_weight_mood = 1.0;
    double fusion_weight_sentiment = 1.0;

    // Execution
    int arms = 2;
    double greet_delay = 1.0;
    double confirm_grace = 2.0;
    double handover_duration = 2.0;
    double farewell_delay = 1.0;
    double gesture_duration = 2.0;

    // Interactive session
    std::string interactive_user = "guest";
    std::string interactive_persona = "unspecified";

    // Loads key=value lines over the defaults and resolves relative paths
    // against the config file's directory.
    static RunConfig load(const std::string& path);

    // Resolves the bundled defaults against a data directory.
    void rebase_paths(const std::string& base_dir);
};

}  // namespace brillo
