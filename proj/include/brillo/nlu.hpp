#pragma once

#include <array>
#include <optional>
#include <regex>
#include <string>
#include <vector>

#include "brillo/domain.hpp"

namespace brillo {

// Probability vector over the intent taxonomy, indexed by Intent order.
struct IntentDistribution {
    std::array<double, kIntentCount> probs{};

    static IntentDistribution uniform();

    double prob(Intent i) const { return probs[static_cast<std::size_t>(i)]; }
    Intent argmax() const;

    // Checks the distribution sums to 1 within 1e-9 with no negative mass.
    bool valid() const;
};

// Mass `confidence` on the classified intent, remainder uniform on the rest.
IntentDistribution to_distribution(Intent classified, double confidence);

struct OrderModification {
    std::string ingredient;
    bool remove = false;  // false: add
};

struct OrderRequest {
    std::string product;  // drink name, empty when unresolvable
    std::vector<OrderModification> modifications;
    bool cancel = false;
};

// Drink and ingredient vocabulary used by the slot extractor; normally
// sourced from the semantic graph.
struct CatalogView {
    std::vector<std::string> drinks;
    std::vector<std::string> ingredients;
};

struct NluRule {
    Intent intent = Intent::Order;
    std::string pattern;
    double confidence = 0.0;
    std::regex regex;
};

// Keyword/pattern intent classifier over typed text. Rules are data: one
// per line, `intent<TAB>pattern<TAB>confidence`. Conflicts resolve by
// longest matched span, then rule-file order.
class RuleTable {
public:
    static RuleTable load(const std::string& path);
    static RuleTable from_lines(const std::vector<std::string>& lines);

    // Distribution with the top rule's confidence on its intent; uniform
    // when no rule matches. Empty text is an error.
    IntentDistribution classify(const std::string& text) const;

    // Best-matching intent and its rule confidence; nullopt when no match.
    std::optional<std::pair<Intent, double>> match(const std::string& text) const;

    std::size_t size() const { return rules_.size(); }

private:
    std::vector<NluRule> rules_;
};

// Parses product and ingredient modifications out of an order utterance.
// DeleteOrder intent sets cancel instead.
OrderRequest extract_order_slots(const std::string& text, Intent intent,
                                 const CatalogView& catalog);

// First digit 1..5 spoken in an evaluation utterance, if any.
std::optional<int> extract_rating(const std::string& text);

}  // namespace brillo
