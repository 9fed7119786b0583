#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "brillo/nlu.hpp"

namespace brillo {

// Drink / category / ingredient / flavor graph backing similarity-based
// recommendation. Loaded read-mostly from an edge-list file:
//   NODE<TAB>type<TAB>id
//   EDGE<TAB>type<TAB>src<TAB>dst
// Node types: DRINK, CATEGORY, FOOD_INGREDIENT, FLAVOR.
// Edge types: belongs-to (drink -> category), contains (drink -> ingredient),
// has-flavor (ingredient -> flavor), ordered (user -> drink).
class SemanticGraph {
public:
    static SemanticGraph load(const std::string& path);
    static SemanticGraph from_text(const std::string& text,
                                   const std::string& origin = "<memory>");

    const std::vector<std::string>& drinks() const { return drinks_; }
    const std::string& category_of(const std::string& drink) const;
    const std::set<std::string>& ingredients_of(const std::string& drink) const;
    const std::set<std::string>& flavors_of(const std::string& ingredient) const;
    bool has_drink(const std::string& drink) const;

    // |ingredients(a) ∩ ingredients(b)|
    int shared_ingredients(const std::string& a, const std::string& b) const;

    // Most similar candidate by shared-ingredient count, restricted to the
    // same or another category than `d`, minus `exclude` and `d` itself.
    // Ties break toward the lexicographically smaller drink id. Empty when
    // no candidate exists.
    std::optional<std::string> most_similar_drink(const std::string& d, bool same_category,
                                                  const std::set<std::string>& exclude = {}) const;

    // Orders recorded as user->drink edges (appended at run time).
    void add_order_edge(const std::string& user_id, const std::string& drink);
    const std::vector<std::pair<std::string, std::string>>& order_edges() const {
        return order_edges_;
    }

    // Vocabulary handed to the slot extractor.
    CatalogView catalog_view() const;

private:
    std::vector<std::string> drinks_;            // declaration order
    std::set<std::string> categories_;
    std::set<std::string> ingredients_;
    std::set<std::string> flavors_;
    std::map<std::string, std::string> drink_category_;
    std::map<std::string, std::set<std::string>> drink_ingredients_;
    std::map<std::string, std::set<std::string>> ingredient_flavors_;
    std::vector<std::pair<std::string, std::string>> order_edges_;
};

}  // namespace brillo
