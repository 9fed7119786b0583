#include "brillo/graph.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "brillo/error.hpp"
#include "brillo/text.hpp"

namespace brillo {

SemanticGraph SemanticGraph::from_text(const std::string& text, const std::string& origin) {
    SemanticGraph g;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    auto fail = [&](const std::string& msg) {
        throw DataError(origin + ":" + std::to_string(line_no) + ": " + msg);
    };
    struct PendingEdge {
        std::string type, src, dst;
        int line;
    };
    std::vector<PendingEdge> edges;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        auto cols = split(line, '\t');
        if (cols[0] == "NODE") {
            if (cols.size() != 3) fail("NODE needs NODE<TAB>type<TAB>id");
            const std::string& type = cols[1];
            const std::string& id = cols[2];
            if (type == "DRINK") {
                if (g.drink_category_.count(id)) fail("duplicate drink '" + id + "'");
                g.drinks_.push_back(id);
                g.drink_category_[id] = "";
                g.drink_ingredients_[id];
            } else if (type == "CATEGORY") {
                g.categories_.insert(id);
            } else if (type == "FOOD_INGREDIENT") {
                g.ingredients_.insert(id);
                g.ingredient_flavors_[id];
            } else if (type == "FLAVOR") {
                g.flavors_.insert(id);
            } else {
                fail("unknown node type '" + type + "'");
            }
        } else if (cols[0] == "EDGE") {
            if (cols.size() != 4) fail("EDGE needs EDGE<TAB>type<TAB>src<TAB>dst");
            edges.push_back({cols[1], cols[2], cols[3], line_no});
        } else {
            fail("expected NODE or EDGE");
        }
    }
    for (const auto& e : edges) {
        line_no = e.line;
        if (e.type == "belongs-to") {
            auto it = g.drink_category_.find(e.src);
            if (it == g.drink_category_.end()) fail("unknown drink '" + e.src + "'");
            if (!g.categories_.count(e.dst)) fail("unknown category '" + e.dst + "'");
            if (!it->second.empty()) fail("drink '" + e.src + "' has two categories");
            it->second = e.dst;
        } else if (e.type == "contains") {
            if (!g.drink_category_.count(e.src)) fail("unknown drink '" + e.src + "'");
            if (!g.ingredients_.count(e.dst)) fail("unknown ingredient '" + e.dst + "'");
            g.drink_ingredients_[e.src].insert(e.dst);
        } else if (e.type == "has-flavor") {
            if (!g.ingredients_.count(e.src)) fail("unknown ingredient '" + e.src + "'");
            if (!g.flavors_.count(e.dst)) fail("unknown flavor '" + e.dst + "'");
            g.ingredient_flavors_[e.src].insert(e.dst);
        } else if (e.type == "ordered") {
            if (!g.drink_category_.count(e.dst)) fail("unknown drink '" + e.dst + "'");
            g.order_edges_.emplace_back(e.src, e.dst);
        } else {
            fail("unknown edge type '" + e.type + "'");
        }
    }
    line_no = 0;
    for (const auto& [drink, category] : g.drink_category_) {
        if (category.empty()) {
            throw DataError(origin + ": drink '" + drink + "' has no category");
        }
    }
    return g;
}

SemanticGraph SemanticGraph::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open graph file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str(), path);
}

bool SemanticGraph::has_drink(const std::string& drink) const {
    return drink_category_.count(drink) != 0;
}

const std::string& SemanticGraph::category_of(const std::string& drink) const {
    auto it = drink_category_.find(drink);
    if (it == drink_category_.end()) throw Error("unknown drink '" + drink + "'");
    return it->second;
}

const std::set<std::string>& SemanticGraph::ingredients_of(const std::string& drink) const {
    auto it = drink_ingredients_.find(drink);
    if (it == drink_ingredients_.end()) throw Error("unknown drink '" + drink + "'");
    return it->second;
}

const std::set<std::string>& SemanticGraph::flavors_of(const std::string& ingredient) const {
    auto it = ingredient_flavors_.find(ingredient);
    if (it == ingredient_flavors_.end()) throw Error("unknown ingredient '" + ingredient + "'");
    return it->second;
}

int SemanticGraph::shared_ingredients(const std::string& a, const std::string& b) const {
    const auto& ia = ingredients_of(a);
    const auto& ib = ingredients_of(b);
    int count = 0;
    for (const auto& ing : ia) {
        if (ib.count(ing)) ++count;
    }
    return count;
}

std::optional<std::string> SemanticGraph::most_similar_drink(
    const std::string& d, bool same_category, const std::set<std::string>& exclude) const {
    const std::string& category = category_of(d);
    std::optional<std::string> best;
    int best_count = -1;
    // drinks_ is sorted here so that ties resolve lexicographically.
    std::vector<std::string> sorted = drinks_;
    std::sort(sorted.begin(), sorted.end());
    for (const auto& candidate : sorted) {
        if (candidate == d || exclude.count(candidate)) continue;
        bool same = category_of(candidate) == category;
        if (same != same_category) continue;
        int count = shared_ingredients(d, candidate);
        if (count > best_count) {
            best_count = count;
            best = candidate;
        }
    }
    return best;
}

void SemanticGraph::add_order_edge(const std::string& user_id, const std::string& drink) {
    if (!has_drink(drink)) throw Error("unknown drink '" + drink + "'");
    order_edges_.emplace_back(user_id, drink);
}

CatalogView SemanticGraph::catalog_view() const {
    CatalogView view;
    view.drinks = drinks_;
    view.ingredients.assign(ingredients_.begin(), ingredients_.end());
    return view;
}

}  // namespace brillo
