#include "brillo/decision.hpp"

#include <algorithm>
#include <fstream>

#include "brillo/error.hpp"
#include "brillo/text.hpp"

namespace brillo {

std::string action_label(std::size_t action) {
    if (action == kAskRepeat) return "AskRepeat";
    return "respond_" + std::string(to_string(static_cast<Intent>(action)));
}

std::optional<std::size_t> action_from_label(const std::string& label) {
    if (label == "AskRepeat") return kAskRepeat;
    if (label.rfind("respond_", 0) == 0) {
        auto intent = intent_from_string(label.substr(8));
        if (intent) return static_cast<std::size_t>(*intent);
    }
    return std::nullopt;
}

UtilityTable UtilityTable::defaults() {
    UtilityTable t;
    for (std::size_t a = 0; a < kIntentCount; ++a) {
        for (std::size_t i = 0; i < kIntentCount; ++i) {
            t.u[a][i] = (a == i) ? 1.0 : -1.0;
        }
    }
    for (std::size_t i = 0; i < kIntentCount; ++i) t.u[kAskRepeat][i] = 0.0;
    return t;
}

UtilityTable UtilityTable::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open utility table '" + path + "'");
    UtilityTable t = defaults();
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        auto cols = split(trimmed, '\t');
        if (cols.size() != 3) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": expected action<TAB>intent<TAB>value");
        }
        auto action = action_from_label(cols[0]);
        if (!action) {
            throw DataError(path + ":" + std::to_string(line_no) + ": unknown action '" +
                            cols[0] + "'");
        }
        auto intent = intent_from_string(cols[1]);
        if (!intent) {
            throw DataError(path + ":" + std::to_string(line_no) + ": unknown intent '" +
                            cols[1] + "'");
        }
        try {
            t.u[*action][static_cast<std::size_t>(*intent)] = std::stod(cols[2]);
        } catch (const std::exception&) {
            throw DataError(path + ":" + std::to_string(line_no) + ": bad value '" + cols[2] +
                            "'");
        }
    }
    return t;
}

double expected_utility(std::size_t action, const IntentDistribution& d, const UtilityTable& u) {
    if (action >= kActionCount) throw Error("action index out of range");
    double eu = 0.0;
    for (std::size_t i = 0; i < kIntentCount; ++i) {
        eu += d.probs[i] * u.u[action][i];
    }
    return eu;
}

std::size_t select_action(const IntentDistribution& d, const UtilityTable& u) {
    std::size_t best_response = 0;
    double best_eu = expected_utility(0, d, u);
    for (std::size_t a = 1; a < kIntentCount; ++a) {
        double eu = expected_utility(a, d, u);
        if (eu > best_eu) {
            best_eu = eu;
            best_response = a;
        }
    }
    double ask_eu = expected_utility(kAskRepeat, d, u);
    return best_eu > ask_eu ? best_response : kAskRepeat;
}

UtterancePlan clarification_request(const OrderRequest& order, double confidence,
                                    const UserRecord& history, double cr_threshold) {
    if (confidence < 0.0 || confidence > 1.0) throw Error("confidence outside [0,1]");
    UtterancePlan plan;
    if (order.product.empty()) return plan;
    if (confidence < cr_threshold) {
        plan.kind = ClarificationKind::ConfirmProduct;
        plan.text = "Did you say " + order.product + "?";
        return plan;
    }
    auto usual = preferred_drink(history);
    if (usual && *usual != order.product) {
        plan.kind = ClarificationKind::CounterExpectation;
        plan.text = "Not your usual " + *usual + " today?";
    }
    return plan;
}

std::string_view to_string(LastEval e) {
    switch (e) {
        case LastEval::Positive:
            return "positive";
        case LastEval::Negative:
            return "negative";
        case LastEval::None:
            return "none";
    }
    return "none";
}

LastEval eval_from_rating(int rating) {
    return rating >= 3 ? LastEval::Positive : LastEval::Negative;
}

std::vector<Strategy> strategy_chain(const RecommendationContext& ctx,
                                     bool optimistic_missing_rating) {
    if (ctx.persona == Persona::Worker) {
        if (ctx.known_user) {
            return {Strategy::PreferredDrink, Strategy::MostOrdered, Strategy::Ask};
        }
        return {Strategy::MostOrdered, Strategy::Ask};
    }
    // "other" covers both a specified non-worker persona and none at all.
    if (!ctx.known_user) {
        return {Strategy::MostOrdered, Strategy::Ask};
    }
    LastEval eval = ctx.last_eval;
    if (eval == LastEval::None) {
        eval = optimistic_missing_rating ? LastEval::Positive : LastEval::Negative;
    }
    if (eval == LastEval::Positive) {
        return {Strategy::SimilarSameCategory, Strategy::SimilarOtherCategory,
                Strategy::MostOrdered, Strategy::Ask};
    }
    return {Strategy::MostOrdered, Strategy::Ask};
}

RecommendationResult recommend(const RecommendationContext& ctx, const LongTermStore& store,
                               const SemanticGraph& graph, bool optimistic_missing_rating) {
    if (ctx.rejection_count < 0) throw Error("negative rejection count");
    auto chain = strategy_chain(ctx, optimistic_missing_rating);
    std::size_t start = std::min(static_cast<std::size_t>(ctx.rejection_count),
                                 chain.size() - 1);
    for (std::size_t i = start; i < chain.size(); ++i) {
        Strategy strategy = chain[i];
        switch (strategy) {
            case Strategy::Ask:
                return {Strategy::Ask, ""};
            case Strategy::PreferredDrink: {
                if (!store.has(ctx.user_id)) break;
                auto usual = store.preferred_drink(ctx.user_id);
                if (usual) return {Strategy::PreferredDrink, *usual};
                break;
            }
            case Strategy::MostOrdered: {
                try {
                    return {Strategy::MostOrdered, store.most_ordered_drink()};
                } catch (const Error&) {
                    break;  // cold start: fall through
                }
            }
            case Strategy::SimilarSameCategory:
            case Strategy::SimilarOtherCategory: {
                if (ctx.last_drink.empty() || !graph.has_drink(ctx.last_drink)) break;
                auto similar = graph.most_similar_drink(
                    ctx.last_drink, strategy == Strategy::SimilarSameCategory);
                if (similar) return {strategy, *similar};
                break;
            }
        }
    }
    return {Strategy::Ask, ""};
}

NewsFeed NewsFeed::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open news feed '" + path + "'");
    std::vector<NewsItem> items;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view trimmed = trim(line);
        if (trimmed.empty() || trimmed.front() == '#') continue;
        auto cols = split(trimmed, '\t');
        if (cols.size() != 4) {
            throw DataError(path + ":" + std::to_string(line_no) +
                            ": expected id<TAB>category<TAB>source<TAB>headline");
        }
        if (cols[2] != "serious" && cols[2] != "entertaining") {
            throw DataError(path + ":" + std::to_string(line_no) + ": unknown source '" +
                            cols[2] + "'");
        }
        items.push_back({cols[0], cols[1], cols[2], cols[3]});
    }
    return from_items(std::move(items));
}

NewsFeed NewsFeed::from_items(std::vector<NewsItem> items) {
    NewsFeed feed;
    std::set<std::string> ids;
    std::set<std::string> seen_categories;
    for (auto& item : items) {
        if (!ids.insert(item.id).second) throw DataError("duplicate news id '" + item.id + "'");
        if (seen_categories.insert(item.category).second) {
            feed.categories_.push_back(item.category);
        }
        feed.items_.push_back(std::move(item));
    }
    return feed;
}

const NewsItem* NewsFeed::find(const std::string& id) const {
    for (const auto& item : items_) {
        if (item.id == id) return &item;
    }
    return nullptr;
}

std::string_view to_string(NewsStop s) {
    switch (s) {
        case NewsStop::Preempted:
            return "preempted";
        case NewsStop::Disengaged:
            return "disengaged";
        case NewsStop::Exhausted:
            return "exhausted";
    }
    return "exhausted";
}

std::string pick_opening_category(Persona persona, const LongTermStore& store,
                                  const NewsFeed& feed) {
    if (feed.categories().empty()) throw Error("news feed has no categories");
    auto tally = [&](bool same_persona_only) {
        std::map<std::string, double> scores;
        for (const auto& [_, user] : store.users()) {
            if (same_persona_only && user.persona != persona) continue;
            for (const auto& [category, score] : user.liked_news_categories) {
                scores[category] += score;
            }
        }
        return scores;
    };
    for (bool same_persona : {true, false}) {
        auto scores = tally(same_persona);
        std::string best;
        double best_score = 0;
        for (const auto& category : feed.categories()) {
            auto it = scores.find(category);
            double s = it == scores.end() ? 0 : it->second;
            if (s > best_score) {
                best = category;
                best_score = s;
            }
        }
        if (!best.empty()) return best;
    }
    return feed.categories().front();
}

namespace {

// First unpresented item of a category, preferring the session's source.
const NewsItem* pick_item(const NewsFeed& feed, const NewsSession& session,
                          const std::string& category) {
    const NewsItem* fallback = nullptr;
    for (const auto& item : feed.items()) {
        if (item.category != category || session.presented.count(item.id)) continue;
        if (item.source == session.source) return &item;
        if (!fallback) fallback = &item;
    }
    return fallback;
}

bool category_has_unpresented(const NewsFeed& feed, const NewsSession& session,
                              const std::string& category) {
    for (const auto& item : feed.items()) {
        if (item.category == category && !session.presented.count(item.id)) return true;
    }
    return false;
}

// Next category in feed rotation order after `current` (cyclic) that still
// has unpresented items, preferring categories not yet visited.
std::optional<std::string> rotate_category(const NewsFeed& feed, const NewsSession& session,
                                           const std::string& current) {
    const auto& cats = feed.categories();
    auto pos = std::find(cats.begin(), cats.end(), current);
    std::size_t start = pos == cats.end() ? 0 : (pos - cats.begin() + 1) % cats.size();
    for (bool unvisited_only : {true, false}) {
        for (std::size_t k = 0; k < cats.size(); ++k) {
            const std::string& cat = cats[(start + k) % cats.size()];
            if (unvisited_only && session.visited_categories.count(cat)) continue;
            if (category_has_unpresented(feed, session, cat)) return cat;
        }
    }
    return std::nullopt;
}

}  // namespace

NewsOutcome next_news(NewsSession& session, std::optional<bool> feedback,
                      const EngagementEstimate& engagement, bool new_registered_client,
                      const NewsFeed& feed, double engagement_threshold) {
    if (new_registered_client) return NewsStop::Preempted;
    if (is_low_engagement(engagement, engagement_threshold)) return NewsStop::Disengaged;
    if (feedback) session.feedback.push_back(*feedback);

    bool all_presented = true;
    for (const auto& item : feed.items()) {
        if (!session.presented.count(item.id)) {
            all_presented = false;
            break;
        }
    }
    if (all_presented) return NewsStop::Exhausted;

    std::string category = session.current_category;
    bool need_rotation = (feedback && !*feedback) ||
                         !category_has_unpresented(feed, session, category);
    if (need_rotation) {
        auto next = rotate_category(feed, session, category);
        if (!next) return NewsStop::Exhausted;
        category = *next;
    }
    const NewsItem* item = pick_item(feed, session, category);
    if (!item) return NewsStop::Exhausted;
    session.current_category = category;
    session.visited_categories.insert(category);
    session.presented.insert(item->id);
    return item->id;
}

}  // namespace brillo
