#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "brillo/beliefs.hpp"
#include "brillo/domain.hpp"
#include "brillo/fusion.hpp"
#include "brillo/graph.hpp"
#include "brillo/nlu.hpp"

namespace brillo {

// One response action per intent plus the repetition request. Actions are
// ordered: respond actions in taxonomy order, AskRepeat last; that order is
// the tie-break for selection among responses.
inline constexpr std::size_t kActionCount = kIntentCount + 1;
inline constexpr std::size_t kAskRepeat = kIntentCount;

std::string action_label(std::size_t action);
std::optional<std::size_t> action_from_label(const std::string& label);

// u[action][intent]. Default: +1 for the matching response, -1 for a
// mismatched response, 0 everywhere for AskRepeat.
struct UtilityTable {
    double u[kActionCount][kIntentCount] = {};

    static UtilityTable defaults();
    // File format: action<TAB>intent<TAB>value, one cell per line.
    static UtilityTable load(const std::string& path);
};

double expected_utility(std::size_t action, const IntentDistribution& d, const UtilityTable& u);

// Maximum-expected-utility action. A response must strictly beat AskRepeat;
// at equal utility the repetition request wins (it is the cautious move),
// and responses tie-break among themselves in action order.
std::size_t select_action(const IntentDistribution& d, const UtilityTable& u);

inline constexpr double kDefaultCrThreshold = 0.6;

enum class ClarificationKind { None, ConfirmProduct, CounterExpectation };

struct UtterancePlan {
    ClarificationKind kind = ClarificationKind::None;
    std::string text;
};

// Confirmation-form CR below the confidence threshold; counter-expectation
// CR when the order deviates from the user's usual drink.
UtterancePlan clarification_request(const OrderRequest& order, double confidence,
                                    const UserRecord& history,
                                    double cr_threshold = kDefaultCrThreshold);

enum class LastEval { Positive, Negative, None };
std::string_view to_string(LastEval e);

// Rating thresholds: positive >= 3, negative <= 2.
LastEval eval_from_rating(int rating);

struct RecommendationContext {
    std::string user_id;  // resolves the preferred-drink strategy
    Persona persona = Persona::Unspecified;
    bool known_user = false;
    LastEval last_eval = LastEval::None;
    int rejection_count = 0;
    std::string last_drink;  // empty for unknown users
};

struct RecommendationResult {
    Strategy strategy = Strategy::Ask;
    std::string drink;  // empty for the ask strategy
};

// Ordered strategy chain for a context. An unrated last drink follows the
// optimistic branch when optimistic_missing_rating is set.
std::vector<Strategy> strategy_chain(const RecommendationContext& ctx,
                                     bool optimistic_missing_rating = true);

// Resolves the chain entry at min(rejection_count, last index); strategies
// that come up empty fall through to the next one. Always terminates: the
// final entry `ask` is total.
RecommendationResult recommend(const RecommendationContext& ctx, const LongTermStore& store,
                               const SemanticGraph& graph,
                               bool optimistic_missing_rating = true);

struct NewsItem {
    std::string id;
    std::string category;
    std::string source;  // serious | entertaining
    std::string headline;
};

// News feed file: id<TAB>category<TAB>source<TAB>headline.
class NewsFeed {
public:
    static NewsFeed load(const std::string& path);
    static NewsFeed from_items(std::vector<NewsItem> items);

    const std::vector<NewsItem>& items() const { return items_; }
    const std::vector<std::string>& categories() const { return categories_; }
    const NewsItem* find(const std::string& id) const;

private:
    std::vector<NewsItem> items_;
    std::vector<std::string> categories_;  // first-appearance order
};

struct NewsSession {
    std::string current_category;
    std::string source;  // preferred source for this session
    std::set<std::string> presented;
    std::vector<bool> feedback;
    std::set<std::string> visited_categories;
};

enum class NewsStop { Preempted, Disengaged, Exhausted };
std::string_view to_string(NewsStop s);

using NewsOutcome = std::variant<std::string, NewsStop>;  // news id or stop reason

// Opening topic: the most liked category among profiles sharing the
// persona, then globally, then the feed's first category.
std::string pick_opening_category(Persona persona, const LongTermStore& store,
                                  const NewsFeed& feed);

// Positive (or absent) feedback keeps the category; negative feedback
// rotates to the next category in feed order. Stops when a new registered
// client appears, engagement is low, or the feed is exhausted. Never
// repeats an item within the session.
NewsOutcome next_news(NewsSession& session, std::optional<bool> feedback,
                      const EngagementEstimate& engagement, bool new_registered_client,
                      const NewsFeed& feed,
                      double engagement_threshold = kDefaultEngagementThreshold);

}  // namespace brillo
