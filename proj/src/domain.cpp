#include "brillo/domain.hpp"

namespace brillo {

namespace {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, N>& table,
                        std::string_view s) {
    for (const auto& [value, name] : table) {
        if (name == s) return value;
    }
    return std::nullopt;
}

constexpr std::array<std::pair<Intent, std::string_view>, kIntentCount> kIntentNames = {{
    {Intent::AnswerGreeting, "AnswerGreeting"},
    {Intent::OrderConfirm, "OrderConfirm"},
    {Intent::OrderReject, "OrderReject"},
    {Intent::DeleteOrder, "DeleteOrder"},
    {Intent::Help, "Help"},
    {Intent::Menu, "Menu"},
    {Intent::Order, "Order"},
    {Intent::NewsConfirm, "NewsConfirm"},
    {Intent::NewsReject, "NewsReject"},
    {Intent::Evaluation, "Evaluation"},
}};

constexpr std::array<std::pair<Persona, std::string_view>, 3> kPersonaNames = {{
    {Persona::Worker, "worker"},
    {Persona::Other, "other"},
    {Persona::Unspecified, "unspecified"},
}};

constexpr std::array<std::pair<Channel, std::string_view>, 2> kChannelNames = {{
    {Channel::Totem, "totem"},
    {Channel::Bar, "bar"},
}};

constexpr std::array<std::pair<VoiceMood, std::string_view>, 3> kMoodNames = {{
    {VoiceMood::Neutral, "neutral"},
    {VoiceMood::Calm, "calm"},
    {VoiceMood::Pacey, "pacey"},
}};

constexpr std::array<std::pair<Sentiment, std::string_view>, 3> kSentimentNames = {{
    {Sentiment::Positive, "positive"},
    {Sentiment::Negative, "negative"},
    {Sentiment::Neutral, "neutral"},
}};

constexpr std::array<std::pair<UserState, std::string_view>, 10> kStateNames = {{
    {UserState::Greeting, "GREETING"},
    {UserState::Waiting, "WAITING"},
    {UserState::Recommendation, "RECOMMENDATION"},
    {UserState::Ordering, "ORDERING"},
    {UserState::Confirmation, "CONFIRMATION"},
    {UserState::Preparation, "PREPARATION"},
    {UserState::Serving, "SERVING"},
    {UserState::Farewell, "FAREWELL"},
    {UserState::Gone, "GONE"},
    {UserState::OutOfSight, "OUT_OF_SIGHT"},
}};

constexpr std::array<std::pair<Trigger, std::string_view>, 13> kTriggerNames = {{
    {Trigger::TurnGrant, "turn-grant"},
    {Trigger::OrderPlaced, "order"},
    {Trigger::OrderConfirmed, "order-confirm"},
    {Trigger::Confirm, "confirm"},
    {Trigger::OrderRejected, "order-reject"},
    {Trigger::OrderModify, "order-modify"},
    {Trigger::DeleteOrder, "delete-order"},
    {Trigger::DrinkReady, "drink-ready"},
    {Trigger::Handover, "handover"},
    {Trigger::FarewellDone, "farewell-done"},
    {Trigger::UserLost, "user-lost"},
    {Trigger::UserSeen, "user-seen"},
    {Trigger::AttentionClaim, "attention-claim"},
}};

constexpr std::array<std::pair<OrderStatus, std::string_view>, 5> kStatusNames = {{
    {OrderStatus::Pending, "pending"},
    {OrderStatus::Confirmed, "confirmed"},
    {OrderStatus::Preparing, "preparing"},
    {OrderStatus::Served, "served"},
    {OrderStatus::Cancelled, "cancelled"},
}};

constexpr std::array<std::pair<Strategy, std::string_view>, 5> kStrategyNames = {{
    {Strategy::PreferredDrink, "preferred-drink"},
    {Strategy::MostOrdered, "most-ordered"},
    {Strategy::SimilarSameCategory, "similar-same-category"},
    {Strategy::SimilarOtherCategory, "similar-other-category"},
    {Strategy::Ask, "ask"},
}};

constexpr std::array<std::pair<Expression, std::string_view>, 8> kExpressionNames = {{
    {Expression::Anger, "anger"},
    {Expression::Contempt, "contempt"},
    {Expression::Disgust, "disgust"},
    {Expression::Fear, "fear"},
    {Expression::Joy, "joy"},
    {Expression::Sadness, "sadness"},
    {Expression::Surprise, "surprise"},
    {Expression::Neutral, "neutral"},
}};

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E e) {
    for (const auto& [value, name] : table) {
        if (value == e) return name;
    }
    return "?";
}

}  // namespace

std::string_view to_string(Intent i) { return name_of(kIntentNames, i); }
std::optional<Intent> intent_from_string(std::string_view s) { return lookup(kIntentNames, s); }

std::string_view to_string(Persona p) { return name_of(kPersonaNames, p); }
std::optional<Persona> persona_from_string(std::string_view s) { return lookup(kPersonaNames, s); }

std::string_view to_string(Channel c) { return name_of(kChannelNames, c); }
std::optional<Channel> channel_from_string(std::string_view s) { return lookup(kChannelNames, s); }

std::string_view to_string(VoiceMood m) { return name_of(kMoodNames, m); }
std::optional<VoiceMood> voice_mood_from_string(std::string_view s) { return lookup(kMoodNames, s); }

std::string_view to_string(Sentiment s) { return name_of(kSentimentNames, s); }
std::optional<Sentiment> sentiment_from_string(std::string_view s) {
    return lookup(kSentimentNames, s);
}

std::string_view to_string(UserState s) { return name_of(kStateNames, s); }
std::optional<UserState> user_state_from_string(std::string_view s) {
    return lookup(kStateNames, s);
}

std::string_view to_string(Trigger t) { return name_of(kTriggerNames, t); }
std::optional<Trigger> trigger_from_string(std::string_view s) { return lookup(kTriggerNames, s); }

std::string_view to_string(OrderStatus s) { return name_of(kStatusNames, s); }
std::optional<OrderStatus> order_status_from_string(std::string_view s) {
    return lookup(kStatusNames, s);
}

std::string_view to_string(Strategy s) { return name_of(kStrategyNames, s); }
std::optional<Strategy> strategy_from_string(std::string_view s) {
    return lookup(kStrategyNames, s);
}

std::string_view to_string(Expression e) { return name_of(kExpressionNames, e); }
std::optional<Expression> expression_from_string(std::string_view s) {
    return lookup(kExpressionNames, s);
}

}  // namespace brillo
