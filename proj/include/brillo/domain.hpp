#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace brillo {

// Intent taxonomy. The order is fixed: it is the tie-break order for
// action selection and the index into IntentDistribution.
enum class Intent {
    AnswerGreeting,
    OrderConfirm,
    OrderReject,
    DeleteOrder,
    Help,
    Menu,
    Order,
    NewsConfirm,
    NewsReject,
    Evaluation,
};

inline constexpr std::size_t kIntentCount = 10;

inline constexpr std::array<Intent, kIntentCount> kAllIntents = {
    Intent::AnswerGreeting, Intent::OrderConfirm, Intent::OrderReject,
    Intent::DeleteOrder,    Intent::Help,         Intent::Menu,
    Intent::Order,          Intent::NewsConfirm,  Intent::NewsReject,
    Intent::Evaluation,
};

std::string_view to_string(Intent i);
std::optional<Intent> intent_from_string(std::string_view s);

enum class Persona { Worker, Other, Unspecified };
std::string_view to_string(Persona p);
std::optional<Persona> persona_from_string(std::string_view s);

enum class Channel { Totem, Bar };
std::string_view to_string(Channel c);
std::optional<Channel> channel_from_string(std::string_view s);

enum class VoiceMood { Neutral, Calm, Pacey };
std::string_view to_string(VoiceMood m);
std::optional<VoiceMood> voice_mood_from_string(std::string_view s);

enum class Sentiment { Positive, Negative, Neutral };
std::string_view to_string(Sentiment s);
std::optional<Sentiment> sentiment_from_string(std::string_view s);

// Per-user interaction states.
enum class UserState {
    Greeting,
    Waiting,
    Recommendation,
    Ordering,
    Confirmation,
    Preparation,
    Serving,
    Farewell,
    Gone,
    OutOfSight,
};

inline constexpr std::array<UserState, 10> kAllUserStates = {
    UserState::Greeting,    UserState::Waiting,      UserState::Recommendation,
    UserState::Ordering,    UserState::Confirmation, UserState::Preparation,
    UserState::Serving,     UserState::Farewell,     UserState::Gone,
    UserState::OutOfSight,
};

std::string_view to_string(UserState s);
std::optional<UserState> user_state_from_string(std::string_view s);

// Trigger alphabet for the interaction FSM.
enum class Trigger {
    TurnGrant,
    OrderPlaced,      // "order": an order was stated or a recommendation accepted
    OrderConfirmed,   // user confirmed the echoed order
    Confirm,          // service side locks the order in
    OrderRejected,
    OrderModify,
    DeleteOrder,
    DrinkReady,
    Handover,
    FarewellDone,
    UserLost,
    UserSeen,
    AttentionClaim,
};

inline constexpr std::array<Trigger, 13> kAllTriggers = {
    Trigger::TurnGrant,    Trigger::OrderPlaced,  Trigger::OrderConfirmed,
    Trigger::Confirm,      Trigger::OrderRejected, Trigger::OrderModify,
    Trigger::DeleteOrder,  Trigger::DrinkReady,   Trigger::Handover,
    Trigger::FarewellDone, Trigger::UserLost,     Trigger::UserSeen,
    Trigger::AttentionClaim,
};

std::string_view to_string(Trigger t);
std::optional<Trigger> trigger_from_string(std::string_view s);

// Order lifecycle inside working memory.
enum class OrderStatus { Pending, Confirmed, Preparing, Served, Cancelled };
std::string_view to_string(OrderStatus s);
std::optional<OrderStatus> order_status_from_string(std::string_view s);

// Recommendation strategies of the strategy table.
enum class Strategy {
    PreferredDrink,
    MostOrdered,
    SimilarSameCategory,
    SimilarOtherCategory,
    Ask,
};
std::string_view to_string(Strategy s);
std::optional<Strategy> strategy_from_string(std::string_view s);

// Face expressions: Ekman's seven plus neutral.
enum class Expression {
    Anger,
    Contempt,
    Disgust,
    Fear,
    Joy,
    Sadness,
    Surprise,
    Neutral,
};
std::string_view to_string(Expression e);
std::optional<Expression> expression_from_string(std::string_view s);

}  // namespace brillo
