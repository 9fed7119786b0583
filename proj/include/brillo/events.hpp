#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "brillo/domain.hpp"
#include "brillo/time.hpp"

namespace brillo {

// Sensor-layer event kinds.
enum class PerceptKind {
    UserSeen,
    UserLost,
    PoseEngagement,
    GroupMembership,
    Utterance,
    FaceValence,
    VoiceMood,
};

std::string_view to_string(PerceptKind k);
std::optional<PerceptKind> percept_kind_from_string(std::string_view s);

// Timestamped sensor-layer message; the value fields are kind-specific.
struct PerceptEvent {
    PerceptKind kind = PerceptKind::UserSeen;
    std::string user_id;
    double engagement = 0.0;                  // PoseEngagement, in [0,1]
    std::vector<std::string> group;           // GroupMembership, contains user_id
    double valence = 0.0;                     // FaceValence, in [-1,1]
    VoiceMood mood = VoiceMood::Neutral;      // VoiceMood
    std::string text;                         // Utterance
    std::optional<Intent> true_intent;        // Utterance: scripted ground truth
    std::optional<Intent> classified;         // Utterance: after the confusion channel
    std::optional<double> confidence;         // Utterance: classifier confidence
};

struct RegistrationEvent {
    std::string user_id;
    Persona persona = Persona::Unspecified;
    Channel channel = Channel::Totem;
};

// Internal control messages driving the interaction FSM.
struct TriggerEvent {
    std::string user_id;
    Trigger trigger = Trigger::TurnGrant;
    std::uint64_t epoch = 0;  // dialogue triggers are dropped when stale
};

struct InteractingUserEvent {
    std::string user_id;
    UserState state = UserState::Greeting;
};

struct StateChangeEvent {
    std::string user_id;
    UserState old_state = UserState::Greeting;
    UserState new_state = UserState::Greeting;
    Trigger trigger = Trigger::TurnGrant;
};

struct SpeechEvent {
    std::string user_id;  // addressee
    std::string act;      // dialogue act label, e.g. "greeting", "ask-repeat"
    std::string text;
};

struct FaceBehaviorEvent {
    std::string kind;  // expression | vocal_sound | speech | gaze
    Expression expression = Expression::Neutral;
    std::string user_id;
};

struct ArmEvent {
    std::string order_id;
    std::string action_id;
    std::string arm;    // left | right | both | none
    std::string phase;  // start | end
};

struct OrderEvent {
    std::string order_id;
    std::string user_id;
    std::string drink;
    OrderStatus status = OrderStatus::Pending;
};

struct IntentEvent {
    std::string user_id;
    Intent intent = Intent::AnswerGreeting;
    double confidence = 0.0;
    std::string action;  // selected dialogue action
};

struct EngagementEvent {
    std::string user_id;
    double score = 0.0;
};

struct RecommendationEvent {
    std::string user_id;
    Strategy strategy = Strategy::Ask;
    std::string drink;  // empty for the ask strategy
};

struct NewsEvent {
    std::string user_id;
    std::string kind;  // offer | item | stop
    std::string news_id;
    std::string category;
    std::string source;
    std::string stop_reason;  // preempted | disengaged | exhausted
};

struct GestureEvent {
    std::string order_id;
    std::string outcome;  // placed | dropped
    SimTime start;
    std::string arm;
};

using Payload =
    std::variant<PerceptEvent, RegistrationEvent, TriggerEvent, InteractingUserEvent,
                 StateChangeEvent, SpeechEvent, FaceBehaviorEvent, ArmEvent, OrderEvent,
                 IntentEvent, EngagementEvent, RecommendationEvent, NewsEvent, GestureEvent>;

// Topic names. /users and /interacting_user follow the middleware wiring;
// the rest are this engine's own channels.
namespace topics {
inline constexpr const char* kUsers = "/users";
inline constexpr const char* kPercepts = "/percepts";
inline constexpr const char* kRegistration = "/registration";
inline constexpr const char* kTriggers = "/triggers";
inline constexpr const char* kInteractingUser = "/interacting_user";
inline constexpr const char* kStateChanges = "/state_changes";
inline constexpr const char* kSpeech = "/robot/speech";
inline constexpr const char* kFace = "/robot/face";
inline constexpr const char* kArms = "/robot/arms";
inline constexpr const char* kOrders = "/orders";
inline constexpr const char* kIntents = "/intents";
inline constexpr const char* kEngagement = "/engagement";
inline constexpr const char* kRecommendations = "/recommendations";
inline constexpr const char* kNews = "/robot/news";
inline constexpr const char* kGestures = "/gestures";
}  // namespace topics

// All topics known to the engine, in registration order.
std::vector<std::string> all_topics();

// Canonical single-line text form of a payload, used in trace files.
std::string canonical_text(const Payload& payload);

// Inverse of canonical_text; the topic selects the payload type.
Payload payload_from_canonical(const std::string& topic, const std::string& text);

}  // namespace brillo
