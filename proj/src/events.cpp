#include "brillo/events.hpp"

#include <map>

#include "brillo/error.hpp"
#include "brillo/text.hpp"

namespace brillo {

namespace {

constexpr std::array<std::pair<PerceptKind, std::string_view>, 7> kPerceptKindNames = {{
    {PerceptKind::UserSeen, "user-seen"},
    {PerceptKind::UserLost, "user-lost"},
    {PerceptKind::PoseEngagement, "pose-engagement"},
    {PerceptKind::GroupMembership, "group-membership"},
    {PerceptKind::Utterance, "utterance"},
    {PerceptKind::FaceValence, "face-valence"},
    {PerceptKind::VoiceMood, "voice-mood"},
}};

std::string join(const std::vector<std::string>& items, char sep) {
    std::string out;
    for (const auto& item : items) {
        if (!out.empty()) out += sep;
        out += item;
    }
    return out;
}

std::map<std::string, std::string> to_map(const std::string& text) {
    std::map<std::string, std::string> m;
    for (auto& [k, v] : parse_kv(text)) m[k] = v;
    return m;
}

const std::string& need(const std::map<std::string, std::string>& m, const std::string& key) {
    auto it = m.find(key);
    if (it == m.end()) throw DataError("missing key '" + key + "' in payload text");
    return it->second;
}

double need_number(const std::map<std::string, std::string>& m, const std::string& key) {
    const std::string& raw = need(m, key);
    try {
        std::size_t pos = 0;
        double v = std::stod(raw, &pos);
        if (pos != raw.size()) throw DataError("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw DataError("bad number '" + raw + "' for key '" + key + "'");
    }
}

}  // namespace

std::string_view to_string(PerceptKind k) {
    for (const auto& [value, name] : kPerceptKindNames) {
        if (value == k) return name;
    }
    return "?";
}

std::optional<PerceptKind> percept_kind_from_string(std::string_view s) {
    for (const auto& [value, name] : kPerceptKindNames) {
        if (name == s) return value;
    }
    return std::nullopt;
}

std::vector<std::string> all_topics() {
    return {topics::kUsers,           topics::kPercepts, topics::kRegistration,
            topics::kTriggers,        topics::kInteractingUser, topics::kStateChanges,
            topics::kSpeech,          topics::kFace,     topics::kArms,
            topics::kOrders,          topics::kIntents,  topics::kEngagement,
            topics::kRecommendations, topics::kNews,     topics::kGestures};
}

namespace {

struct CanonicalWriter {
    std::string out;

    void add(std::string_view key, std::string_view value) { kv_append(out, key, value); }
    void add_number(std::string_view key, double v) { kv_append(out, key, format_number(v)); }

    std::string operator()(const PerceptEvent& e) {
        add("kind", to_string(e.kind));
        add("user", e.user_id);
        switch (e.kind) {
            case PerceptKind::PoseEngagement:
                add_number("value", e.engagement);
                break;
            case PerceptKind::GroupMembership:
                add("members", join(e.group, ','));
                break;
            case PerceptKind::FaceValence:
                add_number("value", e.valence);
                break;
            case PerceptKind::VoiceMood:
                add("value", to_string(e.mood));
                break;
            case PerceptKind::Utterance:
                add("text", e.text);
                if (e.true_intent) add("intent", to_string(*e.true_intent));
                if (e.classified) add("classified", to_string(*e.classified));
                if (e.confidence) add_number("confidence", *e.confidence);
                break;
            default:
                break;
        }
        return out;
    }

    std::string operator()(const RegistrationEvent& e) {
        add("user", e.user_id);
        add("persona", to_string(e.persona));
        add("channel", to_string(e.channel));
        return out;
    }

    std::string operator()(const TriggerEvent& e) {
        add("user", e.user_id);
        add("trigger", to_string(e.trigger));
        add("epoch", std::to_string(e.epoch));
        return out;
    }

    std::string operator()(const InteractingUserEvent& e) {
        add("user", e.user_id);
        add("state", to_string(e.state));
        return out;
    }

    std::string operator()(const StateChangeEvent& e) {
        add("user", e.user_id);
        add("old", to_string(e.old_state));
        add("new", to_string(e.new_state));
        add("trigger", to_string(e.trigger));
        return out;
    }

    std::string operator()(const SpeechEvent& e) {
        add("user", e.user_id);
        add("act", e.act);
        add("text", e.text);
        return out;
    }

    std::string operator()(const FaceBehaviorEvent& e) {
        add("kind", e.kind);
        if (e.kind == "expression") add("expression", to_string(e.expression));
        add("user", e.user_id);
        return out;
    }

    std::string operator()(const ArmEvent& e) {
        add("order", e.order_id);
        add("action", e.action_id);
        add("arm", e.arm);
        add("phase", e.phase);
        return out;
    }

    std::string operator()(const OrderEvent& e) {
        add("order", e.order_id);
        add("user", e.user_id);
        add("drink", e.drink);
        add("status", to_string(e.status));
        return out;
    }

    std::string operator()(const IntentEvent& e) {
        add("user", e.user_id);
        add("intent", to_string(e.intent));
        add_number("confidence", e.confidence);
        add("action", e.action);
        return out;
    }

    std::string operator()(const EngagementEvent& e) {
        add("user", e.user_id);
        add_number("score", e.score);
        return out;
    }

    std::string operator()(const RecommendationEvent& e) {
        add("user", e.user_id);
        add("strategy", to_string(e.strategy));
        add("drink", e.drink);
        return out;
    }

    std::string operator()(const NewsEvent& e) {
        add("user", e.user_id);
        add("kind", e.kind);
        if (e.kind == "item") add("id", e.news_id);
        if (!e.category.empty()) add("category", e.category);
        if (!e.source.empty()) add("source", e.source);
        if (e.kind == "stop") add("reason", e.stop_reason);
        return out;
    }

    std::string operator()(const GestureEvent& e) {
        add("order", e.order_id);
        add("outcome", e.outcome);
        add("start", e.start.str());
        add("arm", e.arm);
        return out;
    }
};

template <typename E>
E parse_enum(const std::map<std::string, std::string>& m, const std::string& key,
             std::optional<E> (*parser)(std::string_view)) {
    auto parsed = parser(need(m, key));
    if (!parsed) throw DataError("bad value '" + need(m, key) + "' for key '" + key + "'");
    return *parsed;
}

}  // namespace

std::string canonical_text(const Payload& payload) {
    return std::visit(CanonicalWriter{}, payload);
}

Payload payload_from_canonical(const std::string& topic, const std::string& text) {
    auto m = to_map(text);
    if (topic == topics::kUsers || topic == topics::kPercepts) {
        PerceptEvent e;
        e.kind = parse_enum<PerceptKind>(m, "kind", &percept_kind_from_string);
        e.user_id = need(m, "user");
        switch (e.kind) {
            case PerceptKind::PoseEngagement:
                e.engagement = need_number(m, "value");
                break;
            case PerceptKind::GroupMembership:
                e.group = split(need(m, "members"), ',');
                break;
            case PerceptKind::FaceValence:
                e.valence = need_number(m, "value");
                break;
            case PerceptKind::VoiceMood:
                e.mood = parse_enum<VoiceMood>(m, "value", &voice_mood_from_string);
                break;
            case PerceptKind::Utterance:
                e.text = need(m, "text");
                if (m.count("intent"))
                    e.true_intent = parse_enum<Intent>(m, "intent", &intent_from_string);
                if (m.count("classified"))
                    e.classified = parse_enum<Intent>(m, "classified", &intent_from_string);
                if (m.count("confidence")) e.confidence = need_number(m, "confidence");
                break;
            default:
                break;
        }
        return e;
    }
    if (topic == topics::kRegistration) {
        RegistrationEvent e;
        e.user_id = need(m, "user");
        e.persona = parse_enum<Persona>(m, "persona", &persona_from_string);
        e.channel = parse_enum<Channel>(m, "channel", &channel_from_string);
        return e;
    }
    if (topic == topics::kTriggers) {
        TriggerEvent e;
        e.user_id = need(m, "user");
        e.trigger = parse_enum<Trigger>(m, "trigger", &trigger_from_string);
        e.epoch = static_cast<std::uint64_t>(std::stoull(need(m, "epoch")));
        return e;
    }
    if (topic == topics::kInteractingUser) {
        InteractingUserEvent e;
        e.user_id = need(m, "user");
        e.state = parse_enum<UserState>(m, "state", &user_state_from_string);
        return e;
    }
    if (topic == topics::kStateChanges) {
        StateChangeEvent e;
        e.user_id = need(m, "user");
        e.old_state = parse_enum<UserState>(m, "old", &user_state_from_string);
        e.new_state = parse_enum<UserState>(m, "new", &user_state_from_string);
        e.trigger = parse_enum<Trigger>(m, "trigger", &trigger_from_string);
        return e;
    }
    if (topic == topics::kSpeech) {
        SpeechEvent e;
        e.user_id = need(m, "user");
        e.act = need(m, "act");
        e.text = need(m, "text");
        return e;
    }
    if (topic == topics::kFace) {
        FaceBehaviorEvent e;
        e.kind = need(m, "kind");
        if (e.kind == "expression")
            e.expression = parse_enum<Expression>(m, "expression", &expression_from_string);
        e.user_id = need(m, "user");
        return e;
    }
    if (topic == topics::kArms) {
        ArmEvent e;
        e.order_id = need(m, "order");
        e.action_id = need(m, "action");
        e.arm = need(m, "arm");
        e.phase = need(m, "phase");
        return e;
    }
    if (topic == topics::kOrders) {
        OrderEvent e;
        e.order_id = need(m, "order");
        e.user_id = need(m, "user");
        e.drink = need(m, "drink");
        e.status = parse_enum<OrderStatus>(m, "status", &order_status_from_string);
        return e;
    }
    if (topic == topics::kIntents) {
        IntentEvent e;
        e.user_id = need(m, "user");
        e.intent = parse_enum<Intent>(m, "intent", &intent_from_string);
        e.confidence = need_number(m, "confidence");
        e.action = need(m, "action");
        return e;
    }
    if (topic == topics::kEngagement) {
        EngagementEvent e;
        e.user_id = need(m, "user");
        e.score = need_number(m, "score");
        return e;
    }
    if (topic == topics::kRecommendations) {
        RecommendationEvent e;
        e.user_id = need(m, "user");
        e.strategy = parse_enum<Strategy>(m, "strategy", &strategy_from_string);
        e.drink = need(m, "drink");
        return e;
    }
    if (topic == topics::kNews) {
        NewsEvent e;
        e.user_id = need(m, "user");
        e.kind = need(m, "kind");
        if (m.count("id")) e.news_id = m.at("id");
        if (m.count("category")) e.category = m.at("category");
        if (m.count("source")) e.source = m.at("source");
        if (m.count("reason")) e.stop_reason = m.at("reason");
        return e;
    }
    if (topic == topics::kGestures) {
        GestureEvent e;
        e.order_id = need(m, "order");
        e.outcome = need(m, "outcome");
        e.start = SimTime::parse(need(m, "start"));
        e.arm = need(m, "arm");
        return e;
    }
    throw DataError("unknown topic '" + topic + "' in trace");
}

}  // namespace brillo
