#include "brillo/percepts.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "brillo/error.hpp"
#include "brillo/text.hpp"

namespace brillo {

namespace {

double parse_double(const std::string& raw, int line_no, const char* what) {
    try {
        std::size_t pos = 0;
        double v = std::stod(raw, &pos);
        if (pos != raw.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw DataError("line " + std::to_string(line_no) + ": bad " + what + " '" + raw + "'");
    }
}

}  // namespace

Scenario scenario_from_text(const std::string& text, const std::string& origin) {
    Scenario scenario;
    std::set<std::string> cast;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    auto fail = [&](const std::string& msg) {
        throw DataError(origin + ":" + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        std::vector<std::string> tokens;
        try {
            tokens = tokenize_quoted(line);
        } catch (const DataError& e) {
            fail(e.what());
        }
        if (tokens[0] == "user") {
            if (tokens.size() < 2) fail("user line needs an id");
            if (!cast.insert(tokens[1]).second) fail("duplicate user '" + tokens[1] + "'");
            scenario.users.push_back(tokens[1]);
            continue;
        }
        if (tokens[0].rfind("t=", 0) != 0) fail("expected 't=<seconds>' or 'user' line");
        SimTime at;
        try {
            at = SimTime::parse(tokens[0].substr(2));
        } catch (const DataError& e) {
            fail(e.what());
        }
        if (at < SimTime{}) fail("negative timestamp");
        if (tokens.size() < 3) fail("expected '<kind> <user_id>' after the timestamp");
        const std::string& kind_text = tokens[1];
        const std::string& user_id = tokens[2];
        if (!cast.count(user_id)) fail("undefined user '" + user_id + "'");

        std::map<std::string, std::string> args;
        for (std::size_t i = 3; i < tokens.size(); ++i) {
            auto eq = tokens[i].find('=');
            if (eq == std::string::npos) fail("expected key=value, got '" + tokens[i] + "'");
            args[tokens[i].substr(0, eq)] = tokens[i].substr(eq + 1);
        }

        ScenarioEvent ev;
        ev.at = at;
        if (kind_text == "register") {
            RegistrationEvent reg;
            reg.user_id = user_id;
            if (args.count("persona")) {
                auto p = persona_from_string(args["persona"]);
                if (!p) fail("unknown persona '" + args["persona"] + "'");
                reg.persona = *p;
            }
            if (args.count("channel")) {
                auto c = channel_from_string(args["channel"]);
                if (!c) fail("unknown channel '" + args["channel"] + "'");
                reg.channel = *c;
            }
            ev.registration = reg;
            scenario.events.push_back(std::move(ev));
            continue;
        }

        auto kind = percept_kind_from_string(kind_text);
        if (!kind) fail("unknown event kind '" + kind_text + "'");
        PerceptEvent pe;
        pe.kind = *kind;
        pe.user_id = user_id;
        switch (*kind) {
            case PerceptKind::PoseEngagement: {
                if (!args.count("value")) fail("pose-engagement needs value=");
                pe.engagement = parse_double(args["value"], line_no, "engagement");
                if (pe.engagement < 0.0 || pe.engagement > 1.0)
                    fail("engagement outside [0,1]");
                break;
            }
            case PerceptKind::FaceValence: {
                if (!args.count("value")) fail("face-valence needs value=");
                pe.valence = parse_double(args["value"], line_no, "valence");
                if (pe.valence < -1.0 || pe.valence > 1.0) fail("valence outside [-1,1]");
                break;
            }
            case PerceptKind::VoiceMood: {
                if (!args.count("value")) fail("voice-mood needs value=");
                auto m = voice_mood_from_string(args["value"]);
                if (!m) fail("unknown mood '" + args["value"] + "'");
                pe.mood = *m;
                break;
            }
            case PerceptKind::GroupMembership: {
                if (!args.count("members")) fail("group-membership needs members=");
                pe.group = split(args["members"], ',');
                bool self = false;
                for (const auto& member : pe.group) {
                    if (!cast.count(member)) fail("undefined user '" + member + "' in group");
                    if (member == user_id) self = true;
                }
                if (!self) fail("group set must contain the subject user");
                break;
            }
            case PerceptKind::Utterance: {
                if (!args.count("text")) fail("utterance needs text=");
                pe.text = args["text"];
                if (args.count("intent")) {
                    auto i = intent_from_string(args["intent"]);
                    if (!i) fail("unknown intent '" + args["intent"] + "'");
                    pe.true_intent = *i;
                }
                break;
            }
            case PerceptKind::UserSeen:
            case PerceptKind::UserLost:
                break;
        }
        ev.percept = std::move(pe);
        scenario.events.push_back(std::move(ev));
    }
    return scenario;
}

Scenario script_load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open scenario file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return scenario_from_text(buf.str(), path);
}

ConfusionChannel::ConfusionChannel(std::map<Intent, double> recall, double confidence_lo,
                                   double confidence_hi, std::uint64_t seed)
    : recall_(std::move(recall)),
      confidence_lo_(confidence_lo),
      confidence_hi_(confidence_hi),
      rng_(seed) {
    for (const auto& [intent, r] : recall_) {
        if (r <= 0.0 || r > 1.0) {
            throw Error("recall for " + std::string(to_string(intent)) + " outside (0,1]");
        }
    }
    if (confidence_lo_ < 0.5 || confidence_hi_ > 1.0 || confidence_lo_ > confidence_hi_) {
        throw Error("confidence range must satisfy 0.5 <= lo <= hi <= 1");
    }
}

ConfusionChannel ConfusionChannel::with_default_recall(std::uint64_t seed,
                                                       double delete_order_recall) {
    // Published per-intent recall; the DeleteOrder fallback is configurable
    // because no row was published for it.
    std::map<Intent, double> recall = {
        {Intent::AnswerGreeting, 1.0}, {Intent::OrderConfirm, 1.0},
        {Intent::OrderReject, 1.0},    {Intent::DeleteOrder, delete_order_recall},
        {Intent::Help, 1.0},           {Intent::Menu, 0.5},
        {Intent::Order, 0.81},         {Intent::NewsConfirm, 0.83},
        {Intent::NewsReject, 0.75},    {Intent::Evaluation, 1.0},
    };
    return ConfusionChannel(std::move(recall), 0.5, 1.0, seed);
}

double ConfusionChannel::recall(Intent i) const {
    auto it = recall_.find(i);
    if (it == recall_.end()) {
        throw Error("no recall entry for intent " + std::string(to_string(i)));
    }
    return it->second;
}

std::pair<Intent, double> ConfusionChannel::corrupt_intent(Intent true_intent) {
    double r = recall(true_intent);
    double confidence = rng_.uniform(confidence_lo_, confidence_hi_);
    if (rng_.uniform() < r) return {true_intent, confidence};
    // Error mass spread uniformly over the other intents.
    std::uint64_t pick = rng_.below(kIntentCount - 1);
    std::size_t index = 0;
    for (std::size_t i = 0; i < kIntentCount; ++i) {
        if (static_cast<Intent>(i) == true_intent) continue;
        if (index == pick) return {static_cast<Intent>(i), confidence};
        ++index;
    }
    return {true_intent, confidence};  // unreachable
}

void emit(const Scenario& scenario, Bus& bus, ConfusionChannel* channel) {
    for (const auto& ev : scenario.events) {
        SimTime delay = ev.at - bus.now();
        if (delay < SimTime{}) delay = SimTime{};
        if (ev.registration) {
            bus.publish(topics::kRegistration, *ev.registration, delay);
            continue;
        }
        PerceptEvent pe = *ev.percept;
        bool on_users =
            pe.kind == PerceptKind::UserSeen || pe.kind == PerceptKind::UserLost;
        if (pe.kind == PerceptKind::Utterance && pe.true_intent) {
            if (channel) {
                auto [classified, confidence] = channel->corrupt_intent(*pe.true_intent);
                pe.classified = classified;
                pe.confidence = confidence;
            } else {
                pe.classified = pe.true_intent;
                pe.confidence = 1.0;
            }
        }
        bus.publish(on_users ? topics::kUsers : topics::kPercepts, std::move(pe), delay);
    }
}

}  // namespace brillo
