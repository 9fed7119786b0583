#include "brillo/report.hpp"

#include <algorithm>
#include <map>

#include "brillo/error.hpp"
#include "brillo/text.hpp"

namespace brillo {

Trace trace_from_text(const std::string& text) {
    Trace trace;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start < text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) end = text.size();
        std::string line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (trim(line).empty()) continue;
        auto cols = split(line, '\t');
        if (cols.size() < 4) {
            throw DataError("trace line " + std::to_string(line_no) +
                            ": expected time<TAB>seq<TAB>topic<TAB>payload");
        }
        Message m;
        try {
            m.publish_time = SimTime::parse(cols[0]);
            m.seq = std::stoll(cols[1]);
            m.topic = cols[2];
            // Payload text may itself contain tabs only inside quotes; the
            // writer never emits raw tabs, so re-join defensively.
            std::string payload_text = cols[3];
            for (std::size_t i = 4; i < cols.size(); ++i) payload_text += "\t" + cols[i];
            m.payload = payload_from_canonical(m.topic, payload_text);
        } catch (const std::exception& e) {
            throw DataError("trace line " + std::to_string(line_no) + ": " + e.what());
        }
        trace.push_back(std::move(m));
    }
    return trace;
}

RunReport build_report(const Trace& trace) {
    RunReport report;
    std::map<std::string, UserReport> users;
    std::vector<std::string> user_order;
    std::map<std::string, OrderReport> orders;
    std::map<std::string, std::pair<std::optional<SimTime>, std::optional<SimTime>>> arm_bounds;
    std::map<std::string, std::pair<double, int>> engagement;

    auto user_slot = [&](const std::string& id, SimTime at) -> UserReport& {
        auto it = users.find(id);
        if (it == users.end()) {
            UserReport u;
            u.user_id = id;
            u.arrival = at;
            user_order.push_back(id);
            return users.emplace(id, std::move(u)).first->second;
        }
        return it->second;
    };

    for (const Message& m : trace) {
        if (m.topic == topics::kUsers) {
            const auto& e = std::get<PerceptEvent>(m.payload);
            if (e.kind == PerceptKind::UserSeen) user_slot(e.user_id, m.publish_time);
        } else if (m.topic == topics::kStateChanges) {
            const auto& e = std::get<StateChangeEvent>(m.payload);
            if (e.new_state == UserState::Serving) {
                auto& u = user_slot(e.user_id, m.publish_time);
                if (!u.serving_start) {
                    u.serving_start = m.publish_time;
                    u.wait = m.publish_time - u.arrival;
                }
            }
        } else if (m.topic == topics::kOrders) {
            const auto& e = std::get<OrderEvent>(m.payload);
            auto& o = orders[e.order_id];
            o.order_id = e.order_id;
            o.drink = e.drink;
            if (e.status == OrderStatus::Served) {
                user_slot(e.user_id, m.publish_time).drinks_served.push_back(e.drink);
            }
        } else if (m.topic == topics::kArms) {
            const auto& e = std::get<ArmEvent>(m.payload);
            auto& bounds = arm_bounds[e.order_id];
            if (e.phase == "start") {
                if (!bounds.first || m.publish_time < *bounds.first) {
                    bounds.first = m.publish_time;
                }
            } else if (!bounds.second || m.publish_time > *bounds.second) {
                bounds.second = m.publish_time;
            }
        } else if (m.topic == topics::kEngagement) {
            const auto& e = std::get<EngagementEvent>(m.payload);
            auto& agg = engagement[e.user_id];
            agg.first += e.score;
            agg.second += 1;
        } else if (m.topic == topics::kRecommendations) {
            const auto& e = std::get<RecommendationEvent>(m.payload);
            report.strategy_use[std::string(to_string(e.strategy))] += 1;
        } else if (m.topic == topics::kGestures) {
            const auto& e = std::get<GestureEvent>(m.payload);
            if (e.outcome == "placed") {
                report.gestures_placed += 1;
            } else {
                report.gestures_dropped += 1;
            }
        } else if (m.topic == topics::kSpeech) {
            const auto& e = std::get<SpeechEvent>(m.payload);
            report.transcript.push_back(m.publish_time.str() + " robot->" + e.user_id + " [" +
                                        e.act + "]: " + e.text);
        } else if (m.topic == topics::kPercepts) {
            const auto& e = std::get<PerceptEvent>(m.payload);
            if (e.kind == PerceptKind::Utterance) {
                report.transcript.push_back(m.publish_time.str() + " " + e.user_id + ": " +
                                            e.text);
            }
        }
    }

    for (const auto& id : user_order) {
        UserReport u = users[id];
        auto agg = engagement.find(id);
        if (agg != engagement.end() && agg->second.second > 0) {
            u.mean_engagement = agg->second.first / agg->second.second;
        }
        report.users.push_back(std::move(u));
    }
    for (auto& [id, o] : orders) {
        auto bounds = arm_bounds.find(id);
        if (bounds != arm_bounds.end() && bounds->second.first && bounds->second.second) {
            o.makespan = *bounds->second.second - *bounds->second.first;
        }
        report.orders.push_back(o);
    }
    return report;
}

std::string RunReport::to_text() const {
    std::string out;
    out += "== users ==\n";
    for (const auto& u : users) {
        out += u.user_id;
        out += "\tarrival=" + u.arrival.str();
        out += "\tserving=" + (u.serving_start ? u.serving_start->str() : "-");
        out += "\twait=" + (u.wait ? u.wait->str() : "-");
        out += "\tmean_engagement=";
        out += u.mean_engagement ? format_number(*u.mean_engagement) : "-";
        out += "\tdrinks=";
        for (std::size_t i = 0; i < u.drinks_served.size(); ++i) {
            if (i) out += ",";
            out += u.drinks_served[i];
        }
        out += '\n';
    }
    out += "== orders ==\n";
    for (const auto& o : orders) {
        out += o.order_id + "\t" + o.drink + "\tmakespan=" +
               (o.makespan ? o.makespan->str() : "-") + "\n";
    }
    out += "== strategies ==\n";
    for (const auto& [strategy, count] : strategy_use) {
        out += strategy + "\t" + std::to_string(count) + "\n";
    }
    out += "== gestures ==\n";
    out += "placed\t" + std::to_string(gestures_placed) + "\n";
    out += "dropped\t" + std::to_string(gestures_dropped) + "\n";
    out += "== transcript ==\n";
    for (const auto& line : transcript) out += line + "\n";
    return out;
}

}  // namespace brillo
