#include "brillo/bus.hpp"

#include "brillo/error.hpp"

namespace brillo {

std::string trace_to_text(const Trace& trace) {
    std::string out;
    for (const Message& m : trace) {
        out += m.publish_time.str();
        out += '\t';
        out += std::to_string(m.seq);
        out += '\t';
        out += m.topic;
        out += '\t';
        out += canonical_text(m.payload);
        out += '\n';
    }
    return out;
}

Bus::Bus(std::vector<std::string> topics) {
    for (auto& t : topics) topics_.insert(std::move(t));
}

std::int64_t Bus::publish(const std::string& topic, Payload payload, SimTime delay) {
    if (!topics_.count(topic)) {
        std::string known;
        for (const auto& t : topics_) {
            if (!known.empty()) known += ", ";
            known += t;
        }
        throw BusError("unknown topic '" + topic + "'; known topics: " + known);
    }
    if (delay < SimTime{}) throw BusError("negative publish delay");
    std::int64_t seq = next_seq_++;
    SimTime due = now_ + delay;
    pending_.push(Pending{due, seq, Message{topic, std::move(payload), due, seq}});
    return seq;
}

std::uint64_t Bus::subscribe(const std::string& topic, const std::string& callback_id,
                             Handler handler) {
    if (!topics_.count(topic)) throw BusError("unknown topic '" + topic + "'");
    auto& subs = subscribers_[topic];
    for (const auto& [id, _] : subs) {
        if (id == callback_id) {
            throw BusError("duplicate subscription '" + callback_id + "' on topic '" + topic +
                           "'");
        }
    }
    subs.emplace_back(callback_id, std::move(handler));
    return static_cast<std::uint64_t>(subs.size());
}

void Bus::dispatch(Message&& msg) {
    now_ = msg.publish_time;
    trace_.push_back(msg);
    ++delivered_count_;
    auto it = subscribers_.find(msg.topic);
    if (it == subscribers_.end()) return;
    for (const auto& [id, handler] : it->second) {
        try {
            handler(msg);
        } catch (const std::exception& e) {
            throw BusError("handler '" + id + "' failed at seq " + std::to_string(msg.seq) +
                           ": " + e.what());
        }
    }
}

Trace Bus::run_until(SimTime t_end) {
    if (t_end < now_) throw BusError("run_until target precedes the clock");
    std::size_t first = trace_.size();
    while (!pending_.empty() && pending_.top().due <= t_end) {
        Message msg = std::move(const_cast<Pending&>(pending_.top()).message);
        pending_.pop();
        dispatch(std::move(msg));
    }
    if (now_ < t_end) now_ = t_end;
    return Trace(trace_.begin() + static_cast<std::ptrdiff_t>(first), trace_.end());
}

Trace Bus::run_all() {
    std::size_t first = trace_.size();
    while (!pending_.empty()) {
        Message msg = std::move(const_cast<Pending&>(pending_.top()).message);
        pending_.pop();
        dispatch(std::move(msg));
    }
    return Trace(trace_.begin() + static_cast<std::ptrdiff_t>(first), trace_.end());
}

bool Bus::step() {
    if (pending_.empty()) return false;
    Message msg = std::move(const_cast<Pending&>(pending_.top()).message);
    pending_.pop();
    dispatch(std::move(msg));
    return true;
}

}  // namespace brillo
