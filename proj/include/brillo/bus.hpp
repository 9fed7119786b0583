#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "brillo/events.hpp"
#include "brillo/time.hpp"

namespace brillo {

struct Message {
    std::string topic;
    Payload payload;
    SimTime publish_time;   // due time on the simulated clock
    std::int64_t seq = 0;   // per-run monotone publish counter
};

using Trace = std::vector<Message>;

// Serializes delivered messages, one line each:
// time<TAB>seq<TAB>topic<TAB>payload-as-canonical-text
std::string trace_to_text(const Trace& trace);

// Deterministic discrete-event clock plus named-topic publish/subscribe bus.
// Single-threaded: handlers run to completion before the next dispatch, and
// parallel runs must use independent Bus instances.
class Bus {
public:
    using Handler = std::function<void(const Message&)>;

    // The topic registry is closed: only topics passed here can be used.
    explicit Bus(std::vector<std::string> topics);

    // Enqueues a message at now + delay. Returns the message seq.
    std::int64_t publish(const std::string& topic, Payload payload, SimTime delay = SimTime{});

    // Registers a handler; handlers on one topic fire in subscription order.
    // A (topic, callback_id) pair may be registered only once.
    std::uint64_t subscribe(const std::string& topic, const std::string& callback_id,
                            Handler handler);

    // Dispatches every message due at or before t_end in (due_time, seq)
    // order; returns the messages delivered by this call. A throwing handler
    // aborts the run with the offending seq recorded in the error text.
    Trace run_until(SimTime t_end);

    // Drains the queue completely.
    Trace run_all();

    // Dispatches exactly one pending message; false when the queue is empty.
    bool step();

    SimTime now() const { return now_; }
    bool idle() const { return pending_.empty(); }
    std::size_t published_count() const { return static_cast<std::size_t>(next_seq_ - 1); }
    std::size_t delivered_count() const { return delivered_count_; }

    // Every message delivered since construction, in delivery order.
    const Trace& trace() const { return trace_; }

private:
    struct Pending {
        SimTime due;
        std::int64_t seq;
        Message message;
        bool operator>(const Pending& o) const {
            if (due != o.due) return due > o.due;
            return seq > o.seq;
        }
    };

    void dispatch(Message&& msg);

    std::set<std::string> topics_;
    std::priority_queue<Pending, std::vector<Pending>, std::greater<>> pending_;
    std::map<std::string, std::vector<std::pair<std::string, Handler>>> subscribers_;
    SimTime now_;
    std::int64_t next_seq_ = 1;
    std::size_t delivered_count_ = 0;
    Trace trace_;
};

}  // namespace brillo
