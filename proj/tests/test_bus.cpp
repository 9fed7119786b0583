#include <algorithm>

#include "doctest.h"

#include "brillo/bus.hpp"
#include "brillo/error.hpp"
#include "brillo/rng.hpp"

using namespace brillo;

namespace {

Bus make_bus() { return Bus({"/a", "/b"}); }

PerceptEvent seen(const std::string& user) {
    PerceptEvent e;
    e.kind = PerceptKind::UserSeen;
    e.user_id = user;
    return e;
}

}  // namespace

TEST_CASE("publish with zero delay delivers at the current clock") {
    Bus bus = make_bus();
    std::vector<std::string> got;
    bus.subscribe("/a", "h", [&](const Message& m) {
        got.push_back(std::get<PerceptEvent>(m.payload).user_id);
    });
    std::int64_t seq = bus.publish("/a", seen("u1"));
    CHECK(seq == 1);
    auto delivered = bus.run_until(SimTime::from_seconds(0));
    CHECK(delivered.size() == 1);
    CHECK(delivered[0].publish_time == SimTime{});
    CHECK(got == std::vector<std::string>{"u1"});
}

TEST_CASE("identical due times deliver in publish order") {
    Bus bus = make_bus();
    std::vector<std::string> got;
    bus.subscribe("/a", "h", [&](const Message& m) {
        got.push_back(std::get<PerceptEvent>(m.payload).user_id);
    });
    bus.publish("/a", seen("first"), SimTime::from_seconds(1));
    bus.publish("/a", seen("second"), SimTime::from_seconds(1));
    bus.run_all();
    CHECK(got == std::vector<std::string>{"first", "second"});
}

TEST_CASE("delay is measured from the current clock") {
    Bus bus = make_bus();
    SimTime handler_time;
    bus.subscribe("/a", "outer", [&](const Message&) {
        bus.publish("/b", seen("x"), SimTime::from_seconds(5));
    });
    bus.subscribe("/b", "inner", [&](const Message& m) { handler_time = m.publish_time; });
    bus.publish("/a", seen("kick"), SimTime::from_seconds(2));
    bus.run_all();
    CHECK(handler_time == SimTime::from_seconds(7));
}

TEST_CASE("unknown topic is rejected listing the registry") {
    Bus bus = make_bus();
    CHECK_THROWS_WITH_AS(bus.publish("/nope", seen("u")),
                         doctest::Contains("known topics: /a, /b"), BusError);
    CHECK_THROWS_AS(bus.subscribe("/nope", "h", [](const Message&) {}), BusError);
}

TEST_CASE("duplicate (topic, callback) pairs are rejected") {
    Bus bus = make_bus();
    bus.subscribe("/a", "h", [](const Message&) {});
    CHECK_THROWS_AS(bus.subscribe("/a", "h", [](const Message&) {}), BusError);
    CHECK_NOTHROW(bus.subscribe("/b", "h", [](const Message&) {}));
}

TEST_CASE("messages published before a subscription are not replayed") {
    Bus bus = make_bus();
    bus.publish("/a", seen("early"));
    bus.run_all();
    int calls = 0;
    bus.subscribe("/a", "late", [&](const Message&) { ++calls; });
    bus.publish("/a", seen("later"));
    bus.run_all();
    CHECK(calls == 1);
}

TEST_CASE("multiple subscribers fire in subscription order") {
    Bus bus = make_bus();
    std::vector<int> order;
    bus.subscribe("/a", "one", [&](const Message&) { order.push_back(1); });
    bus.subscribe("/a", "two", [&](const Message&) { order.push_back(2); });
    bus.publish("/a", seen("u"));
    bus.run_all();
    CHECK(order == std::vector<int>{1, 2});
}

TEST_CASE("a throwing handler aborts the run and records the seq") {
    Bus bus = make_bus();
    bus.subscribe("/a", "boom", [](const Message&) { throw Error("kaput"); });
    std::int64_t seq = bus.publish("/a", seen("u"));
    std::string needle = "seq " + std::to_string(seq);
    CHECK_THROWS_WITH_AS(bus.run_all(), doctest::Contains(needle.c_str()), BusError);
}

TEST_CASE("empty queue yields an empty trace") {
    Bus bus = make_bus();
    CHECK(bus.run_until(SimTime::from_seconds(100)).empty());
    CHECK(bus.now() == SimTime::from_seconds(100));
}

TEST_CASE("run_until in two stages equals one run") {
    auto script = [](Bus& bus) {
        bus.subscribe("/a", "relay", [&bus](const Message& m) {
            const auto& e = std::get<PerceptEvent>(m.payload);
            if (e.user_id.size() < 3) {
                bus.publish("/b", e, SimTime::from_seconds(4));
            }
        });
        bus.publish("/a", seen("x"), SimTime::from_seconds(1));
        bus.publish("/a", seen("y"), SimTime::from_seconds(8));
        bus.publish("/a", seen("zzz"), SimTime::from_seconds(15));
    };
    Bus split = make_bus();
    script(split);
    split.run_until(SimTime::from_seconds(10));
    split.run_until(SimTime::from_seconds(20));
    Bus whole = make_bus();
    script(whole);
    whole.run_until(SimTime::from_seconds(20));
    CHECK(trace_to_text(split.trace()) == trace_to_text(whole.trace()));
}

TEST_CASE("random publish patterns deliver in (due, seq) order with no loss") {
    Rng rng(1234);
    for (int round = 0; round < 50; ++round) {
        Bus bus = make_bus();
        int published = 0;
        bus.subscribe("/a", "chain", [&](const Message&) {
            if (rng.uniform() < 0.3) {
                bus.publish("/b", seen("child"),
                            SimTime::from_ms(static_cast<std::int64_t>(rng.below(5000))));
                ++published;
            }
        });
        int n = 5 + static_cast<int>(rng.below(20));
        for (int i = 0; i < n; ++i) {
            bus.publish(rng.uniform() < 0.5 ? "/a" : "/b", seen("m"),
                        SimTime::from_ms(static_cast<std::int64_t>(rng.below(10000))));
            ++published;
        }
        bus.run_all();
        const Trace& trace = bus.trace();
        CHECK(static_cast<int>(trace.size()) == published);
        CHECK(bus.published_count() == bus.delivered_count());
        for (std::size_t i = 1; i < trace.size(); ++i) {
            bool ordered = trace[i - 1].publish_time < trace[i].publish_time ||
                           (trace[i - 1].publish_time == trace[i].publish_time &&
                            trace[i - 1].seq < trace[i].seq);
            CHECK(ordered);
        }
        // seq strictly increases in publish order by construction; verify
        // uniqueness across the delivered set.
        std::vector<std::int64_t> seqs;
        for (const auto& m : trace) seqs.push_back(m.seq);
        std::sort(seqs.begin(), seqs.end());
        CHECK(std::adjacent_find(seqs.begin(), seqs.end()) == seqs.end());
    }
}

TEST_CASE("trace text round-trips through the parser") {
    Bus bus = make_bus();
    bus.publish("/a", seen("u1"));
    SpeechEvent sp{"u1", "greeting", "Hello \"there\"\twith tabs"};
    Bus bus2({"/robot/speech"});
    bus2.publish("/robot/speech", sp, SimTime::from_seconds(1.5));
    bus2.run_all();
    std::string text = trace_to_text(bus2.trace());
    // parse back via report helpers (exercised further in test_engine)
    CHECK(text.find("/robot/speech") != std::string::npos);
}
