#include <map>

#include "doctest.h"

#include "brillo/error.hpp"
#include "brillo/percepts.hpp"
#include "support.hpp"

using namespace brillo;
using brillo::testsupport::data_path;

TEST_CASE("empty scenario parses to zero events") {
    Scenario s = scenario_from_text("# just a comment\n\n");
    CHECK(s.events.empty());
    CHECK(s.users.empty());
}

TEST_CASE("bundled two_customers scenario has the scripted user-seen events") {
    Scenario s = script_load(data_path("scenarios/two_customers.scn"));
    std::vector<std::pair<std::string, SimTime>> seen;
    for (const auto& ev : s.events) {
        if (ev.percept && ev.percept->kind == PerceptKind::UserSeen) {
            seen.emplace_back(ev.percept->user_id, ev.at);
        }
    }
    REQUIRE(seen.size() == 2);
    CHECK(seen[0] == std::pair<std::string, SimTime>{"uma", SimTime::from_seconds(0)});
    CHECK(seen[1] == std::pair<std::string, SimTime>{"noa", SimTime::from_seconds(3)});
}

TEST_CASE("scenario referencing an undefined user fails at load") {
    CHECK_THROWS_WITH_AS(scenario_from_text("t=0 user-seen u9\n"),
                         doctest::Contains("undefined user 'u9'"), DataError);
}

TEST_CASE("scenario validation errors carry line numbers") {
    CHECK_THROWS_WITH_AS(scenario_from_text("user u1\nt=-2 user-seen u1\n"),
                         doctest::Contains(":2:"), DataError);
    CHECK_THROWS_AS(scenario_from_text("user u1\nt=1 pose-engagement u1 value=1.5\n"),
                    DataError);
    CHECK_THROWS_AS(scenario_from_text("user u1\nt=1 utterance u1\n"), DataError);
    CHECK_THROWS_AS(scenario_from_text("user u1\nt=1 group-membership u1 members=u1,ux\n"),
                    DataError);
}

TEST_CASE("recall-1 intents always survive the channel") {
    ConfusionChannel channel = ConfusionChannel::with_default_recall(7);
    for (int i = 0; i < 500; ++i) {
        auto [classified, confidence] = channel.corrupt_intent(Intent::OrderConfirm);
        CHECK(classified == Intent::OrderConfirm);
        CHECK(confidence >= 0.5);
        CHECK(confidence <= 1.0);
    }
}

TEST_CASE("Menu recall 0.5 lands near half over 10k seeded samples") {
    ConfusionChannel channel = ConfusionChannel::with_default_recall(0);
    int correct = 0;
    for (int i = 0; i < 10000; ++i) {
        if (channel.corrupt_intent(Intent::Menu).first == Intent::Menu) ++correct;
    }
    CHECK(correct >= 4850);
    CHECK(correct <= 5150);
}

TEST_CASE("invalid recall and confidence ranges are rejected") {
    std::map<Intent, double> recall;
    for (Intent i : kAllIntents) recall[i] = 1.0;
    recall[Intent::Menu] = 0.0;
    CHECK_THROWS_AS(ConfusionChannel(recall, 0.5, 1.0, 0), Error);
    recall[Intent::Menu] = 0.5;
    CHECK_THROWS_AS(ConfusionChannel(recall, 0.4, 1.0, 0), Error);
    CHECK_THROWS_AS(ConfusionChannel(recall, 0.9, 0.6, 0), Error);
}

TEST_CASE("an intent without a recall entry is an error") {
    ConfusionChannel partial({{Intent::Order, 0.8}}, 0.5, 1.0, 0);
    CHECK_NOTHROW(partial.corrupt_intent(Intent::Order));
    CHECK_THROWS_WITH_AS(partial.corrupt_intent(Intent::Menu),
                         doctest::Contains("no recall entry"), Error);
}

TEST_CASE("misclassifications are never the true intent and cover the rest uniformly") {
    ConfusionChannel channel = ConfusionChannel::with_default_recall(42);
    std::map<Intent, int> wrong;
    int errors = 0;
    for (int i = 0; i < 20000; ++i) {
        auto [classified, _] = channel.corrupt_intent(Intent::Menu);
        if (classified != Intent::Menu) {
            ++errors;
            wrong[classified] += 1;
        }
    }
    CHECK(errors > 9000);  // recall 0.5
    CHECK(wrong.size() == kIntentCount - 1);
    // Loose chi-square-style sanity bound: every wrong class within 20% of
    // the uniform share.
    double share = static_cast<double>(errors) / (kIntentCount - 1);
    for (const auto& [intent, count] : wrong) {
        CHECK(count > share * 0.8);
        CHECK(count < share * 1.2);
    }
}

TEST_CASE("emit publishes every event and respects the noise switch") {
    Scenario s = scenario_from_text(
        "user u1\n"
        "t=0 user-seen u1\n"
        "t=1 utterance u1 text=\"a mojito\" intent=Order\n"
        "t=2 pose-engagement u1 value=0.5\n");
    Bus bus(all_topics());
    emit(s, bus, nullptr);
    Trace trace = bus.run_all();
    REQUIRE(trace.size() == 3);
    const auto& utterance = std::get<PerceptEvent>(trace[1].payload);
    CHECK(utterance.classified == Intent::Order);
    CHECK(utterance.confidence == 1.0);

    // Same seed, same stream, twice.
    auto run_noisy = [&] {
        Bus b(all_topics());
        ConfusionChannel channel = ConfusionChannel::with_default_recall(3);
        emit(s, b, &channel);
        b.run_all();
        return trace_to_text(b.trace());
    };
    CHECK(run_noisy() == run_noisy());
}
