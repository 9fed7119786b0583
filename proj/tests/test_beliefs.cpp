#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

#include "brillo/beliefs.hpp"
#include "brillo/error.hpp"
#include "brillo/graph.hpp"
#include "brillo/rng.hpp"
#include "brillo/text.hpp"
#include "support.hpp"

using namespace brillo;
using brillo::testsupport::data_path;

namespace {

const SemanticGraph& graph() {
    static SemanticGraph g = SemanticGraph::load(data_path("graph.tsv"));
    return g;
}

// Independent shared-ingredient oracle: re-reads the edge list file with a
// throwaway parser and counts by nested loops.
std::map<std::string, std::vector<std::string>> ingredients_by_drink_from_file() {
    std::ifstream in(data_path("graph.tsv"));
    REQUIRE(in);
    std::map<std::string, std::vector<std::string>> result;
    std::string line;
    while (std::getline(in, line)) {
        auto cols = split(line, '\t');
        if (cols.size() == 4 && cols[0] == "EDGE" && cols[1] == "contains") {
            result[cols[2]].push_back(cols[3]);
        }
    }
    return result;
}

int oracle_shared(const std::vector<std::string>& a, const std::vector<std::string>& b) {
    int n = 0;
    for (const auto& x : a) {
        for (const auto& y : b) {
            if (x == y) ++n;
        }
    }
    return n;
}

UserRecord make_user(const std::string& id) {
    UserRecord u;
    u.user_id = id;
    u.persona = Persona::Other;
    u.visit_count = 1;
    return u;
}

OrderHistoryEntry entry(const std::string& drink, std::int64_t t_ms,
                        std::optional<int> rating = std::nullopt) {
    OrderHistoryEntry e;
    e.drink_id = drink;
    e.timestamp = SimTime::from_ms(t_ms);
    e.rating = rating;
    return e;
}

}  // namespace

TEST_CASE("bundled graph loads with twelve categorized drinks") {
    CHECK(graph().drinks().size() == 12);
    for (const auto& d : graph().drinks()) {
        CHECK_FALSE(graph().category_of(d).empty());
        CHECK_FALSE(graph().ingredients_of(d).empty());
    }
}

TEST_CASE("self intersection equals the ingredient count, disjoint recipes share zero") {
    for (const auto& d : graph().drinks()) {
        CHECK(graph().shared_ingredients(d, d) ==
              static_cast<int>(graph().ingredients_of(d).size()));
    }
    CHECK(graph().shared_ingredients("Green Power", "Daiquiri") == 0);
    CHECK_THROWS_AS(graph().shared_ingredients("Green Power", "Nope"), Error);
}

TEST_CASE("shared ingredients match the brute-force oracle and are symmetric") {
    auto oracle = ingredients_by_drink_from_file();
    for (const auto& a : graph().drinks()) {
        for (const auto& b : graph().drinks()) {
            int expected = oracle_shared(oracle[a], oracle[b]);
            CHECK(graph().shared_ingredients(a, b) == expected);
            CHECK(graph().shared_ingredients(a, b) == graph().shared_ingredients(b, a));
        }
    }
}

TEST_CASE("exactly one smoothie shares three ingredients with Green Power") {
    int sharing_three = 0;
    for (const auto& d : graph().drinks()) {
        if (d == "Green Power" || graph().category_of(d) != "SMOOTHIE") continue;
        int shared = graph().shared_ingredients("Green Power", d);
        CHECK(shared <= 3);
        if (shared == 3) ++sharing_three;
    }
    CHECK(sharing_three == 1);
    CHECK(graph().most_similar_drink("Green Power", true) == "Morning Glow");
}

TEST_CASE("most_similar_drink respects the category flag, exclusions and tie rule") {
    auto same = graph().most_similar_drink("Green Power", true);
    REQUIRE(same.has_value());
    CHECK(graph().category_of(*same) == "SMOOTHIE");
    auto other = graph().most_similar_drink("Green Power", false);
    REQUIRE(other.has_value());
    CHECK(graph().category_of(*other) == "COCKTAIL");

    std::set<std::string> all;
    for (const auto& d : graph().drinks()) {
        if (d != "Green Power" && graph().category_of(d) == "SMOOTHIE") all.insert(d);
    }
    CHECK(graph().most_similar_drink("Green Power", true, all) == std::nullopt);

    // Tie between two equally similar candidates goes lexicographic.
    SemanticGraph tie = SemanticGraph::from_text(
        "NODE\tCATEGORY\tC\n"
        "NODE\tDRINK\tzeta\nNODE\tDRINK\talpha\nNODE\tDRINK\tbeta\n"
        "NODE\tFOOD_INGREDIENT\ti1\n"
        "EDGE\tbelongs-to\tzeta\tC\nEDGE\tbelongs-to\talpha\tC\nEDGE\tbelongs-to\tbeta\tC\n"
        "EDGE\tcontains\tzeta\ti1\nEDGE\tcontains\talpha\ti1\nEDGE\tcontains\tbeta\ti1\n");
    CHECK(tie.most_similar_drink("zeta", true) == "alpha");
}

TEST_CASE("graph validation rejects broken files") {
    CHECK_THROWS_AS(SemanticGraph::from_text("NODE\tDRINK\td1\n"), DataError);  // no category
    CHECK_THROWS_AS(
        SemanticGraph::from_text("NODE\tCATEGORY\tC\nNODE\tDRINK\td1\n"
                                 "EDGE\tbelongs-to\td1\tC\nEDGE\tcontains\td1\tmystery\n"),
        DataError);
    CHECK_THROWS_AS(
        SemanticGraph::from_text("NODE\tCATEGORY\tC\nNODE\tCATEGORY\tD\nNODE\tDRINK\td1\n"
                                 "EDGE\tbelongs-to\td1\tC\nEDGE\tbelongs-to\td1\tD\n"),
        DataError);
}

TEST_CASE("preferred drink follows mean rating with recency tie-break") {
    UserRecord u = make_user("u");
    u.orders = {entry("A", 100, 5), entry("B", 200, 3)};
    CHECK(preferred_drink(u) == "A");

    u.orders = {entry("A", 100, 4), entry("B", 200, 4)};
    CHECK(preferred_drink(u) == "B");

    u.orders = {entry("A", 100), entry("A", 300), entry("B", 200)};
    CHECK(preferred_drink(u) == "A");  // no ratings: most frequent

    u.orders.clear();
    CHECK(preferred_drink(u) == std::nullopt);
}

TEST_CASE("preferred drink matches a brute-force scan over random histories") {
    Rng rng(99);
    const std::vector<std::string> drinks = {"A", "B", "C", "D"};
    for (int round = 0; round < 1000; ++round) {
        UserRecord u = make_user("u");
        int n = 1 + static_cast<int>(rng.below(8));
        for (int i = 0; i < n; ++i) {
            OrderHistoryEntry e;
            e.drink_id = drinks[rng.below(drinks.size())];
            e.timestamp = SimTime::from_ms(static_cast<std::int64_t>(rng.below(1000)));
            if (rng.uniform() < 0.6) e.rating = 1 + static_cast<int>(rng.below(5));
            u.orders.push_back(e);
        }

        // Oracle: explicit scan, written independently of the implementation.
        std::map<std::string, std::pair<double, int>> rating_acc;
        std::map<std::string, int> counts;
        std::map<std::string, SimTime> latest;
        for (const auto& e : u.orders) {
            counts[e.drink_id] += 1;
            if (!latest.count(e.drink_id) || e.timestamp > latest[e.drink_id]) {
                latest[e.drink_id] = e.timestamp;
            }
            if (e.rating) {
                rating_acc[e.drink_id].first += *e.rating;
                rating_acc[e.drink_id].second += 1;
            }
        }
        std::optional<std::string> expected;
        if (!rating_acc.empty()) {
            double best = -1;
            SimTime best_t;
            for (const auto& [drink, acc] : rating_acc) {
                double mean = acc.first / acc.second;
                if (!expected || mean > best ||
                    (mean == best && latest[drink] > best_t) ||
                    (mean == best && latest[drink] == best_t && drink < *expected)) {
                    expected = drink;
                    best = mean;
                    best_t = latest[drink];
                }
            }
        } else {
            int best = -1;
            SimTime best_t;
            for (const auto& [drink, count] : counts) {
                if (!expected || count > best || (count == best && latest[drink] > best_t) ||
                    (count == best && latest[drink] == best_t && drink < *expected)) {
                    expected = drink;
                    best = count;
                    best_t = latest[drink];
                }
            }
        }
        CHECK(preferred_drink(u) == expected);
    }
}

TEST_CASE("most ordered drink counts globally with lexicographic ties") {
    LongTermStore store;
    auto& a = store.upsert("a");
    a.orders = {entry("Mojito", 1), entry("Mojito", 2), entry("Daiquiri", 3)};
    auto& b = store.upsert("b");
    b.orders = {entry("Daiquiri", 4)};
    CHECK(store.most_ordered_drink() == "Daiquiri");  // 2-2 tie, lexicographic

    b.orders.push_back(entry("Mojito", 5));
    CHECK(store.most_ordered_drink() == "Mojito");

    LongTermStore empty;
    CHECK_THROWS_WITH_AS(empty.most_ordered_drink(), doctest::Contains("cold start"), Error);
}

TEST_CASE("most ordered matches a brute-force count over random logs") {
    Rng rng(7);
    const std::vector<std::string> drinks = {"A", "B", "C"};
    for (int round = 0; round < 300; ++round) {
        LongTermStore store;
        std::map<std::string, int> oracle;
        int users = 1 + static_cast<int>(rng.below(4));
        for (int u = 0; u < users; ++u) {
            auto& record = store.upsert("u" + std::to_string(u));
            int n = static_cast<int>(rng.below(6));
            for (int i = 0; i < n; ++i) {
                std::string d = drinks[rng.below(drinks.size())];
                record.orders.push_back(entry(d, i));
                oracle[d] += 1;
            }
        }
        if (oracle.empty()) {
            CHECK_THROWS_AS(store.most_ordered_drink(), Error);
            continue;
        }
        std::string expected;
        int best = -1;
        for (const auto& [d, c] : oracle) {
            if (c > best) {
                expected = d;
                best = c;
            }
        }
        CHECK(store.most_ordered_drink() == expected);
    }
}

TEST_CASE("long-term store round-trips losslessly") {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "brillo_store_test";
    fs::create_directories(dir);
    std::string path = (dir / "profiles.jsonl").string();

    LongTermStore empty;
    empty.persist(path);
    CHECK(LongTermStore::load(path) == empty);

    Rng rng(5);
    LongTermStore store;
    for (int u = 0; u < 50; ++u) {
        auto& record = store.upsert("user" + std::to_string(u));
        record.persona = static_cast<Persona>(rng.below(3));
        record.registered_at = SimTime::from_ms(static_cast<std::int64_t>(rng.below(100000)));
        record.visit_count = static_cast<int>(rng.below(20));
        record.interaction_prefs = rng.uniform() < 0.5 ? Channel::Totem : Channel::Bar;
        int n = static_cast<int>(rng.below(6));
        for (int i = 0; i < n; ++i) {
            OrderHistoryEntry e;
            e.drink_id = "Drink " + std::to_string(rng.below(5));
            e.timestamp = SimTime::from_ms(static_cast<std::int64_t>(rng.below(100000)));
            if (rng.uniform() < 0.5) e.rating = 1 + static_cast<int>(rng.below(5));
            if (rng.uniform() < 0.5) e.engagement_avg = rng.uniform();
            if (rng.uniform() < 0.3) e.topics_liked = {"sport", "tech"};
            record.orders.push_back(e);
        }
        if (rng.uniform() < 0.5) record.liked_news_categories["sport"] = rng.uniform() * 5;
    }
    store.persist(path);
    CHECK(LongTermStore::load(path) == store);

    // Truncated record reports its number.
    std::ofstream out(path, std::ios::app);
    out << "{\"user\":\"broken\"\n";
    out.close();
    CHECK_THROWS_WITH_AS(LongTermStore::load(path), doctest::Contains("record 51"), DataError);
}

TEST_CASE("order status transitions follow the fixed relation") {
    WorkingState ws;
    OrderRequest req;
    req.product = "Mojito";
    std::string id = ws.add_order("u", req);
    CHECK(ws.find(id)->status == OrderStatus::Pending);
    ws.advance(id, OrderStatus::Confirmed);
    ws.advance(id, OrderStatus::Preparing);
    CHECK_THROWS_AS(ws.advance(id, OrderStatus::Cancelled), Error);  // too late
    ws.advance(id, OrderStatus::Served);
    CHECK_THROWS_AS(ws.advance(id, OrderStatus::Pending), Error);

    std::string second = ws.add_order("u", req);
    ws.advance(second, OrderStatus::Cancelled);
    CHECK(ws.find(second)->status == OrderStatus::Cancelled);
}

TEST_CASE("fuzzing status transitions never reaches an illegal state") {
    Rng rng(11);
    const std::vector<OrderStatus> all = {OrderStatus::Pending, OrderStatus::Confirmed,
                                          OrderStatus::Preparing, OrderStatus::Served,
                                          OrderStatus::Cancelled};
    for (int round = 0; round < 200; ++round) {
        WorkingState ws;
        OrderRequest req;
        req.product = "Mojito";
        std::string id = ws.add_order("u", req);
        for (int step = 0; step < 20; ++step) {
            OrderStatus target = all[rng.below(all.size())];
            OrderStatus before = ws.find(id)->status;
            bool legal = WorkingState::legal_transition(before, target);
            try {
                ws.advance(id, target);
                CHECK(legal);
            } catch (const Error&) {
                CHECK_FALSE(legal);
                CHECK(ws.find(id)->status == before);
            }
        }
    }
}

TEST_CASE("only one order per user may be in preparation") {
    WorkingState ws;
    OrderRequest req;
    req.product = "Mojito";
    std::string first = ws.add_order("u", req);
    ws.advance(first, OrderStatus::Confirmed);
    ws.advance(first, OrderStatus::Preparing);
    std::string second = ws.add_order("u", req);
    ws.advance(second, OrderStatus::Confirmed);
    CHECK_THROWS_AS(ws.advance(second, OrderStatus::Preparing), Error);
}
