#include "brillo/beliefs.hpp"

#include <algorithm>
#include <fstream>

#include <nlohmann/json.hpp>

#include "brillo/error.hpp"

namespace brillo {

namespace {

using nlohmann::json;

json entry_to_json(const OrderHistoryEntry& e) {
    json j;
    j["drink"] = e.drink_id;
    j["t"] = e.timestamp.ms();
    if (e.rating) j["rating"] = *e.rating;
    if (e.engagement_avg) j["engagement"] = *e.engagement_avg;
    j["channel"] = std::string(to_string(e.channel));
    if (!e.topics_liked.empty()) j["topics"] = e.topics_liked;
    return j;
}

OrderHistoryEntry entry_from_json(const json& j) {
    OrderHistoryEntry e;
    e.drink_id = j.at("drink").get<std::string>();
    e.timestamp = SimTime::from_ms(j.at("t").get<std::int64_t>());
    if (j.contains("rating")) {
        e.rating = j.at("rating").get<int>();
        if (*e.rating < 1 || *e.rating > 5) throw DataError("rating outside 1..5");
    }
    if (j.contains("engagement")) e.engagement_avg = j.at("engagement").get<double>();
    if (j.contains("channel")) {
        auto c = channel_from_string(j.at("channel").get<std::string>());
        if (!c) throw DataError("unknown channel");
        e.channel = *c;
    }
    if (j.contains("topics")) e.topics_liked = j.at("topics").get<std::vector<std::string>>();
    return e;
}

json record_to_json(const UserRecord& u) {
    json j;
    j["user"] = u.user_id;
    j["persona"] = std::string(to_string(u.persona));
    j["registered_at"] = u.registered_at.ms();
    j["visits"] = u.visit_count;
    j["prefs"] = std::string(to_string(u.interaction_prefs));
    json orders = json::array();
    for (const auto& e : u.orders) orders.push_back(entry_to_json(e));
    j["orders"] = std::move(orders);
    if (!u.liked_news_categories.empty()) j["liked_news"] = u.liked_news_categories;
    return j;
}

UserRecord record_from_json(const json& j) {
    UserRecord u;
    u.user_id = j.at("user").get<std::string>();
    auto p = persona_from_string(j.at("persona").get<std::string>());
    if (!p) throw DataError("unknown persona");
    u.persona = *p;
    u.registered_at = SimTime::from_ms(j.at("registered_at").get<std::int64_t>());
    u.visit_count = j.at("visits").get<int>();
    if (u.visit_count < 0) throw DataError("negative visit count");
    if (j.contains("prefs")) {
        auto c = channel_from_string(j.at("prefs").get<std::string>());
        if (!c) throw DataError("unknown channel preference");
        u.interaction_prefs = *c;
    }
    for (const auto& e : j.at("orders")) u.orders.push_back(entry_from_json(e));
    if (j.contains("liked_news")) {
        u.liked_news_categories = j.at("liked_news").get<std::map<std::string, double>>();
    }
    return u;
}

}  // namespace

const OrderHistoryEntry* last_order(const UserRecord& user) {
    const OrderHistoryEntry* last = nullptr;
    for (const auto& e : user.orders) {
        if (!last || e.timestamp >= last->timestamp) last = &e;
    }
    return last;
}

std::optional<std::string> preferred_drink(const UserRecord& user) {
    if (user.orders.empty()) return std::nullopt;

    struct Stats {
        double rating_sum = 0;
        int rated = 0;
        int count = 0;
        SimTime latest;
    };
    std::map<std::string, Stats> by_drink;
    for (const auto& e : user.orders) {
        auto& s = by_drink[e.drink_id];
        ++s.count;
        if (e.rating) {
            s.rating_sum += *e.rating;
            ++s.rated;
        }
        if (e.timestamp > s.latest) s.latest = e.timestamp;
    }

    bool any_rated = false;
    for (const auto& [_, s] : by_drink) {
        if (s.rated > 0) any_rated = true;
    }

    std::optional<std::string> best;
    double best_key = 0;
    SimTime best_latest;
    for (const auto& [drink, s] : by_drink) {
        double key;
        if (any_rated) {
            if (s.rated == 0) continue;
            key = s.rating_sum / s.rated;
        } else {
            key = s.count;
        }
        bool better = !best || key > best_key ||
                      (key == best_key && s.latest > best_latest);
        // Equality on both key and recency keeps the lexicographically
        // smaller drink, which is the one already held (map order).
        if (better) {
            best = drink;
            best_key = key;
            best_latest = s.latest;
        }
    }
    return best;
}

LongTermStore LongTermStore::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open profile store '" + path + "'");
    LongTermStore store;
    std::string line;
    int record_no = 0;
    while (std::getline(in, line)) {
        ++record_no;
        if (line.empty() || line[0] == '#') continue;
        json j;
        try {
            j = json::parse(line);
        } catch (const json::exception& e) {
            throw DataError(path + ": record " + std::to_string(record_no) + ": " + e.what());
        }
        try {
            UserRecord u = record_from_json(j);
            store.users_[u.user_id] = std::move(u);
        } catch (const std::exception& e) {
            throw DataError(path + ": record " + std::to_string(record_no) + ": " + e.what());
        }
    }
    return store;
}

void LongTermStore::persist(const std::string& path) const {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw DataError("cannot write profile store '" + path + "'");
    for (const auto& [_, u] : users_) {
        out << record_to_json(u).dump() << '\n';
    }
    if (!out) throw DataError("write failure on '" + path + "'");
}

UserRecord& LongTermStore::upsert(const std::string& user_id) {
    auto& u = users_[user_id];
    if (u.user_id.empty()) u.user_id = user_id;
    return u;
}

const UserRecord& LongTermStore::get(const std::string& user_id) const {
    auto it = users_.find(user_id);
    if (it == users_.end()) throw Error("unknown user '" + user_id + "'");
    return it->second;
}

UserRecord* LongTermStore::find(const std::string& user_id) {
    auto it = users_.find(user_id);
    return it == users_.end() ? nullptr : &it->second;
}

std::optional<std::string> LongTermStore::preferred_drink(const std::string& user_id) const {
    return brillo::preferred_drink(get(user_id));
}

std::string LongTermStore::most_ordered_drink() const {
    std::map<std::string, int> counts;
    for (const auto& [_, u] : users_) {
        for (const auto& e : u.orders) ++counts[e.drink_id];
    }
    if (counts.empty()) {
        throw Error("no orders recorded yet (cold start)");
    }
    // Max count; map iteration already yields lexicographic order for ties.
    std::string best;
    int best_count = -1;
    for (const auto& [drink, count] : counts) {
        if (count > best_count) {
            best = drink;
            best_count = count;
        }
    }
    return best;
}

bool LongTermStore::operator==(const LongTermStore& o) const {
    if (users_.size() != o.users_.size()) return false;
    for (const auto& [id, u] : users_) {
        auto it = o.users_.find(id);
        if (it == o.users_.end()) return false;
        if (record_to_json(u) != record_to_json(it->second)) return false;
    }
    return true;
}

std::string WorkingState::add_order(const std::string& user_id, OrderRequest request) {
    WorkingOrder order;
    order.order_id = "o" + std::to_string(next_order_++);
    order.user_id = user_id;
    order.request = std::move(request);
    order.status = OrderStatus::Pending;
    orders_.push_back(std::move(order));
    return orders_.back().order_id;
}

bool WorkingState::legal_transition(OrderStatus from, OrderStatus to) {
    switch (from) {
        case OrderStatus::Pending:
            return to == OrderStatus::Confirmed || to == OrderStatus::Cancelled;
        case OrderStatus::Confirmed:
            return to == OrderStatus::Preparing || to == OrderStatus::Cancelled;
        case OrderStatus::Preparing:
            return to == OrderStatus::Served;
        case OrderStatus::Served:
        case OrderStatus::Cancelled:
            return false;
    }
    return false;
}

void WorkingState::advance(const std::string& order_id, OrderStatus next) {
    WorkingOrder* order = find(order_id);
    if (!order) throw Error("unknown order '" + order_id + "'");
    if (!legal_transition(order->status, next)) {
        throw Error("illegal order transition " + std::string(to_string(order->status)) +
                    " -> " + std::string(to_string(next)) + " for " + order_id);
    }
    if (next == OrderStatus::Preparing) {
        for (const auto& o : orders_) {
            if (o.user_id == order->user_id && o.status == OrderStatus::Preparing) {
                throw Error("user '" + order->user_id + "' already has an order in preparation");
            }
        }
    }
    order->status = next;
}

WorkingOrder* WorkingState::find(const std::string& order_id) {
    for (auto& o : orders_) {
        if (o.order_id == order_id) return &o;
    }
    return nullptr;
}

WorkingOrder* WorkingState::open_order_for(const std::string& user_id) {
    WorkingOrder* found = nullptr;
    for (auto& o : orders_) {
        if (o.user_id != user_id) continue;
        if (o.status == OrderStatus::Served || o.status == OrderStatus::Cancelled) continue;
        found = &o;  // last open one wins
    }
    return found;
}

void WorkingState::set_active_intention(const std::string& user_id, const std::string& plan_id) {
    active_intention_ = std::make_pair(user_id, plan_id);
}

void WorkingState::clear_active_intention() { active_intention_.reset(); }

void WorkingState::set_situation(const std::string& user_id, double engagement_score) {
    situation_[user_id] = engagement_score;
}

std::optional<double> WorkingState::situation(const std::string& user_id) const {
    auto it = situation_.find(user_id);
    if (it == situation_.end()) return std::nullopt;
    return it->second;
}

}  // namespace brillo
