#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "brillo/domain.hpp"
#include "brillo/nlu.hpp"
#include "brillo/time.hpp"

namespace brillo {

struct OrderHistoryEntry {
    std::string drink_id;
    SimTime timestamp;
    std::optional<int> rating;            // 1..5
    std::optional<double> engagement_avg; // [0,1]
    Channel channel = Channel::Bar;
    std::vector<std::string> topics_liked;
};

// Long-term profile of one registered customer.
struct UserRecord {
    std::string user_id;
    Persona persona = Persona::Unspecified;
    SimTime registered_at;
    std::vector<OrderHistoryEntry> orders;  // chronological append order
    std::map<std::string, double> liked_news_categories;
    Channel interaction_prefs = Channel::Bar;
    int visit_count = 0;
};

// Highest mean rating wins; ties go to the most recently ordered drink.
// With no rated orders, the most frequently ordered drink (ties: most
// recent, then lexicographic). Empty history yields nullopt.
std::optional<std::string> preferred_drink(const UserRecord& user);

// Most recent order entry, if any.
const OrderHistoryEntry* last_order(const UserRecord& user);

// Long-term memory with flat-file persistence: one canonical JSON record
// per line, append-friendly.
class LongTermStore {
public:
    LongTermStore() = default;

    static LongTermStore load(const std::string& path);
    void persist(const std::string& path) const;

    bool has(const std::string& user_id) const { return users_.count(user_id) != 0; }
    UserRecord& upsert(const std::string& user_id);
    const UserRecord& get(const std::string& user_id) const;
    UserRecord* find(const std::string& user_id);

    std::optional<std::string> preferred_drink(const std::string& user_id) const;

    // Globally most ordered drink across all profiles; ties lexicographic.
    // Throws Error on a cold start (no orders anywhere).
    std::string most_ordered_drink() const;

    std::size_t size() const { return users_.size(); }
    const std::map<std::string, UserRecord>& users() const { return users_; }

    bool operator==(const LongTermStore& o) const;

private:
    std::map<std::string, UserRecord> users_;
};

// One queued order inside working memory.
struct WorkingOrder {
    std::string order_id;
    std::string user_id;
    OrderRequest request;
    OrderStatus status = OrderStatus::Pending;
};

// Working memory: order queue, the active intention, and the latest fused
// situation per user. Status changes follow a fixed relation:
// pending -> confirmed -> preparing -> served, with cancellation allowed
// from pending and confirmed only.
class WorkingState {
public:
    // Returns the new order id.
    std::string add_order(const std::string& user_id, OrderRequest request);

    // Throws Error on an illegal transition.
    void advance(const std::string& order_id, OrderStatus next);

    WorkingOrder* find(const std::string& order_id);
    const std::vector<WorkingOrder>& orders() const { return orders_; }

    // Most recent non-terminal order of a user, if any.
    WorkingOrder* open_order_for(const std::string& user_id);

    void set_active_intention(const std::string& user_id, const std::string& plan_id);
    void clear_active_intention();
    const std::optional<std::pair<std::string, std::string>>& active_intention() const {
        return active_intention_;
    }

    void set_situation(const std::string& user_id, double engagement_score);
    std::optional<double> situation(const std::string& user_id) const;

    static bool legal_transition(OrderStatus from, OrderStatus to);

private:
    std::vector<WorkingOrder> orders_;
    int next_order_ = 1;
    std::optional<std::pair<std::string, std::string>> active_intention_;
    std::map<std::string, double> situation_;
};

}  // namespace brillo
