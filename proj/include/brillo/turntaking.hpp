#pragma once

#include <optional>
#include <string>
#include <vector>

#include "brillo/domain.hpp"
#include "brillo/time.hpp"

namespace brillo {

// Per-user interaction FSM state plus turn bookkeeping.
struct InteractionState {
    std::string user_id;
    UserState state = UserState::Greeting;
    std::optional<UserState> saved_state;  // present iff state == OUT_OF_SIGHT
    SimTime arrival_time;
    SimTime last_active;
    bool in_group = false;
    bool attention_claimed = false;  // priority bonus for one selection round
};

struct TransitionResult {
    InteractionState state;
    bool changed = false;
    std::string diagnostic;  // non-empty for an undeclared (state, trigger) pair
};

// Context the single-user/multi-user branch depends on.
struct TransitionContext {
    SimTime now;
    bool others_present = false;
};

// Applies one trigger. GONE is absorbing; every non-GONE state parks to
// OUT_OF_SIGHT on user-lost and is restored on user-seen. Undeclared
// (state, trigger) pairs leave the state unchanged and fill `diagnostic`.
TransitionResult transition(const InteractionState& s, Trigger trigger,
                            const TransitionContext& ctx);

struct TurnPolicy {
    double weight_wait = 1.0;
    double weight_group = 0.5;
    double weight_arrival = 0.5;
    double attention_bonus = 2.0;
};

// score(u) = weight_wait * (now - last_active)
//          + weight_group * [in_group]
//          + weight_arrival * 1 / (1 + arrival rank)
//          + attention_bonus when the user claimed attention this round.
// Rank counts candidates with strictly earlier arrival. Ties break toward
// the earlier arrival, then the smaller user id.
double turn_score(const InteractionState& candidate,
                  const std::vector<InteractionState>& candidates, const TurnPolicy& policy,
                  SimTime now);

std::optional<std::string> select_active_user(const std::vector<InteractionState>& candidates,
                                              const TurnPolicy& policy, SimTime now);

}  // namespace brillo
