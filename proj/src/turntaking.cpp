#include "brillo/turntaking.hpp"

#include "brillo/error.hpp"

namespace brillo {

namespace {

TransitionResult unchanged(const InteractionState& s, Trigger trigger) {
    TransitionResult r{s, false, {}};
    r.diagnostic = "no transition for (" + std::string(to_string(s.state)) + ", " +
                   std::string(to_string(trigger)) + ")";
    return r;
}

TransitionResult moved(InteractionState s, UserState next) {
    s.state = next;
    return TransitionResult{std::move(s), true, {}};
}

}  // namespace

TransitionResult transition(const InteractionState& s, Trigger trigger,
                            const TransitionContext& ctx) {
    // Absorbing end state.
    if (s.state == UserState::Gone) return unchanged(s, trigger);

    // Attention claims never move the state; they only mark the user for
    // the next selection round.
    if (trigger == Trigger::AttentionClaim) {
        InteractionState next = s;
        next.attention_claimed = true;
        return TransitionResult{std::move(next), true, {}};
    }

    // Park/restore around lost sight of the user.
    if (trigger == Trigger::UserLost) {
        if (s.state == UserState::OutOfSight) return unchanged(s, trigger);
        InteractionState next = s;
        next.saved_state = s.state;
        next.state = UserState::OutOfSight;
        return TransitionResult{std::move(next), true, {}};
    }
    if (s.state == UserState::OutOfSight) {
        if (trigger == Trigger::UserSeen) {
            InteractionState next = s;
            next.state = *s.saved_state;
            next.saved_state.reset();
            next.last_active = ctx.now;
            return TransitionResult{std::move(next), true, {}};
        }
        return unchanged(s, trigger);
    }

    switch (s.state) {
        case UserState::Greeting:
            if (trigger == Trigger::TurnGrant) {
                return moved(s, ctx.others_present ? UserState::Waiting
                                                   : UserState::Recommendation);
            }
            break;
        case UserState::Waiting:
            if (trigger == Trigger::TurnGrant) return moved(s, UserState::Recommendation);
            break;
        case UserState::Recommendation:
            if (trigger == Trigger::OrderPlaced) return moved(s, UserState::Ordering);
            break;
        case UserState::Ordering:
            if (trigger == Trigger::OrderConfirmed) return moved(s, UserState::Confirmation);
            break;
        case UserState::Confirmation:
            if (trigger == Trigger::Confirm) return moved(s, UserState::Preparation);
            if (trigger == Trigger::OrderRejected || trigger == Trigger::OrderModify) {
                return moved(s, UserState::Ordering);
            }
            if (trigger == Trigger::DeleteOrder) return moved(s, UserState::Gone);
            break;
        case UserState::Preparation:
            if (trigger == Trigger::DrinkReady) return moved(s, UserState::Serving);
            break;
        case UserState::Serving:
            if (trigger == Trigger::Handover) return moved(s, UserState::Farewell);
            break;
        case UserState::Farewell:
            if (trigger == Trigger::FarewellDone) return moved(s, UserState::Gone);
            break;
        default:
            break;
    }
    return unchanged(s, trigger);
}

double turn_score(const InteractionState& candidate,
                  const std::vector<InteractionState>& candidates, const TurnPolicy& policy,
                  SimTime now) {
    int rank = 0;
    for (const auto& other : candidates) {
        if (other.arrival_time < candidate.arrival_time) ++rank;
    }
    double wait_s = (now - candidate.last_active).seconds();
    double score = policy.weight_wait * wait_s + policy.weight_group * (candidate.in_group ? 1 : 0) +
                   policy.weight_arrival * (1.0 / (1.0 + rank));
    if (candidate.attention_claimed) score += policy.attention_bonus;
    return score;
}

std::optional<std::string> select_active_user(const std::vector<InteractionState>& candidates,
                                              const TurnPolicy& policy, SimTime now) {
    if (policy.weight_wait <= 0 && policy.weight_group <= 0 && policy.weight_arrival <= 0) {
        throw Error("turn policy needs at least one positive weight");
    }
    const InteractionState* best = nullptr;
    double best_score = 0;
    for (const auto& c : candidates) {
        if (c.state == UserState::Gone || c.state == UserState::OutOfSight) {
            throw Error("candidate '" + c.user_id + "' is not selectable");
        }
        double score = turn_score(c, candidates, policy, now);
        bool wins = !best || score > best_score ||
                    (score == best_score && (c.arrival_time < best->arrival_time ||
                                             (c.arrival_time == best->arrival_time &&
                                              c.user_id < best->user_id)));
        if (wins) {
            best = &c;
            best_score = score;
        }
    }
    if (!best) return std::nullopt;
    return best->user_id;
}

}  // namespace brillo
