#include "brillo/engine.hpp"

#include <algorithm>

#include "brillo/error.hpp"
#include "brillo/text.hpp"

namespace brillo {

namespace {

// World predicates every preparation starts from; recipes must leave the
// shared stations clean again.
std::set<std::string> initial_world() { return {"mixer_empty", "blender_empty"}; }

bool is_service_trigger(Trigger t) {
    return t == Trigger::DrinkReady || t == Trigger::Handover || t == Trigger::FarewellDone;
}

bool is_dialog_trigger(Trigger t) {
    return t == Trigger::TurnGrant || t == Trigger::Confirm;
}

}  // namespace

Engine::Engine(const RunConfig& config)
    : cfg_(config),
      bus_(std::make_unique<Bus>(all_topics())),
      graph_(SemanticGraph::load(config.graph_path)),
      store_(LongTermStore::load(config.profiles_path)),
      recipes_(RecipeBook::load(config.recipes_path)),
      rules_(RuleTable::load(config.rules_path)),
      lexicon_(Lexicon::load(config.positive_lexicon_path, config.negative_lexicon_path)),
      feed_(NewsFeed::load(config.news_path)),
      utility_(config.utilities_path.empty() ? UtilityTable::defaults()
                                             : UtilityTable::load(config.utilities_path)) {
    if (config.noise_enabled) {
        channel_.emplace(ConfusionChannel::with_default_recall(config.seed,
                                                               config.delete_order_recall));
    }
    policy_.weight_wait = config.weight_wait;
    policy_.weight_group = config.weight_group;
    policy_.weight_arrival = config.weight_arrival;
    policy_.attention_bonus = config.attention_bonus;
    fusion_weights_.pose = config.fusion_weight_pose;
    fusion_weights_.valence = config.fusion_weight_valence;
    fusion_weights_.mood = config.fusion_weight_mood;
    fusion_weights_.sentiment = config.fusion_weight_sentiment;
    catalog_ = graph_.catalog_view();

    bus_->subscribe(topics::kUsers, "engine.users", [this](const Message& m) {
        on_users(std::get<PerceptEvent>(m.payload));
    });
    bus_->subscribe(topics::kPercepts, "engine.percepts", [this](const Message& m) {
        on_percept(std::get<PerceptEvent>(m.payload));
    });
    bus_->subscribe(topics::kRegistration, "engine.registration", [this](const Message& m) {
        on_registration(std::get<RegistrationEvent>(m.payload));
    });
    bus_->subscribe(topics::kTriggers, "engine.triggers", [this](const Message& m) {
        on_trigger(std::get<TriggerEvent>(m.payload));
    });
}

Trace Engine::run(const Scenario& scenario) {
    emit(scenario, *bus_, channel_ ? &*channel_ : nullptr);
    return bus_->run_all();
}

namespace {

// Speech acts after which the robot waits for the customer to answer;
// the interactive loop hands control back to the keyboard there.
bool awaits_input(const std::string& act) {
    static const std::set<std::string> kPrompts = {
        "recommend",  "echo-order",      "recap",           "ask-order",
        "ask-eval",   "ask-repeat",      "clarify-confirm", "clarify-counter",
        "clarify-what", "news-offer",    "news-item",
    };
    return kPrompts.count(act) != 0;
}

}  // namespace

Trace Engine::run_to_prompt(const std::string& user_id) {
    std::size_t first = bus_->trace().size();
    while (bus_->step()) {
        const Message& last = bus_->trace().back();
        if (last.topic != topics::kSpeech) continue;
        const auto& speech = std::get<SpeechEvent>(last.payload);
        if (speech.user_id == user_id && awaits_input(speech.act)) break;
    }
    const Trace& all = bus_->trace();
    return Trace(all.begin() + static_cast<std::ptrdiff_t>(first), all.end());
}

Trace Engine::session_start(const std::string& user_id, Persona persona) {
    UserRecord& record = store_.upsert(user_id);
    // Persona is immutable once registered; it only seeds fresh records.
    if (record.visit_count == 0 && record.orders.empty()) record.persona = persona;
    PerceptEvent seen;
    seen.kind = PerceptKind::UserSeen;
    seen.user_id = user_id;
    bus_->publish(topics::kUsers, seen);
    return run_to_prompt(user_id);
}

Trace Engine::session_utterance(const std::string& user_id, const std::string& text) {
    PerceptEvent e;
    e.kind = PerceptKind::Utterance;
    e.user_id = user_id;
    e.text = text;
    bus_->publish(topics::kPercepts, e);
    return run_to_prompt(user_id);
}

Trace Engine::session_finish(const std::string& user_id) {
    PerceptEvent lost;
    lost.kind = PerceptKind::UserLost;
    lost.user_id = user_id;
    bus_->publish(topics::kUsers, lost);
    Trace out = bus_->run_all();
    // The session is over: the customer is not coming back, so the parked
    // state collapses to GONE (administrative, no FSM event).
    auto it = sessions_.find(user_id);
    if (it != sessions_.end()) {
        it->second.fsm.state = UserState::Gone;
        it->second.fsm.saved_state.reset();
        it->second.present = false;
    }
    return out;
}

UserState Engine::state_of(const std::string& user_id) const {
    auto it = sessions_.find(user_id);
    if (it == sessions_.end()) throw Error("no session for user '" + user_id + "'");
    return it->second.fsm.state;
}

bool Engine::others_present(const std::string& user_id) const {
    for (const auto& [id, s] : sessions_) {
        if (id == user_id || !s.present) continue;
        if (s.fsm.state != UserState::Gone) return true;
    }
    return false;
}

void Engine::speak(const std::string& user_id, const std::string& act, const std::string& text) {
    bus_->publish(topics::kSpeech, SpeechEvent{user_id, act, text});
}

void Engine::publish_dialog_trigger(const std::string& user_id, Trigger trigger, double delay_s) {
    bus_->publish(topics::kTriggers,
                  TriggerEvent{user_id, trigger, sessions_[user_id].epoch},
                  SimTime::from_seconds(delay_s));
}

void Engine::publish_service_trigger(const std::string& user_id, Trigger trigger, SimTime delay) {
    bus_->publish(topics::kTriggers, TriggerEvent{user_id, trigger, 0}, delay);
}

// ---------------------------------------------------------------------------
// Percept handling

void Engine::on_users(const PerceptEvent& e) {
    if (e.kind == PerceptKind::UserLost) {
        auto it = sessions_.find(e.user_id);
        if (it == sessions_.end() || !it->second.present) return;
        UserSession& s = it->second;
        s.present = false;
        s.news.reset();
        s.news_awaiting_topic = false;
        if (s.fsm.state != UserState::Gone) fire_trigger(e.user_id, Trigger::UserLost);
        if (active_user_ == e.user_id) {
            active_user_.clear();
            reselect();
        }
        return;
    }
    if (e.kind != PerceptKind::UserSeen) return;

    auto it = sessions_.find(e.user_id);
    if (it != sessions_.end() && it->second.present &&
        it->second.fsm.state != UserState::Gone) {
        return;  // duplicate sighting
    }

    // Returning from out of sight: restore the parked state.
    if (it != sessions_.end() && it->second.fsm.state == UserState::OutOfSight) {
        UserSession& s = it->second;
        s.present = true;
        fire_trigger(e.user_id, Trigger::UserSeen);
        for (Trigger t : s.deferred) publish_service_trigger(e.user_id, t, SimTime{});
        s.deferred.clear();
        if (active_user_.empty()) reselect();
        return;
    }

    // Fresh arrival (or a new visit after GONE).
    UserSession& s = sessions_[e.user_id];
    s = UserSession{};
    s.fsm.user_id = e.user_id;
    s.fsm.state = UserState::Greeting;
    s.fsm.arrival_time = bus_->now();
    s.fsm.last_active = bus_->now();
    s.present = true;

    UserRecord* record = store_.find(e.user_id);
    // Known: at least one previous interaction (a past visit or an order).
    s.known = record != nullptr && (record->visit_count >= 1 || !record->orders.empty());
    if (record) {
        record->visit_count += 1;
        const OrderHistoryEntry* last = last_order(*record);
        s.needs_eval = s.known && last != nullptr && !last->rating;
    }

    // A registered client arriving preempts the entertainment of the
    // current customer.
    if (s.known && !active_user_.empty()) {
        UserSession& active = sessions_[active_user_];
        if (active.news) stop_news(active_user_, NewsStop::Preempted);
    }

    if (active_user_.empty()) {
        speak(e.user_id, "greeting",
              s.known ? "Welcome back! Good to see you again." : "Welcome to the bar!");
        active_user_ = e.user_id;
        bus_->publish(topics::kInteractingUser,
                      InteractingUserEvent{e.user_id, s.fsm.state});
        publish_dialog_trigger(e.user_id, Trigger::TurnGrant, cfg_.greet_delay);
    } else {
        speak(e.user_id, "greeting-wait", "Welcome! Please wait your turn.");
        publish_dialog_trigger(e.user_id, Trigger::TurnGrant, cfg_.greet_delay);
    }
}

void Engine::on_registration(const RegistrationEvent& e) {
    UserRecord& record = store_.upsert(e.user_id);
    if (record.visit_count == 0 && record.orders.empty()) {
        record.persona = e.persona;
        record.registered_at = bus_->now();
        record.interaction_prefs = e.channel;
    }
}

void Engine::on_percept(const PerceptEvent& e) {
    auto it = sessions_.find(e.user_id);
    if (e.kind == PerceptKind::GroupMembership) {
        bool grouped = e.group.size() >= 2;
        for (const auto& member : e.group) {
            auto mit = sessions_.find(member);
            if (mit != sessions_.end()) mit->second.fsm.in_group = grouped;
        }
        return;
    }
    if (it == sessions_.end() || !it->second.present) {
        diagnostics_.push_back("percept for absent user '" + e.user_id + "' ignored");
        return;
    }
    UserSession& s = it->second;
    switch (e.kind) {
        case PerceptKind::PoseEngagement:
            s.pose = e.engagement;
            update_engagement(e.user_id);
            break;
        case PerceptKind::FaceValence:
            s.valence = e.valence;
            update_engagement(e.user_id);
            break;
        case PerceptKind::VoiceMood:
            s.mood = e.mood;
            update_engagement(e.user_id);
            break;
        case PerceptKind::Utterance:
            on_utterance(e.user_id, e);
            break;
        default:
            break;
    }
}

void Engine::update_engagement(const std::string& user_id) {
    UserSession& s = sessions_[user_id];
    EngagementEstimate est =
        fuse(s.pose, s.valence, s.mood, s.sentiment, fusion_weights_, bus_->now());
    s.latest_estimate = est;
    s.engagement_sum += est.score;
    s.engagement_count += 1;
    working_.set_situation(user_id, est.score);
    bus_->publish(topics::kEngagement, EngagementEvent{user_id, est.score});
    if (user_id == active_user_ && is_low_engagement(est, cfg_.engagement_threshold)) {
        for (const auto& fe :
             face_behavior(est, DialogueState::Understood, Sentiment::Neutral,
                           cfg_.engagement_threshold)) {
            bus_->publish(topics::kFace, FaceBehaviorEvent{fe.kind, fe.expression, user_id});
        }
    }
}

EngagementEstimate Engine::engagement_or_default(const std::string& user_id) const {
    auto it = sessions_.find(user_id);
    if (it != sessions_.end() && it->second.latest_estimate) return *it->second.latest_estimate;
    EngagementEstimate neutral;
    neutral.score = 0.5;
    neutral.at = bus_->now();
    return neutral;
}

// ---------------------------------------------------------------------------
// Dialogue

void Engine::on_utterance(const std::string& user_id, const PerceptEvent& e) {
    UserSession& s = sessions_[user_id];

    // Every utterance refreshes the sentiment component of engagement.
    s.sentiment = lexicon_.sentiment(e.text);
    update_engagement(user_id);

    IntentDistribution d;
    double confidence;
    if (e.classified) {
        // Batch path: the scripted intent went through the confusion channel.
        confidence = e.confidence.value_or(1.0);
        d = to_distribution(*e.classified, confidence);
    } else {
        // Interactive path: rule-based classification of typed text.
        d = rules_.classify(e.text);
        confidence = d.prob(d.argmax());
    }

    std::size_t action = select_action(d, utility_);
    bus_->publish(topics::kIntents,
                  IntentEvent{user_id, d.argmax(), confidence, action_label(action)});

    if (user_id != active_user_) {
        // Waiting users claim attention rather than drive the dialogue.
        fire_trigger(user_id, Trigger::AttentionClaim);
        if (active_user_.empty()) reselect();
        return;
    }

    if (action == kAskRepeat) {
        for (const auto& fe :
             face_behavior(engagement_or_default(user_id), DialogueState::NotUnderstood,
                           Sentiment::Neutral, cfg_.engagement_threshold)) {
            bus_->publish(topics::kFace, FaceBehaviorEvent{fe.kind, fe.expression, user_id});
        }
        speak(user_id, "ask-repeat", "Sorry, could you repeat that?");
        return;
    }
    handle_intent(user_id, static_cast<Intent>(action), e.text, confidence);
}

void Engine::handle_intent(const std::string& user_id, Intent intent, const std::string& text,
                           double confidence) {
    UserSession& s = sessions_[user_id];
    UserState state = s.fsm.state;
    switch (intent) {
        case Intent::AnswerGreeting:
            speak(user_id, "ack-greeting", "Glad to have you here!");
            return;
        case Intent::Help:
            speak(user_id, "help",
                  "I can recommend drinks, take your order, and share some news while you "
                  "wait.");
            return;
        case Intent::Menu: {
            std::string menu;
            for (const auto& drink : graph_.drinks()) {
                if (!menu.empty()) menu += ", ";
                menu += drink;
            }
            speak(user_id, "menu", "Today we have: " + menu + ".");
            return;
        }
        case Intent::Evaluation: {
            auto rating = extract_rating(text);
            if (!rating) {
                speak(user_id, "clarify-rating", "On a scale of 1 to 5, how was it?");
                return;
            }
            apply_evaluation(user_id, *rating);
            return;
        }
        case Intent::Order:
            handle_order(user_id, text, confidence);
            return;
        case Intent::OrderConfirm:
            if (state == UserState::Recommendation && !s.recommended_drink.empty()) {
                OrderRequest request;
                request.product = s.recommended_drink;
                s.pending_order_id = working_.add_order(user_id, request);
                bus_->publish(topics::kOrders,
                              OrderEvent{s.pending_order_id, user_id, request.product,
                                         OrderStatus::Pending});
                fire_trigger(user_id, Trigger::OrderPlaced);
                speak(user_id, "echo-order",
                      "One " + request.product + " then. Shall I get started?");
                return;
            }
            if (state == UserState::Ordering && !s.pending_order_id.empty()) {
                fire_trigger(user_id, Trigger::OrderConfirmed);
                return;
            }
            return;
        case Intent::OrderReject:
            if (state == UserState::Recommendation) {
                s.rejection_count += 1;
                s.recommended_drink.clear();
                proceed_recommendation(user_id);
                return;
            }
            if (state == UserState::Ordering && !s.pending_order_id.empty()) {
                cancel_order(user_id);
                speak(user_id, "ask-order", "No problem. What would you like instead?");
                return;
            }
            if (state == UserState::Confirmation) {
                cancel_order(user_id);
                fire_trigger(user_id, Trigger::OrderRejected);
                speak(user_id, "ask-order", "Alright, let's start over. What would you like?");
                return;
            }
            return;
        case Intent::DeleteOrder:
            if (state == UserState::Confirmation) {
                cancel_order(user_id);
                speak(user_id, "ack-cancel", "Order cancelled. See you next time!");
                fire_trigger(user_id, Trigger::DeleteOrder);
                return;
            }
            if (state == UserState::Ordering && !s.pending_order_id.empty()) {
                cancel_order(user_id);
                speak(user_id, "ack-cancel", "Cancelled. Anything else for you?");
                return;
            }
            if (state == UserState::Preparation || state == UserState::Serving) {
                speak(user_id, "too-late", "Sorry, your drink is already being prepared.");
                return;
            }
            return;
        case Intent::NewsConfirm:
        case Intent::NewsReject:
            if (state == UserState::Preparation && s.news) {
                news_feedback(user_id, intent == Intent::NewsConfirm);
            }
            return;
    }
}

void Engine::handle_order(const std::string& user_id, const std::string& text,
                          double confidence) {
    UserSession& s = sessions_[user_id];
    UserState state = s.fsm.state;
    if (state != UserState::Recommendation && state != UserState::Ordering &&
        state != UserState::Confirmation) {
        speak(user_id, "not-now", "One moment, your order is already in progress.");
        return;
    }
    OrderRequest request = extract_order_slots(text, Intent::Order, catalog_);
    if (request.product.empty() && !s.recommended_drink.empty() &&
        state == UserState::Recommendation) {
        // "I'll take it" style acceptance.
        request.product = s.recommended_drink;
    }
    if (request.product.empty()) {
        speak(user_id, "clarify-what", "What would you like? Ask for the menu any time.");
        return;
    }

    if (state == UserState::Confirmation) {
        cancel_order(user_id);
        s.pending_order_id = working_.add_order(user_id, request);
        bus_->publish(topics::kOrders, OrderEvent{s.pending_order_id, user_id, request.product,
                                                  OrderStatus::Pending});
        fire_trigger(user_id, Trigger::OrderModify);
    } else {
        if (!s.pending_order_id.empty()) {
            WorkingOrder* open = working_.find(s.pending_order_id);
            if (open && open->status == OrderStatus::Pending) {
                cancel_order(user_id);
            }
        }
        s.pending_order_id = working_.add_order(user_id, request);
        bus_->publish(topics::kOrders, OrderEvent{s.pending_order_id, user_id, request.product,
                                                  OrderStatus::Pending});
        if (state == UserState::Recommendation) fire_trigger(user_id, Trigger::OrderPlaced);
    }

    UserRecord empty_record;
    const UserRecord* record = store_.find(user_id);
    UtterancePlan plan = clarification_request(request, confidence,
                                               record ? *record : empty_record,
                                               cfg_.cr_threshold);
    switch (plan.kind) {
        case ClarificationKind::ConfirmProduct:
            speak(user_id, "clarify-confirm", plan.text);
            break;
        case ClarificationKind::CounterExpectation:
            speak(user_id, "clarify-counter", plan.text);
            break;
        case ClarificationKind::None: {
            std::string mods;
            for (const auto& m : request.modifications) {
                mods += m.remove ? ", without " : ", extra ";
                mods += m.ingredient;
            }
            speak(user_id, "echo-order", "One " + request.product + mods + ". Right?");
            break;
        }
    }
}

void Engine::cancel_order(const std::string& user_id) {
    UserSession& s = sessions_[user_id];
    if (s.pending_order_id.empty()) return;
    WorkingOrder* order = working_.find(s.pending_order_id);
    if (order && (order->status == OrderStatus::Pending ||
                  order->status == OrderStatus::Confirmed)) {
        working_.advance(order->order_id, OrderStatus::Cancelled);
        bus_->publish(topics::kOrders, OrderEvent{order->order_id, user_id,
                                                  order->request.product,
                                                  OrderStatus::Cancelled});
    }
    s.pending_order_id.clear();
}

void Engine::apply_evaluation(const std::string& user_id, int rating) {
    UserSession& s = sessions_[user_id];
    UserRecord* record = store_.find(user_id);
    if (record) {
        // Rate the most recent unrated order.
        OrderHistoryEntry* target = nullptr;
        for (auto& entry : record->orders) {
            if (entry.rating) continue;
            if (!target || entry.timestamp >= target->timestamp) target = &entry;
        }
        if (target) target->rating = rating;
    }
    speak(user_id, "thanks-eval", "Thanks for the feedback!");
    if (s.needs_eval) {
        s.needs_eval = false;
        if (s.fsm.state == UserState::Recommendation) proceed_recommendation(user_id);
    }
}

void Engine::proceed_recommendation(const std::string& user_id) {
    UserSession& s = sessions_[user_id];
    RecommendationContext ctx;
    ctx.user_id = user_id;
    ctx.known_user = s.known;
    ctx.rejection_count = s.rejection_count;
    const UserRecord* record = store_.find(user_id);
    ctx.persona = record ? record->persona : Persona::Unspecified;
    if (s.known && record) {
        const OrderHistoryEntry* last = last_order(*record);
        if (last) {
            ctx.last_drink = last->drink_id;
            ctx.last_eval = last->rating ? eval_from_rating(*last->rating) : LastEval::None;
        }
    }
    RecommendationResult rec =
        recommend(ctx, store_, graph_, cfg_.optimistic_missing_rating);
    bus_->publish(topics::kRecommendations,
                  RecommendationEvent{user_id, rec.strategy, rec.drink});
    if (rec.strategy == Strategy::Ask) {
        s.recommended_drink.clear();
        speak(user_id, "ask-order", "What can I get you?");
    } else {
        s.recommended_drink = rec.drink;
        speak(user_id, "recommend", "May I suggest a " + rec.drink + "?");
    }
}

// ---------------------------------------------------------------------------
// FSM plumbing

void Engine::on_trigger(const TriggerEvent& e) {
    auto it = sessions_.find(e.user_id);
    if (it == sessions_.end()) return;
    UserSession& s = it->second;
    if (s.fsm.state == UserState::Gone) return;
    if (is_dialog_trigger(e.trigger) && e.epoch != s.epoch) return;  // stale
    if (is_service_trigger(e.trigger) && s.fsm.state == UserState::OutOfSight) {
        s.deferred.push_back(e.trigger);
        return;
    }
    fire_trigger(e.user_id, e.trigger);
}

void Engine::fire_trigger(const std::string& user_id, Trigger trigger) {
    UserSession& s = sessions_[user_id];
    TransitionContext ctx{bus_->now(), others_present(user_id)};
    TransitionResult result = transition(s.fsm, trigger, ctx);
    if (!result.diagnostic.empty()) {
        diagnostics_.push_back(user_id + ": " + result.diagnostic);
        return;
    }
    UserState previous = s.fsm.state;
    s.fsm = result.state;
    if (s.fsm.state == previous) return;  // attention claim or no-op

    s.epoch += 1;
    s.fsm.last_active = bus_->now();
    bus_->publish(topics::kStateChanges,
                  StateChangeEvent{user_id, previous, s.fsm.state, trigger});
    // A departed user is no longer the interacting user; the reselection
    // publishes the successor.
    if (user_id == active_user_ && s.fsm.state != UserState::Gone &&
        s.fsm.state != UserState::OutOfSight) {
        bus_->publish(topics::kInteractingUser, InteractingUserEvent{user_id, s.fsm.state});
    }
    // Restoring a parked state resumes it; entry actions already ran.
    if (trigger == Trigger::UserSeen && previous == UserState::OutOfSight) return;
    state_entry(user_id, s.fsm.state, previous);
}

void Engine::state_entry(const std::string& user_id, UserState entered, UserState previous) {
    UserSession& s = sessions_[user_id];
    switch (entered) {
        case UserState::Waiting:
            // The active user never rests in WAITING: grant the turn at once.
            if (user_id == active_user_) {
                publish_dialog_trigger(user_id, Trigger::TurnGrant, 0.0);
            }
            break;
        case UserState::Recommendation:
            if (s.needs_eval && !s.eval_asked) {
                s.eval_asked = true;
                const UserRecord* record = store_.find(user_id);
                const OrderHistoryEntry* last = record ? last_order(*record) : nullptr;
                speak(user_id, "ask-eval",
                      "Before we start: how was the " +
                          (last ? last->drink_id : std::string("last drink")) +
                          " last time, 1 to 5?");
            } else {
                proceed_recommendation(user_id);
            }
            break;
        case UserState::Confirmation: {
            WorkingOrder* order = working_.find(s.pending_order_id);
            if (order) {
                working_.advance(order->order_id, OrderStatus::Confirmed);
                bus_->publish(topics::kOrders,
                              OrderEvent{order->order_id, user_id, order->request.product,
                                         OrderStatus::Confirmed});
                speak(user_id, "recap",
                      "One " + order->request.product +
                          " coming up. Say the word if you change your mind.");
            }
            publish_dialog_trigger(user_id, Trigger::Confirm, cfg_.confirm_grace);
            break;
        }
        case UserState::Preparation:
            start_preparation(user_id);
            break;
        case UserState::Serving: {
            WorkingOrder* order = working_.find(s.pending_order_id);
            speak(user_id, "handover",
                  "Here is your " + (order ? order->request.product : std::string("drink")) +
                      "!");
            publish_service_trigger(user_id, Trigger::Handover,
                                    SimTime::from_seconds(cfg_.handover_duration));
            break;
        }
        case UserState::Farewell: {
            WorkingOrder* order = working_.find(s.pending_order_id);
            if (order && order->status == OrderStatus::Preparing) {
                working_.advance(order->order_id, OrderStatus::Served);
                if (working_.active_intention() &&
                    working_.active_intention()->second == order->order_id) {
                    working_.clear_active_intention();
                }
                bus_->publish(topics::kOrders,
                              OrderEvent{order->order_id, user_id, order->request.product,
                                         OrderStatus::Served});
                UserRecord& record = store_.upsert(user_id);
                OrderHistoryEntry entry;
                entry.drink_id = order->request.product;
                entry.timestamp = bus_->now();
                entry.channel = Channel::Bar;
                if (s.engagement_count > 0) {
                    entry.engagement_avg = s.engagement_sum / s.engagement_count;
                }
                entry.topics_liked.assign(s.news_positive_categories.begin(),
                                          s.news_positive_categories.end());
                record.orders.push_back(std::move(entry));
                for (const auto& category : s.news_positive_categories) {
                    record.liked_news_categories[category] += 1.0;
                }
                graph_.add_order_edge(user_id, order->request.product);
            }
            speak(user_id, "farewell", "Enjoy, and see you soon!");
            publish_service_trigger(user_id, Trigger::FarewellDone,
                                    SimTime::from_seconds(cfg_.farewell_delay));
            break;
        }
        case UserState::Gone:
            s.news.reset();
            s.news_awaiting_topic = false;
            if (active_user_ == user_id) {
                active_user_.clear();
                reselect();
            }
            break;
        default:
            break;
    }
    (void)previous;
}

void Engine::reselect() {
    std::vector<InteractionState> candidates;
    for (const auto& [id, s] : sessions_) {
        if (!s.present) continue;
        if (s.fsm.state == UserState::Gone || s.fsm.state == UserState::OutOfSight) continue;
        candidates.push_back(s.fsm);
    }
    if (candidates.empty()) return;
    auto winner = select_active_user(candidates, policy_, bus_->now());
    if (!winner) return;
    for (auto& [id, s] : sessions_) s.fsm.attention_claimed = false;
    active_user_ = *winner;
    UserSession& s = sessions_[active_user_];
    bus_->publish(topics::kInteractingUser, InteractingUserEvent{active_user_, s.fsm.state});
    switch (s.fsm.state) {
        case UserState::Greeting:
        case UserState::Waiting:
            publish_dialog_trigger(active_user_, Trigger::TurnGrant, 0.0);
            break;
        case UserState::Recommendation:
            proceed_recommendation(active_user_);
            break;
        case UserState::Ordering:
            speak(active_user_, "ask-order", "Where were we — what would you like?");
            break;
        case UserState::Confirmation:
            publish_dialog_trigger(active_user_, Trigger::Confirm, cfg_.confirm_grace);
            break;
        default:
            break;
    }
}

// ---------------------------------------------------------------------------
// Execution

void Engine::start_preparation(const std::string& user_id) {
    UserSession& s = sessions_[user_id];
    WorkingOrder* order = working_.find(s.pending_order_id);
    if (!order) {
        diagnostics_.push_back("preparation entered without an order for " + user_id);
        return;
    }
    working_.advance(order->order_id, OrderStatus::Preparing);
    working_.set_active_intention(user_id, order->order_id);
    bus_->publish(topics::kOrders, OrderEvent{order->order_id, user_id, order->request.product,
                                              OrderStatus::Preparing});

    auto plan = plan_order(order->request.product, recipes_, order->order_id);
    Timetable timetable = schedule({plan}, cfg_.arms, initial_world());

    // Interactive gesture: best effort inside the preparation window.
    BasicAction gesture;
    gesture.id = order->order_id + ":gesture:wave";
    gesture.drink_order_id = order->order_id;
    gesture.duration = SimTime::from_seconds(cfg_.gesture_duration);
    gesture.resources = {Resource::ArmAny};
    InterleaveResult interleaved =
        interleave_gesture(timetable, gesture, SimTime{}, timetable.makespan());

    SimTime now = bus_->now();
    SimTime base = std::max(now, arms_free_at_);

    bus_->publish(topics::kGestures,
                  GestureEvent{order->order_id, interleaved.placed ? "placed" : "dropped",
                               interleaved.placed ? base + interleaved.start : SimTime{},
                               interleaved.placed ? interleaved.arm : "none"});

    const Timetable& final_tt = interleaved.placed ? interleaved.timetable : timetable;
    struct Boundary {
        SimTime at;
        bool end;
        std::size_t index;
    };
    std::vector<Boundary> boundaries;
    for (std::size_t i = 0; i < final_tt.entries.size(); ++i) {
        boundaries.push_back({final_tt.entries[i].start, false, i});
        boundaries.push_back({final_tt.entries[i].end, true, i});
    }
    std::stable_sort(boundaries.begin(), boundaries.end(), [](const Boundary& a, const Boundary& b) {
        if (a.at != b.at) return a.at < b.at;
        return a.end && !b.end;  // ends before starts at the same instant
    });
    for (const auto& b : boundaries) {
        const TimetableEntry& entry = final_tt.entries[b.index];
        bus_->publish(topics::kArms,
                      ArmEvent{order->order_id, entry.action_id, entry.arm,
                               b.end ? "end" : "start"},
                      base + b.at - now);
    }
    publish_service_trigger(user_id, Trigger::DrinkReady,
                            base + timetable.makespan() - now);
    arms_free_at_ = base + timetable.makespan() + SimTime::from_seconds(cfg_.handover_duration);

    // Entertainment while the drink is on the way.
    const UserRecord* record = store_.find(user_id);
    Persona persona = record ? record->persona : Persona::Unspecified;
    NewsSession news;
    news.current_category = pick_opening_category(persona, store_, feed_);
    news.source = persona == Persona::Worker ? "serious" : "entertaining";
    s.news = news;
    s.news_awaiting_topic = true;
    bus_->publish(topics::kNews, NewsEvent{user_id, "offer", "", news.current_category,
                                           news.source, ""});
    speak(user_id, "news-offer",
          "Fancy some " + news.current_category + " news while you wait?");
}

// ---------------------------------------------------------------------------
// News loop

void Engine::news_feedback(const std::string& user_id, bool positive) {
    UserSession& s = sessions_[user_id];
    if (!s.news) return;
    if (positive && !s.news_awaiting_topic) {
        s.news_positive_categories.insert(s.news->current_category);
    }
    std::optional<bool> feedback;
    if (s.news_awaiting_topic) {
        s.news_awaiting_topic = false;
        // Rejecting the offered topic rotates the category like negative
        // feedback on an item.
        if (!positive) feedback = false;
    } else {
        feedback = positive;
    }
    NewsOutcome outcome = next_news(*s.news, feedback, engagement_or_default(user_id), false,
                                    feed_, cfg_.engagement_threshold);
    news_present(user_id, outcome);
}

void Engine::news_present(const std::string& user_id, const NewsOutcome& outcome) {
    if (std::holds_alternative<NewsStop>(outcome)) {
        stop_news(user_id, std::get<NewsStop>(outcome));
        return;
    }
    const std::string& id = std::get<std::string>(outcome);
    const NewsItem* item = feed_.find(id);
    if (!item) return;
    bus_->publish(topics::kNews,
                  NewsEvent{user_id, "item", item->id, item->category, item->source, ""});
    speak(user_id, "news-item", item->headline);
    Sentiment tone = lexicon_.sentiment(item->headline);
    for (const auto& fe : face_behavior(engagement_or_default(user_id), DialogueState::Emoting,
                                        tone, cfg_.engagement_threshold)) {
        if (fe.kind == "expression") {
            bus_->publish(topics::kFace, FaceBehaviorEvent{fe.kind, fe.expression, user_id});
        }
    }
}

void Engine::stop_news(const std::string& user_id, NewsStop reason) {
    UserSession& s = sessions_[user_id];
    if (!s.news) return;
    bus_->publish(topics::kNews,
                  NewsEvent{user_id, "stop", "", "", "", std::string(to_string(reason))});
    speak(user_id, "news-stop", "Let's leave the news there.");
    s.news.reset();
    s.news_awaiting_topic = false;
}

}  // namespace brillo
