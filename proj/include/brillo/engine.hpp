#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "brillo/beliefs.hpp"
#include "brillo/bus.hpp"
#include "brillo/config.hpp"
#include "brillo/decision.hpp"
#include "brillo/fusion.hpp"
#include "brillo/graph.hpp"
#include "brillo/nlu.hpp"
#include "brillo/percepts.hpp"
#include "brillo/plansched.hpp"
#include "brillo/turntaking.hpp"

namespace brillo {

// Wires every module on one bus and drives the full pipeline: percepts in,
// dialogue/recommendation/scheduling decisions out. One Engine per run.
class Engine {
public:
    explicit Engine(const RunConfig& config);

    // Batch mode: publish the scenario and drain the queue.
    Trace run(const Scenario& scenario);

    // Interactive mode plumbing: one human-driven customer session. Each
    // step dispatches until the robot prompts the customer again (or the
    // queue drains) and returns the messages delivered meanwhile.
    Trace session_start(const std::string& user_id, Persona persona);
    Trace session_utterance(const std::string& user_id, const std::string& text);
    Trace session_finish(const std::string& user_id);
    Trace run_to_prompt(const std::string& user_id);

    Bus& bus() { return *bus_; }
    const LongTermStore& store() const { return store_; }
    const SemanticGraph& graph() const { return graph_; }
    const std::string& active_user() const { return active_user_; }
    UserState state_of(const std::string& user_id) const;

    // Warnings for undeclared FSM pairs and other oddities.
    const std::vector<std::string>& diagnostics() const { return diagnostics_; }

private:
    struct UserSession {
        InteractionState fsm;
        bool present = false;
        bool known = false;
        bool needs_eval = false;
        bool eval_asked = false;
        int rejection_count = 0;
        std::string recommended_drink;
        std::string pending_order_id;
        std::uint64_t epoch = 0;
        // Latest per-signal observations feeding fusion.
        std::optional<double> pose;
        std::optional<double> valence;
        std::optional<VoiceMood> mood;
        std::optional<Sentiment> sentiment;
        std::optional<EngagementEstimate> latest_estimate;
        double engagement_sum = 0.0;
        int engagement_count = 0;
        // News entertainment loop.
        std::optional<NewsSession> news;
        bool news_awaiting_topic = false;
        std::set<std::string> news_positive_categories;
        // Service triggers deferred while the user is out of sight.
        std::vector<Trigger> deferred;
    };

    // Percept handling
    void on_users(const PerceptEvent& e);
    void on_percept(const PerceptEvent& e);
    void on_registration(const RegistrationEvent& e);
    void on_trigger(const TriggerEvent& e);
    void on_utterance(const std::string& user_id, const PerceptEvent& e);

    // Dialogue flow
    void handle_intent(const std::string& user_id, Intent intent, const std::string& text,
                       double confidence);
    void handle_order(const std::string& user_id, const std::string& text, double confidence);
    void proceed_recommendation(const std::string& user_id);
    void apply_evaluation(const std::string& user_id, int rating);

    // FSM plumbing
    void fire_trigger(const std::string& user_id, Trigger trigger);
    void state_entry(const std::string& user_id, UserState entered, UserState previous);
    void publish_dialog_trigger(const std::string& user_id, Trigger trigger, double delay_s);
    void publish_service_trigger(const std::string& user_id, Trigger trigger, SimTime delay);
    bool others_present(const std::string& user_id) const;
    void reselect();

    // Execution
    void start_preparation(const std::string& user_id);
    void update_engagement(const std::string& user_id);
    EngagementEstimate engagement_or_default(const std::string& user_id) const;

    // News loop
    void news_feedback(const std::string& user_id, bool positive);
    void news_present(const std::string& user_id, const NewsOutcome& outcome);
    void stop_news(const std::string& user_id, NewsStop reason);

    void speak(const std::string& user_id, const std::string& act, const std::string& text);
    void cancel_order(const std::string& user_id);

    RunConfig cfg_;
    std::unique_ptr<Bus> bus_;
    SemanticGraph graph_;
    LongTermStore store_;
    RecipeBook recipes_;
    RuleTable rules_;
    Lexicon lexicon_;
    NewsFeed feed_;
    UtilityTable utility_;
    std::optional<ConfusionChannel> channel_;
    WorkingState working_;
    TurnPolicy policy_;
    FusionWeights fusion_weights_;
    CatalogView catalog_;

    std::map<std::string, UserSession> sessions_;
    std::string active_user_;
    SimTime arms_free_at_;
    std::vector<std::string> diagnostics_;
};

}  // namespace brillo
