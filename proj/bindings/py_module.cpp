#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "brillo/decision.hpp"
#include "brillo/engine.hpp"
#include "brillo/error.hpp"
#include "brillo/percepts.hpp"
#include "brillo/plansched.hpp"
#include "brillo/report.hpp"
#include "brillo/turntaking.hpp"

namespace py = pybind11;
using namespace brillo;

namespace {

// Seconds at the boundary, fixed-point milliseconds inside.
double to_seconds(SimTime t) { return t.seconds(); }

std::map<std::string, double> distribution_to_map(const IntentDistribution& d) {
    std::map<std::string, double> out;
    for (Intent i : kAllIntents) out[std::string(to_string(i))] = d.prob(i);
    return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bartender interaction engine: decision, scheduling and simulation core";

    py::enum_<Intent>(m, "Intent")
        .value("AnswerGreeting", Intent::AnswerGreeting)
        .value("OrderConfirm", Intent::OrderConfirm)
        .value("OrderReject", Intent::OrderReject)
        .value("DeleteOrder", Intent::DeleteOrder)
        .value("Help", Intent::Help)
        .value("Menu", Intent::Menu)
        .value("Order", Intent::Order)
        .value("NewsConfirm", Intent::NewsConfirm)
        .value("NewsReject", Intent::NewsReject)
        .value("Evaluation", Intent::Evaluation);

    py::enum_<Persona>(m, "Persona")
        .value("Worker", Persona::Worker)
        .value("Other", Persona::Other)
        .value("Unspecified", Persona::Unspecified);

    py::enum_<VoiceMood>(m, "VoiceMood")
        .value("Neutral", VoiceMood::Neutral)
        .value("Calm", VoiceMood::Calm)
        .value("Pacey", VoiceMood::Pacey);

    py::enum_<Sentiment>(m, "Sentiment")
        .value("Positive", Sentiment::Positive)
        .value("Negative", Sentiment::Negative)
        .value("Neutral", Sentiment::Neutral);

    py::enum_<UserState>(m, "UserState")
        .value("Greeting", UserState::Greeting)
        .value("Waiting", UserState::Waiting)
        .value("Recommendation", UserState::Recommendation)
        .value("Ordering", UserState::Ordering)
        .value("Confirmation", UserState::Confirmation)
        .value("Preparation", UserState::Preparation)
        .value("Serving", UserState::Serving)
        .value("Farewell", UserState::Farewell)
        .value("Gone", UserState::Gone)
        .value("OutOfSight", UserState::OutOfSight);

    py::enum_<Trigger>(m, "Trigger")
        .value("TurnGrant", Trigger::TurnGrant)
        .value("OrderPlaced", Trigger::OrderPlaced)
        .value("OrderConfirmed", Trigger::OrderConfirmed)
        .value("Confirm", Trigger::Confirm)
        .value("OrderRejected", Trigger::OrderRejected)
        .value("OrderModify", Trigger::OrderModify)
        .value("DeleteOrder", Trigger::DeleteOrder)
        .value("DrinkReady", Trigger::DrinkReady)
        .value("Handover", Trigger::Handover)
        .value("FarewellDone", Trigger::FarewellDone)
        .value("UserLost", Trigger::UserLost)
        .value("UserSeen", Trigger::UserSeen)
        .value("AttentionClaim", Trigger::AttentionClaim);

    py::enum_<Strategy>(m, "Strategy")
        .value("PreferredDrink", Strategy::PreferredDrink)
        .value("MostOrdered", Strategy::MostOrdered)
        .value("SimilarSameCategory", Strategy::SimilarSameCategory)
        .value("SimilarOtherCategory", Strategy::SimilarOtherCategory)
        .value("Ask", Strategy::Ask);

    // --- NLU ---------------------------------------------------------------
    py::class_<RuleTable>(m, "RuleTable")
        .def_static("load", &RuleTable::load, py::arg("path"))
        .def("classify",
             [](const RuleTable& t, const std::string& text) {
                 return distribution_to_map(t.classify(text));
             })
        .def("classify_argmax",
             [](const RuleTable& t, const std::string& text) {
                 auto d = t.classify(text);
                 return std::make_pair(d.argmax(), d.prob(d.argmax()));
             })
        .def("__len__", &RuleTable::size);

    m.def("to_distribution", [](Intent classified, double confidence) {
        return distribution_to_map(to_distribution(classified, confidence));
    });

    py::class_<OrderModification>(m, "OrderModification")
        .def_readonly("ingredient", &OrderModification::ingredient)
        .def_readonly("remove", &OrderModification::remove);

    py::class_<OrderRequest>(m, "OrderRequest")
        .def(py::init<>())
        .def_readwrite("product", &OrderRequest::product)
        .def_readonly("modifications", &OrderRequest::modifications)
        .def_readwrite("cancel", &OrderRequest::cancel);

    m.def("extract_order_slots",
          [](const std::string& text, Intent intent, const SemanticGraph& graph) {
              return extract_order_slots(text, intent, graph.catalog_view());
          },
          py::arg("text"), py::arg("intent"), py::arg("graph"));

    // --- percepts ------------------------------------------------------------
    py::class_<ConfusionChannel>(m, "ConfusionChannel")
        .def_static("with_default_recall", &ConfusionChannel::with_default_recall,
                    py::arg("seed"), py::arg("delete_order_recall") = 0.9)
        .def("corrupt_intent", &ConfusionChannel::corrupt_intent)
        .def("recall", &ConfusionChannel::recall);

    // --- decision --------------------------------------------------------------
    py::class_<UtilityTable>(m, "UtilityTable")
        .def_static("defaults", &UtilityTable::defaults)
        .def_static("load", &UtilityTable::load)
        .def("value",
             [](const UtilityTable& t, const std::string& action, Intent intent) {
                 auto a = action_from_label(action);
                 if (!a) throw Error("unknown action '" + action + "'");
                 return t.u[*a][static_cast<std::size_t>(intent)];
             });

    m.def("expected_utility",
          [](const std::string& action, const std::map<std::string, double>& probs,
             const UtilityTable& table) {
              auto a = action_from_label(action);
              if (!a) throw Error("unknown action '" + action + "'");
              IntentDistribution d;
              for (Intent i : kAllIntents) {
                  d.probs[static_cast<std::size_t>(i)] =
                      probs.count(std::string(to_string(i)))
                          ? probs.at(std::string(to_string(i)))
                          : 0.0;
              }
              return expected_utility(*a, d, table);
          });

    m.def("select_action",
          [](const std::map<std::string, double>& probs, const UtilityTable& table) {
              IntentDistribution d;
              for (Intent i : kAllIntents) {
                  d.probs[static_cast<std::size_t>(i)] =
                      probs.count(std::string(to_string(i)))
                          ? probs.at(std::string(to_string(i)))
                          : 0.0;
              }
              return action_label(select_action(d, table));
          });

    py::class_<RecommendationContext>(m, "RecommendationContext")
        .def(py::init<>())
        .def_readwrite("user_id", &RecommendationContext::user_id)
        .def_readwrite("persona", &RecommendationContext::persona)
        .def_readwrite("known_user", &RecommendationContext::known_user)
        .def_readwrite("rejection_count", &RecommendationContext::rejection_count)
        .def_readwrite("last_drink", &RecommendationContext::last_drink);

    m.def("recommend",
          [](const RecommendationContext& ctx, const LongTermStore& store,
             const SemanticGraph& graph) {
              auto r = recommend(ctx, store, graph);
              return std::make_pair(r.strategy, r.drink);
          });

    // --- beliefs ---------------------------------------------------------------
    py::class_<SemanticGraph>(m, "SemanticGraph")
        .def_static("load", &SemanticGraph::load, py::arg("path"))
        .def("drinks", &SemanticGraph::drinks)
        .def("category_of", &SemanticGraph::category_of)
        .def("shared_ingredients", &SemanticGraph::shared_ingredients)
        .def("most_similar_drink", &SemanticGraph::most_similar_drink, py::arg("drink"),
             py::arg("same_category"), py::arg("exclude") = std::set<std::string>{});

    py::class_<LongTermStore>(m, "LongTermStore")
        .def(py::init<>())
        .def_static("load", &LongTermStore::load, py::arg("path"))
        .def("persist", &LongTermStore::persist, py::arg("path"))
        .def("__len__", &LongTermStore::size)
        .def("preferred_drink", &LongTermStore::preferred_drink)
        .def("most_ordered_drink", &LongTermStore::most_ordered_drink);

    // --- fusion ---------------------------------------------------------------
    py::class_<Lexicon>(m, "Lexicon")
        .def_static("load", &Lexicon::load, py::arg("positive_path"),
                    py::arg("negative_path"))
        .def("sentiment", &Lexicon::sentiment);

    py::class_<EngagementEstimate>(m, "EngagementEstimate")
        .def_readonly("score", &EngagementEstimate::score)
        .def_readonly("components", &EngagementEstimate::components);

    m.def("fuse",
          [](std::optional<double> pose, std::optional<double> valence,
             std::optional<VoiceMood> mood, std::optional<Sentiment> sentiment,
             double w_pose, double w_valence, double w_mood, double w_sentiment) {
              return fuse(pose, valence, mood, sentiment,
                          FusionWeights{w_pose, w_valence, w_mood, w_sentiment});
          },
          py::arg("pose") = std::nullopt, py::arg("valence") = std::nullopt,
          py::arg("mood") = std::nullopt, py::arg("sentiment") = std::nullopt,
          py::arg("w_pose") = 1.0, py::arg("w_valence") = 1.0, py::arg("w_mood") = 1.0,
          py::arg("w_sentiment") = 1.0);

    m.def("is_low_engagement", &is_low_engagement, py::arg("estimate"),
          py::arg("threshold") = kDefaultEngagementThreshold);

    // --- turn-taking -------------------------------------------------------------
    py::class_<InteractionState>(m, "InteractionState")
        .def(py::init<>())
        .def_readwrite("user_id", &InteractionState::user_id)
        .def_readwrite("state", &InteractionState::state)
        .def_readonly("saved_state", &InteractionState::saved_state)
        .def_readwrite("in_group", &InteractionState::in_group)
        .def_readwrite("attention_claimed", &InteractionState::attention_claimed)
        .def_property(
            "arrival_time",
            [](const InteractionState& s) { return to_seconds(s.arrival_time); },
            [](InteractionState& s, double v) { s.arrival_time = SimTime::from_seconds(v); })
        .def_property(
            "last_active",
            [](const InteractionState& s) { return to_seconds(s.last_active); },
            [](InteractionState& s, double v) { s.last_active = SimTime::from_seconds(v); });

    m.def("transition",
          [](const InteractionState& s, Trigger trigger, double now_s, bool others_present) {
              auto r = transition(s, trigger,
                                  TransitionContext{SimTime::from_seconds(now_s),
                                                    others_present});
              return py::make_tuple(r.state, r.changed, r.diagnostic);
          },
          py::arg("state"), py::arg("trigger"), py::arg("now") = 0.0,
          py::arg("others_present") = false);

    py::class_<TurnPolicy>(m, "TurnPolicy")
        .def(py::init<>())
        .def_readwrite("weight_wait", &TurnPolicy::weight_wait)
        .def_readwrite("weight_group", &TurnPolicy::weight_group)
        .def_readwrite("weight_arrival", &TurnPolicy::weight_arrival)
        .def_readwrite("attention_bonus", &TurnPolicy::attention_bonus);

    m.def("select_active_user",
          [](const std::vector<InteractionState>& candidates, const TurnPolicy& policy,
             double now_s) {
              return select_active_user(candidates, policy, SimTime::from_seconds(now_s));
          },
          py::arg("candidates"), py::arg("policy") = TurnPolicy{}, py::arg("now") = 0.0);

    // --- planning and scheduling ---------------------------------------------------
    py::class_<BasicAction>(m, "BasicAction")
        .def_readonly("id", &BasicAction::id)
        .def_property_readonly("duration",
                               [](const BasicAction& a) { return to_seconds(a.duration); })
        .def_readonly("preconditions", &BasicAction::preconditions)
        .def_readonly("predecessor_ids", &BasicAction::predecessor_ids);

    py::class_<RecipeBook>(m, "RecipeBook")
        .def_static("load", &RecipeBook::load, py::arg("path"))
        .def("drinks", &RecipeBook::drinks)
        .def("has", &RecipeBook::has);

    m.def("plan_order", &plan_order, py::arg("drink"), py::arg("recipes"),
          py::arg("order_id"));

    py::class_<Timetable>(m, "Timetable")
        .def_property_readonly("makespan",
                               [](const Timetable& t) { return to_seconds(t.makespan()); })
        .def_property_readonly("entries",
                               [](const Timetable& t) {
                                   std::vector<py::tuple> out;
                                   for (const auto& e : t.entries) {
                                       out.push_back(py::make_tuple(e.action_id, e.arm,
                                                                    to_seconds(e.start),
                                                                    to_seconds(e.end)));
                                   }
                                   return out;
                               })
        .def("to_text", &Timetable::to_text);

    m.def("schedule", &schedule, py::arg("plans"), py::arg("arms") = 2,
          py::arg("initial_world") = std::set<std::string>{"mixer_empty", "blender_empty"});

    // --- full pipeline ---------------------------------------------------------------
    m.def("run_scenario",
          [](const std::string& config_path, const std::string& scenario_path,
             std::uint64_t seed, bool noise) {
              RunConfig cfg = RunConfig::load(config_path);
              cfg.seed = seed;
              cfg.noise_enabled = noise;
              Engine engine(cfg);
              return trace_to_text(engine.run(script_load(scenario_path)));
          },
          py::arg("config_path"), py::arg("scenario_path"), py::arg("seed") = 0,
          py::arg("noise") = true);

    m.def("report_text", [](const std::string& trace_text) {
        return build_report(trace_from_text(trace_text)).to_text();
    });

    py::register_exception<Error>(m, "BrilloError");
}
