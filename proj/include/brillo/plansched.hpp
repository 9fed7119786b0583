#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "brillo/domain.hpp"
#include "brillo/fusion.hpp"
#include "brillo/time.hpp"

namespace brillo {

// Resources a service action can occupy. arm_any resolves to one concrete
// arm at schedule time.
enum class Resource { ArmLeft, ArmRight, ArmAny, Mixer, Blender, Tap };
std::string_view to_string(Resource r);
std::optional<Resource> resource_from_string(std::string_view s);

// Atomic service step with STRIPS-style preconditions/effects, a duration,
// and resource demands. Effects apply at the action's end; preconditions
// are checked at its start.
struct BasicAction {
    std::string id;
    std::string drink_order_id;
    std::set<std::string> preconditions;
    std::set<std::string> add_effects;
    std::set<std::string> del_effects;
    SimTime duration;
    std::set<Resource> resources;
    std::set<std::string> predecessor_ids;
};

struct RecipeStep {
    std::string name;
    SimTime duration;
    std::set<Resource> resources;
    std::set<std::string> preconditions;
    std::set<std::string> add_effects;
    std::set<std::string> del_effects;
    bool parallel_safe = false;
};

// Recipe book file format: a bare `drink_id` line opens a recipe, followed
// by indent-free step lines
//   step<TAB>duration<TAB>resources<TAB>pre:p1,p2<TAB>add:...<TAB>del:...[<TAB>parallel]
// A trailing `@` in a predicate is expanded to the order id at plan time.
class RecipeBook {
public:
    static RecipeBook load(const std::string& path);
    static RecipeBook from_text(const std::string& text,
                                const std::string& origin = "<memory>");

    bool has(const std::string& drink) const { return recipes_.count(drink) != 0; }
    const std::vector<RecipeStep>& recipe(const std::string& drink) const;
    std::vector<std::string> drinks() const;

private:
    std::map<std::string, std::vector<RecipeStep>> recipes_;
};

// Expands a recipe into a plan with fresh ids and a linear predecessor
// chain; parallel-safe steps hang off the preceding sequential step and
// rejoin before the next one.
std::vector<BasicAction> plan_order(const std::string& drink, const RecipeBook& recipes,
                                    const std::string& order_id);

struct TimetableEntry {
    std::string action_id;
    std::string arm;  // left | right | both | none
    SimTime start;
    SimTime end;
};

struct WorldSnapshot {
    SimTime at;
    std::set<std::string> predicates;
};

struct Timetable {
    std::vector<TimetableEntry> entries;       // start order
    std::vector<WorldSnapshot> world_trajectory;
    int arms = 2;

    SimTime makespan() const;
    // action<TAB>arm<TAB>start<TAB>end lines.
    std::string to_text() const;
};

// Greedy earliest-start list scheduling over one or two arms. At each event
// time every ready action (predecessors done, preconditions true, resources
// free) starts, in plan order; arm_any picks the arm with the lowest
// accumulated busy time, ties to the left arm. Deterministic given input
// order. Throws Error naming the first blocked action and its missing
// predicates when no progress is possible.
Timetable schedule(const std::vector<std::vector<BasicAction>>& plans, int arms,
                   const std::set<std::string>& initial_world);

struct InterleaveResult {
    Timetable timetable;
    bool placed = false;
    SimTime start;
    std::string arm;
};

// Places a gesture in the earliest idle-arm gap inside the window that fits
// its duration; service actions keep strict priority, so a gesture that
// does not fit is dropped.
InterleaveResult interleave_gesture(const Timetable& t, const BasicAction& gesture,
                                    SimTime window_start, SimTime window_end);

enum class DialogueState { Listening, Understood, NotUnderstood, Emoting };

struct FaceEvent {
    std::string kind;  // expression | vocal_sound | speech | gaze
    Expression expression = Expression::Neutral;
    std::string user_id;
    SimTime at;
};

// Symbolic face policy: an attention-catch pair under low engagement, a
// surprise+speech hook when the speech was not understood, topic-sentiment
// emoting, gaze while listening.
std::vector<FaceEvent> face_behavior(const EngagementEstimate& engagement,
                                     DialogueState dialogue_state,
                                     Sentiment topic_sentiment = Sentiment::Neutral,
                                     double engagement_threshold = kDefaultEngagementThreshold);

}  // namespace brillo
