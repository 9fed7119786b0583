#include "brillo/plansched.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "brillo/error.hpp"
#include "brillo/text.hpp"

namespace brillo {

namespace {

constexpr std::array<std::pair<Resource, std::string_view>, 6> kResourceNames = {{
    {Resource::ArmLeft, "arm_left"},
    {Resource::ArmRight, "arm_right"},
    {Resource::ArmAny, "arm_any"},
    {Resource::Mixer, "mixer"},
    {Resource::Blender, "blender"},
    {Resource::Tap, "tap"},
}};

}  // namespace

std::string_view to_string(Resource r) {
    for (const auto& [value, name] : kResourceNames) {
        if (value == r) return name;
    }
    return "?";
}

std::optional<Resource> resource_from_string(std::string_view s) {
    for (const auto& [value, name] : kResourceNames) {
        if (name == s) return value;
    }
    return std::nullopt;
}

RecipeBook RecipeBook::from_text(const std::string& text, const std::string& origin) {
    RecipeBook book;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    std::string current;
    auto fail = [&](const std::string& msg) {
        throw DataError(origin + ":" + std::to_string(line_no) + ": " + msg);
    };
    while (std::getline(in, raw)) {
        ++line_no;
        std::string_view line = trim(raw);
        if (line.empty() || line.front() == '#') continue;
        if (raw.find('\t') == std::string::npos) {
            current = std::string(line);
            if (book.recipes_.count(current)) fail("duplicate recipe '" + current + "'");
            book.recipes_[current];
            continue;
        }
        if (current.empty()) fail("step line before any drink header");
        auto cols = split(line, '\t');
        if (cols.size() < 6 || cols.size() > 7) {
            fail("expected step<TAB>duration<TAB>resources<TAB>pre:...<TAB>add:...<TAB>del:...");
        }
        RecipeStep step;
        step.name = cols[0];
        try {
            step.duration = SimTime::parse(cols[1]);
        } catch (const DataError& e) {
            fail(e.what());
        }
        if (step.duration <= SimTime{}) fail("step duration must be positive");
        for (const auto& token : split(cols[2], ',')) {
            if (trim(token).empty()) continue;
            auto r = resource_from_string(trim(token));
            if (!r) fail("unknown resource '" + token + "'");
            step.resources.insert(*r);
        }
        auto parse_predicates = [&](const std::string& col, const char* prefix,
                                    std::set<std::string>& out) {
            std::string_view v = trim(col);
            if (v.rfind(prefix, 0) != 0) fail(std::string("expected '") + prefix + "' column");
            v.remove_prefix(std::string_view(prefix).size());
            for (const auto& p : split(v, ',')) {
                auto t = trim(p);
                if (!t.empty()) out.insert(std::string(t));
            }
        };
        parse_predicates(cols[3], "pre:", step.preconditions);
        parse_predicates(cols[4], "add:", step.add_effects);
        parse_predicates(cols[5], "del:", step.del_effects);
        if (cols.size() == 7) {
            if (trim(cols[6]) != "parallel") fail("unknown step flag '" + cols[6] + "'");
            step.parallel_safe = true;
        }
        book.recipes_[current].push_back(std::move(step));
    }
    for (const auto& [drink, steps] : book.recipes_) {
        if (steps.empty()) {
            throw DataError(origin + ": recipe '" + drink + "' has no steps");
        }
    }
    return book;
}

RecipeBook RecipeBook::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw DataError("cannot open recipe book '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str(), path);
}

const std::vector<RecipeStep>& RecipeBook::recipe(const std::string& drink) const {
    auto it = recipes_.find(drink);
    if (it == recipes_.end()) throw Error("no recipe for drink '" + drink + "'");
    return it->second;
}

std::vector<std::string> RecipeBook::drinks() const {
    std::vector<std::string> out;
    for (const auto& [drink, _] : recipes_) out.push_back(drink);
    return out;
}

std::vector<BasicAction> plan_order(const std::string& drink, const RecipeBook& recipes,
                                    const std::string& order_id) {
    const auto& steps = recipes.recipe(drink);
    std::vector<BasicAction> plan;
    auto ground = [&](const std::set<std::string>& predicates) {
        std::set<std::string> out;
        for (const auto& p : predicates) {
            if (!p.empty() && p.back() == '@') {
                out.insert(p.substr(0, p.size() - 1) + ":" + order_id);
            } else {
                out.insert(p);
            }
        }
        return out;
    };
    std::string last_sequential;          // id of the last non-parallel action
    std::vector<std::string> open_block;  // parallel actions since then
    int index = 0;
    for (const auto& step : steps) {
        BasicAction action;
        action.id = order_id + ":" + std::to_string(++index) + ":" + step.name;
        action.drink_order_id = order_id;
        action.duration = step.duration;
        action.resources = step.resources;
        action.preconditions = ground(step.preconditions);
        action.add_effects = ground(step.add_effects);
        action.del_effects = ground(step.del_effects);
        if (step.parallel_safe) {
            if (!last_sequential.empty()) action.predecessor_ids.insert(last_sequential);
            open_block.push_back(action.id);
        } else {
            if (!last_sequential.empty()) action.predecessor_ids.insert(last_sequential);
            for (const auto& sibling : open_block) action.predecessor_ids.insert(sibling);
            open_block.clear();
            last_sequential = action.id;
        }
        plan.push_back(std::move(action));
    }
    return plan;
}

SimTime Timetable::makespan() const {
    SimTime end;
    for (const auto& e : entries) {
        if (e.end > end) end = e.end;
    }
    return end;
}

std::string Timetable::to_text() const {
    std::string out;
    for (const auto& e : entries) {
        out += e.action_id;
        out += '\t';
        out += e.arm;
        out += '\t';
        out += e.start.str();
        out += '\t';
        out += e.end.str();
        out += '\n';
    }
    return out;
}

namespace {

struct Running {
    std::size_t action_index;
    SimTime end;
};

struct ArmState {
    SimTime busy_until;
    SimTime total_busy;
};

std::string arm_name(bool left, bool right) {
    if (left && right) return "both";
    if (left) return "left";
    if (right) return "right";
    return "none";
}

}  // namespace

Timetable schedule(const std::vector<std::vector<BasicAction>>& plans, int arms,
                   const std::set<std::string>& initial_world) {
    if (arms != 1 && arms != 2) throw Error("arms must be 1 or 2");

    // Flatten in plan submission order; that order is the scheduling and
    // tie-break order.
    std::vector<const BasicAction*> actions;
    std::map<std::string, std::size_t> by_id;
    for (const auto& plan : plans) {
        for (const auto& action : plan) {
            if (action.duration <= SimTime{}) {
                throw Error("action '" + action.id + "' has non-positive duration");
            }
            if (by_id.count(action.id)) throw Error("duplicate action id '" + action.id + "'");
            by_id[action.id] = actions.size();
            actions.push_back(&action);
        }
    }
    for (const auto* action : actions) {
        for (const auto& pred : action->predecessor_ids) {
            if (!by_id.count(pred)) {
                throw Error("action '" + action->id + "' references unknown predecessor '" +
                            pred + "'");
            }
        }
        for (Resource r : action->resources) {
            if (arms == 1 && r == Resource::ArmRight) {
                throw Error("action '" + action->id + "' needs arm_right with one arm");
            }
        }
    }

    Timetable result;
    result.arms = arms;
    std::set<std::string> world = initial_world;
    std::vector<bool> done(actions.size(), false);
    std::vector<bool> started(actions.size(), false);
    std::vector<Running> running;
    ArmState left, right;
    std::map<Resource, SimTime> station_busy_until;  // mixer/blender/tap

    SimTime now;
    std::size_t remaining = actions.size();
    result.world_trajectory.push_back({now, world});

    auto preds_done = [&](std::size_t i) {
        for (const auto& pred : actions[i]->predecessor_ids) {
            if (!done[by_id[pred]]) return false;
        }
        return true;
    };
    auto preconditions_met = [&](std::size_t i, std::set<std::string>* missing = nullptr) {
        bool ok = true;
        for (const auto& p : actions[i]->preconditions) {
            if (!world.count(p)) {
                ok = false;
                if (missing) missing->insert(p);
            }
        }
        return ok;
    };

    while (remaining > 0 || !running.empty()) {
        // Complete everything ending now, applying deletions then additions.
        bool completed = false;
        for (auto it = running.begin(); it != running.end();) {
            if (it->end == now) {
                const BasicAction* a = actions[it->action_index];
                for (const auto& p : a->del_effects) world.erase(p);
                for (const auto& p : a->add_effects) world.insert(p);
                done[it->action_index] = true;
                completed = true;
                it = running.erase(it);
            } else {
                ++it;
            }
        }

        // Start every ready action, in input order.
        bool started_any = false;
        for (std::size_t i = 0; i < actions.size(); ++i) {
            if (started[i] || !preds_done(i) || !preconditions_met(i)) continue;
            const BasicAction* a = actions[i];
            bool needs_left = a->resources.count(Resource::ArmLeft) != 0;
            bool needs_right = a->resources.count(Resource::ArmRight) != 0;
            bool needs_any = a->resources.count(Resource::ArmAny) != 0;
            bool left_free = left.busy_until <= now;
            bool right_free = arms == 2 && right.busy_until <= now;
            if (needs_left && !left_free) continue;
            if (needs_right && !right_free) continue;
            if (needs_any) {
                bool can_left = left_free && !needs_left;
                bool can_right = right_free && !needs_right;
                if (!can_left && !can_right) continue;
            }
            bool station_conflict = false;
            for (Resource r : a->resources) {
                if (r == Resource::Mixer || r == Resource::Blender || r == Resource::Tap) {
                    auto it = station_busy_until.find(r);
                    if (it != station_busy_until.end() && it->second > now) {
                        station_conflict = true;
                    }
                }
            }
            if (station_conflict) continue;

            // Commit: resolve arm_any to the least-busy free arm, left first.
            bool use_left = needs_left;
            bool use_right = needs_right;
            if (needs_any) {
                bool can_left = left_free && !use_left;
                bool can_right = right_free && !use_right;
                if (can_left && can_right) {
                    if (right.total_busy < left.total_busy) {
                        use_right = true;
                    } else {
                        use_left = true;
                    }
                } else if (can_left) {
                    use_left = true;
                } else {
                    use_right = true;
                }
            }
            SimTime end = now + a->duration;
            if (use_left) {
                left.busy_until = end;
                left.total_busy += a->duration;
                left_free = false;
            }
            if (use_right) {
                right.busy_until = end;
                right.total_busy += a->duration;
                right_free = false;
            }
            for (Resource r : a->resources) {
                if (r == Resource::Mixer || r == Resource::Blender || r == Resource::Tap) {
                    station_busy_until[r] = end;
                }
            }
            started[i] = true;
            --remaining;
            running.push_back({i, end});
            result.entries.push_back({a->id, arm_name(use_left, use_right), now, end});
            started_any = true;
        }

        if (completed || started_any) {
            result.world_trajectory.push_back({now, world});
        }

        if (remaining == 0 && running.empty()) break;

        // Advance to the next event boundary.
        if (!running.empty()) {
            SimTime next = running.front().end;
            for (const auto& r : running) {
                if (r.end < next) next = r.end;
            }
            now = next;
            continue;
        }

        // Nothing running and nothing startable: a precondition can never
        // become true.
        for (std::size_t i = 0; i < actions.size(); ++i) {
            if (started[i] || !preds_done(i)) continue;
            std::set<std::string> missing;
            preconditions_met(i, &missing);
            std::string names;
            for (const auto& m : missing) {
                if (!names.empty()) names += ", ";
                names += m;
            }
            throw Error("schedule deadlock: action '" + actions[i]->id +
                        "' blocked on missing predicates {" + names + "}");
        }
        throw Error("schedule deadlock: circular predecessor chain");
    }
    return result;
}

InterleaveResult interleave_gesture(const Timetable& t, const BasicAction& gesture,
                                    SimTime window_start, SimTime window_end) {
    if (!gesture.resources.count(Resource::ArmAny)) {
        throw Error("gesture '" + gesture.id + "' must use arm_any");
    }
    if (!gesture.predecessor_ids.empty()) {
        throw Error("gesture '" + gesture.id + "' must not have service predecessors");
    }

    auto busy_intervals = [&](const std::string& arm) {
        std::vector<std::pair<SimTime, SimTime>> out;
        for (const auto& e : t.entries) {
            if (e.arm == arm || e.arm == "both") out.emplace_back(e.start, e.end);
        }
        std::sort(out.begin(), out.end());
        return out;
    };
    auto earliest_fit = [&](const std::string& arm) -> std::optional<SimTime> {
        SimTime candidate = window_start;
        for (const auto& [start, end] : busy_intervals(arm)) {
            if (candidate + gesture.duration <= start) break;
            if (end > candidate) candidate = end;
        }
        if (candidate + gesture.duration <= window_end) return candidate;
        return std::nullopt;
    };

    SimTime left_busy, right_busy;
    for (const auto& e : t.entries) {
        if (e.arm == "left" || e.arm == "both") left_busy += e.end - e.start;
        if (e.arm == "right" || e.arm == "both") right_busy += e.end - e.start;
    }

    auto left_start = earliest_fit("left");
    std::optional<SimTime> right_start;
    if (t.arms == 2) right_start = earliest_fit("right");

    InterleaveResult result;
    result.timetable = t;
    std::string arm;
    std::optional<SimTime> start;
    if (left_start && right_start) {
        if (*right_start < *left_start ||
            (*right_start == *left_start && right_busy < left_busy)) {
            arm = "right";
            start = right_start;
        } else {
            arm = "left";
            start = left_start;
        }
    } else if (left_start) {
        arm = "left";
        start = left_start;
    } else if (right_start) {
        arm = "right";
        start = right_start;
    }
    if (!start) return result;  // dropped: service actions keep priority

    result.placed = true;
    result.start = *start;
    result.arm = arm;
    TimetableEntry entry{gesture.id, arm, *start, *start + gesture.duration};
    auto pos = std::upper_bound(result.timetable.entries.begin(), result.timetable.entries.end(),
                                entry.start, [](SimTime s, const TimetableEntry& e) {
                                    return s < e.start;
                                });
    result.timetable.entries.insert(pos, std::move(entry));
    return result;
}

std::vector<FaceEvent> face_behavior(const EngagementEstimate& engagement,
                                     DialogueState dialogue_state, Sentiment topic_sentiment,
                                     double engagement_threshold) {
    std::vector<FaceEvent> events;
    if (is_low_engagement(engagement, engagement_threshold)) {
        events.push_back({"expression", Expression::Joy, "", engagement.at});
        events.push_back({"vocal_sound", Expression::Neutral, "", engagement.at});
    }
    switch (dialogue_state) {
        case DialogueState::Listening:
            events.push_back({"gaze", Expression::Neutral, "", engagement.at});
            break;
        case DialogueState::Understood:
            break;
        case DialogueState::NotUnderstood:
            events.push_back({"expression", Expression::Surprise, "", engagement.at});
            events.push_back({"speech", Expression::Neutral, "", engagement.at});
            break;
        case DialogueState::Emoting: {
            Expression e = Expression::Neutral;
            if (topic_sentiment == Sentiment::Positive) e = Expression::Joy;
            if (topic_sentiment == Sentiment::Negative) e = Expression::Sadness;
            events.push_back({"expression", e, "", engagement.at});
            break;
        }
    }
    return events;
}

}  // namespace brillo
