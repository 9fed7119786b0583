#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "brillo/engine.hpp"
#include "brillo/error.hpp"
#include "brillo/report.hpp"
#include "brillo/text.hpp"

namespace {

using namespace brillo;

RunConfig make_config(const std::string& config_path) {
    if (!config_path.empty()) return RunConfig::load(config_path);
    RunConfig cfg;
    // Without an explicit config, bundled data is expected next to the
    // current working directory.
    return cfg;
}

int cmd_run(const std::string& config_path, const std::string& scenario_path,
            std::uint64_t seed, bool seed_set, bool no_noise, const std::string& trace_path) {
    RunConfig cfg = make_config(config_path);
    if (!scenario_path.empty()) cfg.scenario_path = scenario_path;
    if (seed_set) cfg.seed = seed;
    if (no_noise) cfg.noise_enabled = false;
    if (!trace_path.empty()) cfg.trace_path = trace_path;
    if (cfg.scenario_path.empty()) {
        std::cerr << "run: no scenario given (use --scenario)\n";
        return 2;
    }
    Scenario scenario = script_load(cfg.scenario_path);
    Engine engine(cfg);
    Trace trace = engine.run(scenario);
    std::string text = trace_to_text(trace);
    if (!cfg.trace_path.empty()) {
        std::ofstream out(cfg.trace_path, std::ios::trunc | std::ios::binary);
        if (!out) {
            std::cerr << "run: cannot write trace file '" << cfg.trace_path << "'\n";
            return 1;
        }
        out << text;
    } else {
        std::cout << text;
    }
    for (const auto& d : engine.diagnostics()) std::cerr << "note: " << d << "\n";
    std::cerr << "run: " << trace.size() << " messages, clock "
              << engine.bus().now().str() << "s\n";
    return 0;
}

void print_robot_events(const Trace& step) {
    for (const Message& m : step) {
        const std::string t = "[t=" + m.publish_time.str() + "] ";
        if (m.topic == topics::kSpeech) {
            const auto& e = std::get<SpeechEvent>(m.payload);
            std::cout << t << "robot(" << e.act << "): " << e.text << "\n";
        } else if (m.topic == topics::kFace) {
            const auto& e = std::get<FaceBehaviorEvent>(m.payload);
            std::cout << t << "face: " << e.kind;
            if (e.kind == "expression") std::cout << " " << to_string(e.expression);
            std::cout << "\n";
        } else if (m.topic == topics::kArms) {
            const auto& e = std::get<ArmEvent>(m.payload);
            std::cout << t << "arm[" << e.arm << "] " << e.phase << " " << e.action_id << "\n";
        } else if (m.topic == topics::kOrders) {
            const auto& e = std::get<OrderEvent>(m.payload);
            std::cout << t << "order " << e.order_id << " (" << e.drink
                      << "): " << to_string(e.status) << "\n";
        } else if (m.topic == topics::kNews) {
            const auto& e = std::get<NewsEvent>(m.payload);
            if (e.kind == "stop") {
                std::cout << t << "news stopped (" << e.stop_reason << ")\n";
            }
        } else if (m.topic == topics::kStateChanges) {
            const auto& e = std::get<StateChangeEvent>(m.payload);
            std::cout << t << "you: " << to_string(e.old_state) << " -> "
                      << to_string(e.new_state) << "\n";
        }
    }
}

int cmd_interactive(const std::string& config_path) {
    RunConfig cfg = make_config(config_path);
    cfg.noise_enabled = false;  // typed text goes through the rule classifier
    Engine engine(cfg);
    auto persona = persona_from_string(cfg.interactive_persona);
    const std::string user = cfg.interactive_user;

    std::cout << "You are customer '" << user << "'. Type to talk; 'quit' to leave.\n";
    print_robot_events(engine.session_start(user, persona.value_or(Persona::Unspecified)));

    std::string line;
    while (true) {
        std::cout << "> " << std::flush;
        if (!std::getline(std::cin, line)) break;
        std::string text(trim(line));
        if (text.empty()) continue;
        if (text == "quit" || text == "exit") break;
        try {
            print_robot_events(engine.session_utterance(user, text));
        } catch (const Error& e) {
            std::cerr << "error: " << e.what() << "\n";
        }
        if (engine.state_of(user) == UserState::Gone) break;
    }
    print_robot_events(engine.session_finish(user));
    std::cout << "Goodbye.\n";
    return 0;
}

int cmd_report(const std::string& trace_path) {
    std::ifstream in(trace_path, std::ios::binary);
    if (!in) {
        std::cerr << "report: cannot open trace file '" << trace_path << "'\n";
        return 1;
    }
    std::stringstream buf;
    buf << in.rdbuf();
    Trace trace = trace_from_text(buf.str());
    std::cout << build_report(trace).to_text();
    return 0;
}

int cmd_validate(const std::string& config_path) {
    RunConfig cfg = make_config(config_path);
    int failures = 0;
    auto check = [&](const std::string& what, auto&& fn) {
        try {
            fn();
            std::cout << "ok      " << what << "\n";
        } catch (const std::exception& e) {
            std::cout << "error   " << what << ": " << e.what() << "\n";
            ++failures;
        }
    };
    check("graph " + cfg.graph_path, [&] {
        auto g = SemanticGraph::load(cfg.graph_path);
        std::cout << "        " << g.drinks().size() << " drinks\n";
    });
    check("profiles " + cfg.profiles_path, [&] {
        auto s = LongTermStore::load(cfg.profiles_path);
        std::cout << "        " << s.size() << " profiles\n";
    });
    check("recipes " + cfg.recipes_path, [&] {
        auto r = RecipeBook::load(cfg.recipes_path);
        auto g = SemanticGraph::load(cfg.graph_path);
        for (const auto& drink : g.drinks()) {
            if (!r.has(drink)) throw DataError("no recipe for drink '" + drink + "'");
        }
    });
    check("rules " + cfg.rules_path, [&] { RuleTable::load(cfg.rules_path); });
    check("lexicons", [&] {
        Lexicon::load(cfg.positive_lexicon_path, cfg.negative_lexicon_path);
    });
    check("news " + cfg.news_path, [&] { NewsFeed::load(cfg.news_path); });
    if (!cfg.utilities_path.empty()) {
        check("utilities " + cfg.utilities_path,
              [&] { UtilityTable::load(cfg.utilities_path); });
    }
    if (!cfg.scenario_path.empty()) {
        check("scenario " + cfg.scenario_path, [&] { script_load(cfg.scenario_path); });
    }
    return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"BRILLO bartender interaction engine (desk-scale simulation)"};
    app.require_subcommand(1);

    std::string config_path;
    std::string scenario_path;
    std::string trace_path;
    std::uint64_t seed = 0;
    bool no_noise = false;

    auto* run = app.add_subcommand("run", "Run a scenario to completion and write the trace");
    run->add_option("--scenario", scenario_path, "Scenario file");
    auto* seed_opt = run->add_option("--seed", seed, "Channel RNG seed");
    run->add_flag("--no-noise", no_noise, "Disable the intent confusion channel");
    run->add_option("--config", config_path, "Config file (key=value)");
    run->add_option("--trace", trace_path, "Trace output path (default: stdout)");

    auto* interactive =
        app.add_subcommand("interactive", "Play one customer against the bartender");
    interactive->add_option("--config", config_path, "Config file (key=value)");

    auto* report = app.add_subcommand("report", "Summarize a trace file");
    report->add_option("--trace", trace_path, "Trace file")->required();

    auto* validate = app.add_subcommand("validate-data", "Check all configured data files");
    validate->add_option("--config", config_path, "Config file (key=value)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (run->parsed()) {
            return cmd_run(config_path, scenario_path, seed, seed_opt->count() > 0, no_noise,
                           trace_path);
        }
        if (interactive->parsed()) return cmd_interactive(config_path);
        if (report->parsed()) return cmd_report(trace_path);
        if (validate->parsed()) return cmd_validate(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
