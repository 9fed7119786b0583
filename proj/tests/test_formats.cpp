#include <filesystem>
#include <fstream>

#include "doctest.h"

#include "brillo/config.hpp"
#include "brillo/decision.hpp"
#include "brillo/error.hpp"
#include "brillo/nlu.hpp"
#include "brillo/report.hpp"
#include "brillo/rng.hpp"
#include "brillo/text.hpp"
#include "brillo/time.hpp"

using namespace brillo;

namespace {

std::string write_temp(const std::string& name, const std::string& content) {
    namespace fs = std::filesystem;
    fs::path dir = fs::temp_directory_path() / "brillo_format_test";
    fs::create_directories(dir);
    std::string path = (dir / name).string();
    std::ofstream out(path, std::ios::trunc);
    out << content;
    return path;
}

}  // namespace

TEST_CASE("simulated time parses decimal seconds up to millisecond precision") {
    CHECK(SimTime::parse("12").ms() == 12000);
    CHECK(SimTime::parse("12.5").ms() == 12500);
    CHECK(SimTime::parse("12.500").ms() == 12500);
    CHECK(SimTime::parse("0.001").ms() == 1);
    CHECK(SimTime::parse("-3.25").ms() == -3250);
    CHECK_THROWS_AS(SimTime::parse("1.2345"), DataError);  // sub-millisecond
    CHECK_THROWS_AS(SimTime::parse("abc"), DataError);
    CHECK_THROWS_AS(SimTime::parse("1."), DataError);
    CHECK_THROWS_AS(SimTime::parse(""), DataError);
    CHECK(SimTime::from_ms(7250).str() == "7.250");
    CHECK(SimTime::from_ms(50).str() == "0.050");
}

TEST_CASE("key-value text escapes and parses back losslessly") {
    Rng rng(21);
    const std::string alphabet = "ab \"=\\\t\nxyz0";
    for (int round = 0; round < 300; ++round) {
        std::string value;
        std::size_t len = rng.below(12);
        for (std::size_t i = 0; i < len; ++i) value += alphabet[rng.below(alphabet.size())];
        std::string line;
        kv_append(line, "key", value);
        kv_append(line, "tail", "end");
        auto parsed = parse_kv(line);
        REQUIRE(parsed.size() == 2);
        CHECK(parsed[0].second == value);
        CHECK(parsed[1].second == "end");
    }
    CHECK_THROWS_AS(parse_kv("novalue"), DataError);
    CHECK_THROWS_AS(parse_kv("k=\"unterminated"), DataError);
}

TEST_CASE("malformed trace lines report their line number") {
    CHECK_THROWS_WITH_AS(trace_from_text("0.000\t1\t/users\tkind=user-seen user=u\nbroken\n"),
                         doctest::Contains("line 2"), DataError);
    CHECK_THROWS_WITH_AS(trace_from_text("zzz\t1\t/users\tkind=user-seen user=u\n"),
                         doctest::Contains("line 1"), DataError);
    CHECK_THROWS_AS(trace_from_text("0.000\t1\t/mystery\tx=1\n"), DataError);
}

TEST_CASE("config files reject unknown keys and bad values") {
    CHECK_THROWS_WITH_AS(RunConfig::load(write_temp("bad_key.cfg", "no_such_key=1\n")),
                         doctest::Contains("unknown key"), DataError);
    CHECK_THROWS_AS(RunConfig::load(write_temp("bad_bool.cfg", "noise_enabled=maybe\n")),
                    DataError);
    CHECK_THROWS_AS(RunConfig::load(write_temp("bad_num.cfg", "cr_threshold=abc\n")),
                    DataError);
    CHECK_THROWS_AS(RunConfig::load(write_temp("no_eq.cfg", "just a line\n")), DataError);

    std::string path = write_temp("ok.cfg", "seed=7\nnoise_enabled=false\narms=1\n");
    RunConfig cfg = RunConfig::load(path);
    CHECK(cfg.seed == 7);
    CHECK_FALSE(cfg.noise_enabled);
    CHECK(cfg.arms == 1);
    // Relative paths resolve against the config directory.
    CHECK(cfg.graph_path.find("brillo_format_test") != std::string::npos);
}

TEST_CASE("rule table rejects malformed lines") {
    CHECK_THROWS_AS(RuleTable::from_lines({"Order\tpattern"}), DataError);
    CHECK_THROWS_AS(RuleTable::from_lines({"Nonsense\tpattern\t0.5"}), DataError);
    CHECK_THROWS_AS(RuleTable::from_lines({"Order\tpattern\t1.5"}), DataError);
    CHECK_THROWS_AS(RuleTable::from_lines({"Order\t(unclosed\t0.5"}), DataError);
    RuleTable ok = RuleTable::from_lines({"# comment", "", "Order\tmojito\t0.8"});
    CHECK(ok.size() == 1);
}

TEST_CASE("utility table files reject unknown labels") {
    CHECK_THROWS_AS(UtilityTable::load(write_temp("bad_action.tsv", "fly\tOrder\t1\n")),
                    DataError);
    CHECK_THROWS_AS(
        UtilityTable::load(write_temp("bad_intent.tsv", "AskRepeat\tNothing\t1\n")),
        DataError);
    CHECK_THROWS_AS(UtilityTable::load(write_temp("bad_value.tsv", "AskRepeat\tOrder\tx\n")),
                    DataError);
    // Partial files overlay the defaults.
    UtilityTable t = UtilityTable::load(write_temp("partial.tsv", "AskRepeat\tOrder\t0.25\n"));
    CHECK(t.u[kAskRepeat][static_cast<std::size_t>(Intent::Order)] == 0.25);
    CHECK(t.u[0][0] == 1.0);
}

TEST_CASE("news feed files validate sources and ids") {
    CHECK_THROWS_AS(NewsFeed::load(write_temp("bad_source.tsv", "n1\tsport\tfunny\they\n")),
                    DataError);
    CHECK_THROWS_AS(
        NewsFeed::from_items({{"n1", "a", "serious", "x"}, {"n1", "b", "serious", "y"}}),
        DataError);
}
