#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "oracles.hpp"
#include "purpose/home_scenario.hpp"

using namespace purpose;

namespace {

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

std::string data(const char* name) { return std::string(DATA_DIR) + "/" + name; }

ErrorKind kind_of(const std::function<void()>& f, std::string* message = nullptr) {
    try {
        f();
    } catch (const Error& e) {
        if (message) *message = e.what();
        return e.kind();
    }
    FAIL("expected an error");
    return ErrorKind::IoError;
}

/// Random scenario text: one domain with some stochastic rows, a robot sensor, one purpose, a short schedule.
std::string random_scenario(Rng& rng) {
    nlohmann::ordered_json j;
    j["schema"] = 1;
    j["name"] = "generated";
    j["seed"] = uniform_int(rng, 0, 1000);
    const int n = uniform_int(rng, 2, 6);
    const auto states = oracle::ids("s", n);
    const auto actions = oracle::ids("a", uniform_int(rng, 1, 3));
    nlohmann::ordered_json transitions;
    for (const auto& s : states)
        for (const auto& a : actions) {
            if (uniform01(rng) < 0.4) {
                nlohmann::ordered_json row;
                // exact binary fractions keep the text stable
                row[states[0]] = 0.25;
                row[states[static_cast<std::size_t>(n - 1)]] = 0.75;
                transitions[s][a] = row;
            } else {
                transitions[s][a] = states[static_cast<std::size_t>(uniform_int(rng, 0, n - 1))];
            }
        }
    j["domains"] = {{{"id", "d"}, {"states", states}, {"actions", actions}, {"initial", {states[0]}}, {"transitions", transitions}}};
    nlohmann::ordered_json map;
    for (const auto& s : states) map[s] = "o_" + s;
    std::vector<std::string> obs;
    for (const auto& s : states) obs.push_back("o_" + s);
    j["sensors"] = {{{"owner", "robot"}, {"observations", obs}, {"domains", {"d"}}, {"map", map}}};
    j["spaces"] = {{{"id", "E"}, {"owner", "robot"}, {"points", {"hit", "miss"}}}};
    nlohmann::ordered_json enc;
    for (const auto& o : obs) enc[o] = uniform01(rng) < 0.5 ? "hit" : "miss";
    enc[obs.back()] = "hit";
    j["encoders"] = {{{"owner", "robot"}, {"space", "E"}, {"domain", "d"}, {"map", enc}}};
    j["purposes"] = {{{"id", "p"}, {"space", "E"}, {"kind", "need"}, {"utility", {{"hit", 1}}}, {"alpha", uniform_int(rng, 1, 9)},
                      {"iota", true}, {"domains", {"d"}}}};
    j["trial_timeout"] = uniform_int(rng, 1, 10);
    const int trials = uniform_int(rng, 0, 3);
    j["trials"] = nlohmann::ordered_json::array();
    for (int t = 0; t < trials; ++t) j["trials"].push_back({{"context", "day"}, {"domain", "d"}});
    return j.dump(2);
}

Goal goal_from_id(const ScenarioSpec& spec, const GoalId& id, const std::string& context) {
    const auto at = id.find('@');
    const auto hash = id.find('#');
    const PurposeId pid = id.substr(0, at);
    const DomainId dom = id.substr(at + 1, hash == std::string::npos ? std::string::npos : hash - at - 1);
    const auto& p = spec.purpose(pid).purpose;
    const auto& enc = spec.encoder(p.owner, p.space_id, dom, context);
    return hash == std::string::npos ? ground_purpose(p, enc) : ground_point(p, id.substr(hash + 1), enc);
}

}  // namespace

TEST_SUITE("scenario") {

TEST_CASE("minimal file gets defaults") {
    const auto spec = load_scenario(data("minimal.json"));
    CHECK(spec.seed == 0);
    CHECK(spec.trial_timeout == 30);
    CHECK(spec.arbitration.rule == ArbitrationRule::Motivational);
    CHECK(spec.arbitration.temperature == 1.0);
    CHECK(spec.trials.empty());
    REQUIRE(spec.purposes.size() == 1);
    const auto& p = spec.purposes.front();
    CHECK(p.active);
    CHECK(p.purpose.priority == 1.0);
    CHECK_FALSE(p.purpose.intention_flag);
    CHECK(p.purpose.support == std::set<PointId>{"x"});
    CHECK(p.purpose.utility("y") == 0.0);
    CHECK(spec.domain("d").initial_states() == std::set<StateId>{"a", "b"});
}

TEST_CASE("load errors") {
    std::string msg;
    CHECK(kind_of([] { load_scenario(data("bad_row.json")); }, &msg) == ErrorKind::ValidationError);
    CHECK(msg.find("row (a, go)") != std::string::npos);
    CHECK(kind_of([] { load_scenario(data("truncated.json")); }, &msg) == ErrorKind::ParseError);
    CHECK(msg.find("line 2") != std::string::npos);
    CHECK(kind_of([] { load_scenario(data("does_not_exist.json")); }) == ErrorKind::IoError);
    CHECK(kind_of([] { parse_scenario(R"({"schema": 2})"); }) == ErrorKind::ValidationError);
}

TEST_CASE("phase and reference validation") {
    auto text = slurp(data("corridor.json"));
    auto j = nlohmann::ordered_json::parse(text);
    auto gap = j;
    gap["phases"] = {{{"trials", {2, 2}}}};
    CHECK(kind_of([&] { parse_scenario(gap.dump()); }) == ErrorKind::ValidationError);
    auto unknown = j;
    unknown["phases"] = {{{"trials", {1, 2}}, {"alpha", {{"ghost", 3}}}}};
    std::string msg;
    CHECK(kind_of([&] { parse_scenario(unknown.dump()); }, &msg) == ErrorKind::ValidationError);
    CHECK(msg.find("ghost") != std::string::npos);
    auto dangling = j;
    dangling["trials"][0]["domain"] = "nowhere";
    CHECK(kind_of([&] { parse_scenario(dangling.dump()); }) == ErrorKind::ValidationError);
}

TEST_CASE("emit and load round trip") {
    for (const char* f : {"minimal.json", "corridor.json", "misaligned.json"}) {
        const auto once = emit_scenario(load_scenario(data(f)));
        const auto twice = emit_scenario(parse_scenario(once));
        CHECK(once == twice);
    }
    const auto home = emit_scenario(build_home_robot_scenario());
    CHECK(emit_scenario(parse_scenario(home)) == home);
    Rng rng(71);
    for (int i = 0; i < 100; ++i) {
        const auto text = random_scenario(rng);
        const auto once = emit_scenario(parse_scenario(text));
        CHECK(emit_scenario(parse_scenario(once)) == once);
    }
}

TEST_CASE("empty schedule gives an empty report") {
    Rng rng(1);
    const auto r = run_trials(load_scenario(data("minimal.json")), rng);
    CHECK(r.trials.empty());
    CHECK(r.checks.empty());
    CHECK(r.format_version == kReportFormatVersion);
}

TEST_CASE("reports are deterministic and carry witnesses verbatim") {
    const auto spec = load_scenario(data("misaligned.json"));
    Rng a(spec.seed), b(spec.seed);
    const auto first = render_report(run_trials(spec, a), ReportFormat::Json);
    const auto second = render_report(run_trials(spec, b), ReportFormat::Json);
    CHECK(first == second);
    const auto j = nlohmann::ordered_json::parse(first);
    const auto& cond = j["checks"][0]["alignment"][0]["conditions"][2];
    CHECK(cond["holds"] == false);
    CHECK(cond["witnesses"] == nlohmann::json::array({"goal"}));
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"format_version", "scenario", "seed", "trials", "checks", "learning_curves", "warnings"});

    const auto path = std::filesystem::temp_directory_path() / "purpose_report_test.json";
    Rng c(spec.seed);
    emit_report(run_trials(spec, c), path, ReportFormat::Json);
    CHECK(slurp(path) == first);
    std::filesystem::remove(path);
    CHECK(kind_of([&] { emit_report(run_trials(spec, c), "/nonexistent_dir/x/report.json", ReportFormat::Json); }) ==
          ErrorKind::IoError);
}

TEST_CASE("digest ignores the seed") {
    auto spec = load_scenario(data("corridor.json"));
    Rng a(1), b(1);
    const auto d1 = run_trials(spec, a).scenario_digest;
    spec.seed = 999;
    const auto d2 = run_trials(spec, b).scenario_digest;
    CHECK(d1 == d2);
    CHECK(digest("") == "cbf29ce484222325");
    CHECK(digest("a") == "af63dc4c8601ec8c");
}

TEST_CASE("home scenario parameters") {
    const auto spec = build_home_robot_scenario();
    REQUIRE(spec.phases.size() == 2);
    CHECK(spec.phases[0].first_trial == 1);
    CHECK(spec.phases[0].last_trial == 4);
    CHECK(spec.phases[0].priorities.at("closeness") == 10.0);
    CHECK(spec.phases[0].priorities.at("energy") == 2.0);
    CHECK(spec.phases[1].first_trial == 5);
    CHECK(spec.phases[1].last_trial == 8);
    CHECK(spec.phases[1].priorities.at("closeness") == 5.0);
    CHECK(spec.phases[1].priorities.at("energy") == 2.0);
    CHECK(spec.phases[1].add == std::vector<PurposeId>{"night_proximity"});
    const auto& night = spec.purpose("night_proximity");
    CHECK(night.purpose.polarity == Polarity::Proscriptive);
    CHECK_FALSE(night.active);
    CHECK(spec.arbitration.rule == ArbitrationRule::Motivational);
    REQUIRE(spec.trials.size() == 8);
    const std::vector<std::string> contexts{"day", "day", "night", "night", "day", "day", "night", "night"};
    for (std::size_t i = 0; i < 8; ++i) CHECK(spec.trials[i].context == contexts[i]);
    const auto& dom = spec.domain("home");
    CHECK(dom.states().size() == static_cast<std::size_t>((home::kGrid * home::kGrid - 1) * (home::kMaxBattery + 1)));
    CHECK(scenario_warnings(spec).empty());
}

TEST_CASE("home trials follow shortest paths and respect the schedule") {
    const auto spec = build_home_robot_scenario();
    const auto& dom = spec.domain("home");
    const auto& sensor = spec.sensor("robot");
    Rng rng(7);
    const auto report = run_trials(spec, rng);
    REQUIRE(report.trials.size() == 8);
    for (const auto& t : report.trials) {
        for (const auto& s : t.states) CHECK(dom.has_state(s));
        CHECK(t.states.front() == t.start);
        CHECK(t.states.size() == t.actions.size() + 1);
        if (t.selected_purpose)
            CHECK(std::find(t.intended.begin(), t.intended.end(), *t.selected_purpose) != t.intended.end());
        const bool constrained = t.phase == 2 && t.context == "night";
        if (!t.selected || constrained) continue;
        const auto targets = state_goal(goal_from_id(spec, *t.selected, t.context), sensor).states;
        const auto dist = oracle::bfs_distance(dom, targets);
        REQUIRE(dist.count(t.start));
        CHECK(t.success);
        CHECK(static_cast<int>(t.actions.size()) == dist.at(t.start));
    }
    for (int i : {0, 1}) CHECK(home::human_adjacent(report.trials[static_cast<std::size_t>(i)].states.back()));
    CHECK(std::any_of(report.trials[3].states.begin(), report.trials[3].states.end(), home::human_adjacent));
    for (int i : {6, 7})
        CHECK(std::none_of(report.trials[static_cast<std::size_t>(i)].states.begin(),
                           report.trials[static_cast<std::size_t>(i)].states.end(), home::human_adjacent));
    CHECK(home::at_charger(report.trials[2].states.back()));
}

TEST_CASE("home report matches the golden file") {
    const auto golden = slurp(std::string(GOLDEN_DIR) + "/home_seed7.json");
    REQUIRE_FALSE(golden.empty());
    Rng rng(7);
    auto spec = build_home_robot_scenario();
    spec.seed = 7;
    CHECK(render_report(run_trials(spec, rng), ReportFormat::Json) == golden);
    Rng again(7);
    CHECK(render_report(run_trials(parse_scenario(emit_scenario(spec)), again), ReportFormat::Json) == golden);
}

TEST_CASE("partial runs and state helpers") {
    const auto spec = build_home_robot_scenario();
    Rng rng(7);
    CHECK(run_trials(spec, rng, 2).trials.size() == 2);
    const auto c = home::parse_state("x4y2b7");
    CHECK(c.x == 4);
    CHECK(c.y == 2);
    CHECK(c.battery == 7);
    CHECK(home::state_id(4, 2, 7) == "x4y2b7");
    CHECK(home::human_adjacent("x2y4b3"));
    CHECK_FALSE(home::human_adjacent("x1y3b3"));
    CHECK(home::at_charger("x6y3b0"));
}

}
