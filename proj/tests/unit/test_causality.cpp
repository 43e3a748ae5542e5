#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "purpose/model_generator.hpp"

using namespace purpose;

namespace {

const EncodingSpace kHuman("H", "human", std::set<PointId>{"glad", "meh"});
const EncodingSpace kRobot("R", "robot", std::set<PointId>{"at", "away"});

/// s0 -go-> s1 -go-> s2; "back" steps toward s0, "stay" idles. `drift` makes idling advance too.
AlignmentModel line_model(bool drift = false) {
    TransitionTable t{{{"s0", "go"}, Row{"s1"}},   {{"s1", "go"}, Row{"s2"}},   {{"s2", "go"}, Row{"s2"}},
                      {{"s0", "back"}, Row{"s0"}}, {{"s1", "back"}, Row{"s0"}}, {{"s2", "back"}, Row{"s1"}},
                      {{"s0", "stay"}, Row{drift ? "s1" : "s0"}}, {{"s1", "stay"}, Row{drift ? "s2" : "s1"}},
                      {{"s2", "stay"}, Row{"s2"}}};
    const Domain dom("d", {"s0", "s1", "s2"}, {"back", "go", "stay"}, t, {"s0"});
    AlignmentModel m;
    m.domains.emplace("d", dom);
    m.robot_sensor = oracle::identity_sensor("robot", dom);
    m.human_sensor = SensorModel("human", {"h_far", "h_near"}, {{"d", dom.states()}},
                                 {{"s0", Row{"h_far"}}, {"s1", Row{"h_far"}}, {"s2", Row{"h_near"}}});
    m.human_purpose = purpose_from_utility("company", kHuman, {"H", {{"glad", 1.0}, {"meh", 0.0}}}, {PurposeKind::Human});
    m.robot_purpose = purpose_from_utility("closeness", kRobot, {"R", {{"at", 1.0}, {"away", 0.0}}},
                                           {PurposeKind::Mission, 1.0, true, {"d"}});
    m.intention_point = "at";
    m.robot_domains = {"d"};
    m.timeout = 2;
    m.idle_action = "stay";
    DomainBinding b;
    b.domain = "d";
    b.robot_encoder = ObservationEncoder("robot", kRobot, "d", {{"o_s0", "away"}, {"o_s1", "away"}, {"o_s2", "at"}});
    b.human_encoder = ObservationEncoder("human", kHuman, "d", {{"h_far", "meh"}, {"h_near", "glad"}});
    b.goal = ground_point(m.robot_purpose, "at", *b.robot_encoder);
    b.true_states = {"s2"};
    b.true_observations = {"h_near"};
    m.policy = plan_policy(b.goal, dom, *m.robot_sensor);
    m.bindings.push_back(b);
    return m;
}

History trace(const std::vector<std::string>& alternating) {
    History h(HistoryKind::StateAction);
    for (std::size_t i = 0; i < alternating.size(); ++i)
        h.append(i % 2 == 0 ? EntryKind::State : EntryKind::Action, alternating[i]);
    return h;
}

}  // namespace

TEST_SUITE("causality") {

TEST_CASE("AC1 follows the compound chain") {
    auto m = line_model();
    CHECK(ac1_existence(m));
    auto broken = m;
    broken.bindings.front().human_encoder = ObservationEncoder("human", kHuman, "d", {{"h_far", "meh"}, {"h_near", "meh"}});
    CHECK_FALSE(ac1_existence(broken));
    auto empty = m;
    empty.bindings.front().goal.points.clear();
    CHECK_FALSE(ac1_existence(empty));
}

TEST_CASE("AC2 on deterministic models") {
    Rng rng(1);
    const auto m = line_model();
    const auto r = ac2_counterfactual(m, default_intervention(m, "idle", false), rng);
    CHECK(r.holds);
    CHECK(r.exact);
    CHECK(r.deterministic);
    CHECK(r.p_do == 1.0);
    CHECK(r.p_baseline == 0.0);

    const auto drift = line_model(true);
    const auto d = ac2_counterfactual(drift, default_intervention(drift, "idle", false), rng);
    CHECK_FALSE(d.holds);
    CHECK(d.p_baseline == 1.0);

    auto spec = default_intervention(m, "idle", false);
    spec.horizon = 1;
    try {
        ac2_counterfactual(m, spec, rng);
        FAIL("expected HorizonTooShort");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::HorizonTooShort);
    }
}

TEST_CASE("AC2 enumeration matches a forward probability recursion") {
    Rng gen(61);
    for (int i = 0; i < 200; ++i) {
        const auto m = oracle::random_stochastic_model(gen, 4);
        const bool chain = !m.bindings.front().subgoals.empty();
        for (const char* baseline : {"idle", "random"}) {
            const auto spec = default_intervention(m, baseline, chain);
            Rng rng(1);
            const auto got = ac2_counterfactual(m, spec, rng);
            const auto want = oracle::forward_ac2(m, spec);
            REQUIRE(got.exact);
            CHECK(std::abs(got.p_do - want.p_do) <= 1e-9);
            CHECK(std::abs(got.p_baseline - want.p_baseline) <= 1e-9);
        }
    }
}

TEST_CASE("AC2 enumerated weights form a probability distribution") {
    Rng gen(62);
    for (int i = 0; i < 100; ++i) {
        auto m = oracle::random_stochastic_model(gen, 6);
        auto& b = m.bindings.front();
        std::map<ObservationId, PointId> all_good;
        for (const auto& o : m.human_sensor->observations()) all_good[o] = "good";
        b.human_encoder = ObservationEncoder("human", EncodingSpace("eh", "human", std::set<PointId>{"good", "bad"}), "d", all_good);
        Rng rng(2);
        const auto r = ac2_counterfactual(m, default_intervention(m, "random", !b.subgoals.empty()), rng);
        CHECK(std::abs(r.p_do - 1.0) <= 1e-9);
        CHECK(std::abs(r.p_baseline - 1.0) <= 1e-9);
    }
}

TEST_CASE("sampled AC2 reports standard errors and stays near the exact value") {
    Rng gen(63);
    int checked = 0;
    for (int i = 0; i < 30; ++i) {
        const auto m = oracle::random_stochastic_model(gen, 5);
        auto spec = default_intervention(m, "random", !m.bindings.front().subgoals.empty());
        Rng r1(3);
        const auto exact = ac2_counterfactual(m, spec, r1);
        spec.enumeration_limit = 1;
        spec.samples = 20000;
        Rng r2(4);
        const auto sampled = ac2_counterfactual(m, spec, r2);
        CHECK_FALSE(sampled.exact);
        CHECK(std::abs(sampled.p_do - exact.p_do) <= 4.0 * sampled.se_do + 1e-12);
        CHECK(std::abs(sampled.p_baseline - exact.p_baseline) <= 4.0 * sampled.se_baseline + 1e-12);
        ++checked;
    }
    CHECK(checked == 30);
}

TEST_CASE("AC3 compares executed and minimal cost") {
    const auto m = line_model();
    const auto best = ac3_minimality(m, trace({"s0", "go", "s1", "go", "s2"}));
    CHECK(best.holds);
    CHECK(best.executed_cost == 2.0);
    CHECK(best.minimal_cost == 2.0);
    const auto loop = ac3_minimality(m, trace({"s0", "go", "s1", "back", "s0", "go", "s1", "go", "s2"}));
    CHECK_FALSE(loop.holds);
    CHECK(loop.executed_cost == 4.0);
    CHECK(loop.minimal_cost == 2.0);
    try {
        ac3_minimality(m, trace({"s0", "go", "s1"}));
        FAIL("expected TraceDidNotSucceed");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::TraceDidNotSucceed);
    }
    const auto energy = ac3_minimality(m, trace({"s0", "go", "s1", "go", "s2"}), {{"go", 0.5}, {"back", 0.1}, {"stay", 0.1}});
    CHECK_FALSE(energy.integer_costs);
    CHECK(energy.holds);
    CHECK(energy.minimal_cost == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("AC3 minimal cost equals breadth-first distance and ignores unreachable states") {
    Rng rng(64);
    int solved = 0;
    while (solved < 200) {
        const int n = uniform_int(rng, 2, 10);
        Domain dom = oracle::random_domain(rng, "d", n, 2, 0.0);
        const StateId target = oracle::id("s", uniform_int(rng, 0, n - 1));
        const auto dist = oracle::bfs_distance(dom, {target});
        if (!dist.count("s0")) continue;
        ++solved;
        AlignmentModel m;
        m.domains.emplace("d", dom);
        m.robot_sensor = oracle::identity_sensor("robot", dom);
        m.human_sensor = oracle::identity_sensor("human", dom);
        DomainBinding b;
        b.domain = "d";
        std::map<ObservationId, PointId> table;
        for (const auto& o : m.human_sensor->observations()) table[o] = "glad";
        b.human_encoder = ObservationEncoder("human", kHuman, "d", table);
        b.goal = make_goal("g", "robot", "P", "d", {"o_" + target});
        m.bindings.push_back(b);
        const auto run = execute_chain({}, b.goal, plan_policy(b.goal, dom, *m.robot_sensor), dom, *m.robot_sensor, "s0", n, rng);
        const auto r = ac3_minimality(m, run.trace);
        CHECK(r.minimal_cost == static_cast<double>(dist.at("s0")));
        CHECK(r.holds);

        // an island state nobody reaches
        TransitionTable t = dom.transition();
        for (const auto& a : dom.actions()) t[{"island", a}] = Row{"island"};
        auto states = dom.states();
        states.insert("island");
        const Domain bigger("d", states, dom.actions(), t, dom.initial_states());
        AlignmentModel m2 = m;
        m2.domains.erase("d");
        m2.domains.emplace("d", bigger);
        m2.robot_sensor = oracle::identity_sensor("robot", bigger);
        m2.human_sensor = oracle::identity_sensor("human", bigger);
        auto table2 = table;
        table2["o_island"] = "glad";
        m2.bindings.front().human_encoder = ObservationEncoder("human", kHuman, "d", table2);
        CHECK(ac3_minimality(m2, run.trace).minimal_cost == r.minimal_cost);
    }
}

TEST_CASE("verdict is the conjunction and the idle baseline never fulfils deterministic aligned models") {
    for (int i = 0; i < 300; ++i) {
        Rng rng(5000 + static_cast<std::uint64_t>(i));
        const auto m = generate_random_model(CaseKind::Extrinsic, rng);
        if (!m.idle_action) continue;
        Rng run(9);
        const auto v = causal_verdict(m, default_intervention(m, "idle", false), run);
        CHECK(v.overall == (v.ac1 && v.ac2.holds && v.ac3.holds));
        const auto sem = check_conditions(m, {CaseKind::Extrinsic});
        const bool fulfilled_externally =
            std::any_of(sem.notes.begin(), sem.notes.end(), [](const std::string& n) { return n.find("idle policy") != std::string::npos; });
        if (sem.aligned && !fulfilled_externally) CHECK(v.ac2.p_baseline == 0.0);
    }
}

TEST_CASE("baselines") {
    const auto m = line_model();
    const auto& dom = m.domains.at("d");
    const auto idle = idle_policy(dom, *m.robot_sensor, "stay");
    CHECK(idle.row("o_s1", kBaselineKey).at("stay") == 1.0);
    CHECK_THROWS_AS(idle_policy(dom, *m.robot_sensor, "fly"), Error);
    const auto uni = uniform_policy(dom, *m.robot_sensor);
    CHECK(uni.row("o_s0", kBaselineKey).at("go") == doctest::Approx(1.0 / 3.0));
    CHECK_THROWS_AS(default_intervention(m, "wander", false), Error);
}

}
