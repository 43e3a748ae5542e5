// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any criterion fails.

#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "grid.hpp"
#include "oracles.hpp"
#include "purpose/home_scenario.hpp"
#include "purpose/model_generator.hpp"

using namespace purpose;

namespace {

struct Outcome {
    bool pass = true;
    std::ostringstream detail;

    void require(bool ok, const std::string& what) {
        if (!ok && pass) detail << "first failure: " << what << "; ";
        pass = pass && ok;
    }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

// 1. Conditions and definition agree on every case.
Outcome theorem_equivalence() {
    Outcome out;
    const int count = 1000;
    const std::uint64_t seed = 20240;
    const auto t0 = std::chrono::steady_clock::now();
    int total = 0;
    int agreed = 0;
    for (CaseKind kind : kAllCases) {
        const auto r = equivalence_audit(generate_random_model, {kind, kAuditThreshold}, count, seed);
        total += r.count;
        agreed += r.agreements;
        out.require(r.agreements == r.count, std::string(to_string(kind)) + " disagreements " + std::to_string(r.count - r.agreements));
    }
    const double elapsed = seconds_since(t0);
    out.require(elapsed <= 60.0, "runtime " + std::to_string(elapsed) + " s");

    int bounded = 0;
    for (CaseKind kind : kAllCases)
        for (int i = 0; i < count; ++i) {
            Rng a(seed + static_cast<std::uint64_t>(i));
            Rng b(seed + static_cast<std::uint64_t>(i));
            const auto m = generate_random_model(kind, a);
            out.require(describe(m) == describe(generate_random_model(kind, b)), "generator not deterministic");
            std::size_t states = 0;
            for (const auto& [id, d] : m.domains) {
                states = std::max(states, d.states().size());
                out.require(d.deterministic(), "nondeterministic domain");
            }
            bool ok = states <= 12 && m.robot_sensor->observations().size() <= 8 && m.human_sensor->observations().size() <= 8;
            for (const auto& bnd : m.bindings) {
                ok = ok && bnd.robot_encoder->space_points().size() <= 6 && bnd.human_encoder->space_points().size() <= 6;
                if (bnd.human_forbidden_encoder) ok = ok && bnd.human_forbidden_encoder->space_points().size() <= 6;
            }
            out.require(ok, "generator bounds exceeded");
            bounded += ok;
        }
    out.detail << agreed << "/" << total << " agreements over 8 cases in " << elapsed << " s; " << bounded << " models within bounds";
    return out;
}

// 2. Breaking one Extrinsic condition makes the operational check fail.
Outcome necessity_probes() {
    Outcome out;
    Rng rng(4242);
    std::ostringstream counts;
    for (int condition = 1; condition <= 4; ++condition) {
        int mutants = 0;
        int flipped = 0;
        int guard = 0;
        while (mutants < 200 && guard++ < 100000) {
            const auto aligned = generate_aligned_extrinsic(rng);
            auto mutant = mutate_condition(aligned, condition, rng);
            if (!mutant) continue;
            ++mutants;
            const auto sem = check_conditions(*mutant, {CaseKind::Extrinsic});
            bool broken = false;
            for (const auto& c : sem.conditions)
                if (c.number == condition) broken = !c.holds;
            out.require(broken, "mutant does not break condition " + std::to_string(condition));
            Rng run(static_cast<std::uint64_t>(mutants));
            if (!check_definition(*mutant, {CaseKind::Extrinsic}, run).aligned) ++flipped;
        }
        out.require(mutants == 200, "too few mutants for condition " + std::to_string(condition));
        out.require(flipped == mutants, "condition " + std::to_string(condition) + " flipped " + std::to_string(flipped));
        counts << " c" << condition << " " << flipped << "/" << mutants;
    }
    out.detail << "flipped:" << counts.str();
    return out;
}

// 3. Home scenario narrative over 100 seeds plus the golden report.
Outcome home_narrative() {
    Outcome out;
    const auto base = build_home_robot_scenario();
    int night_adjacent = 0;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) {
        auto spec = base;
        spec.seed = seed;
        Rng a(seed);
        Rng b(seed);
        const auto report = run_trials(spec, a);
        const auto text = render_report(report, ReportFormat::Json);
        out.require(text == render_report(run_trials(spec, b), ReportFormat::Json), "seed " + std::to_string(seed) + " not reproducible");
        out.require(report.trials.size() == 8, "schedule length");
        if (report.trials.size() != 8) continue;
        for (int i : {0, 1}) out.require(home::human_adjacent(report.trials[static_cast<std::size_t>(i)].states.back()),
                                         "seed " + std::to_string(seed) + " day trial " + std::to_string(i + 1) + " not adjacent");
        const auto& t4 = report.trials[3].states;
        out.require(std::any_of(t4.begin(), t4.end(), home::human_adjacent), "seed " + std::to_string(seed) + " trial 4 misses the human");
        for (const auto& t : report.trials)
            if (t.phase == 2 && t.context == "night")
                night_adjacent += static_cast<int>(std::count_if(t.states.begin(), t.states.end(), home::human_adjacent));
        out.require(report.trials[0].phase == 1 && report.trials[4].phase == 2, "phase numbering");
    }
    out.require(night_adjacent == 0, std::to_string(night_adjacent) + " night-time adjacent visits in phase 2");
    auto spec = base;
    spec.seed = 7;
    Rng rng(7);
    const bool golden = render_report(run_trials(spec, rng), ReportFormat::Json) == slurp(std::string(GOLDEN_DIR) + "/home_seed7.json");
    out.require(golden, "golden report differs");
    out.detail << "100 seeds reproducible; phase-2 night adjacent visits " << night_adjacent << "; golden " << (golden ? "match" : "differs");
    return out;
}

Purpose intended(const std::string& id, double alpha) {
    static const EncodingSpace space("E", "robot", std::set<PointId>{"e1", "e2"});
    return purpose_from_utility(id, space, {"E", {{"e1", 1.0}, {"e2", 0.0}}}, {PurposeKind::Need, alpha, true, {"d"}});
}

// 4. Softmax normalization, low-temperature concentration, rescaling invariance.
Outcome arbitration_numerics() {
    Outcome out;
    Rng rng(404);
    double worst = 0.0;
    for (int i = 0; i < 10000; ++i) {
        const int n = uniform_int(rng, 2, 8);
        std::vector<Purpose> ps;
        MotivationReadout r;
        for (int k = 0; k < n; ++k) {
            ps.push_back(intended(oracle::id("P", k), 100.0 * uniform01(rng)));
            r.utility[ps.back().id] = 0.001 + 0.998 * uniform01(rng);
        }
        ArbitrationConfig cfg;
        cfg.temperature = std::pow(10.0, 4.0 * uniform01(rng) - 2.0);
        double sum = 0.0;
        for (const auto& [id, p] : softmax_distribution(ps, r, cfg)) sum += p;
        worst = std::max(worst, std::abs(sum - 1.0));
    }
    out.require(worst <= 1e-9, "row sum error " + std::to_string(worst));

    int top_hits = 0;
    ArbitrationConfig cold;
    cold.temperature = 0.01;
    for (int i = 0; i < 10000; ++i) {
        std::vector<Purpose> ps;
        MotivationReadout r;
        PurposeId best;
        double top = -1.0;
        for (int k = 0; k < 5; ++k) {
            // score alpha * (1 - 0.5) spans [0, 10]
            ps.push_back(intended(oracle::id("P", k), 20.0 * uniform01(rng)));
            r.utility[ps.back().id] = 0.5;
            if (ps.back().priority * 0.5 > top) {
                top = ps.back().priority * 0.5;
                best = ps.back().id;
            }
        }
        top_hits += sample(softmax_distribution(ps, r, cold), rng) == best;
    }
    const double freq = top_hits / 10000.0;
    out.require(freq >= 0.99, "top frequency " + std::to_string(freq));

    int invariant = 0;
    for (int i = 0; i < 1000; ++i) {
        const int n = uniform_int(rng, 2, 8);
        std::vector<Purpose> ps;
        MotivationReadout r;
        MotivationalSpace ms{"robot", {}};
        std::vector<Goal> goals;
        std::map<GoalId, std::vector<PointId>> pred;
        for (int k = 0; k < n; ++k) {
            ps.push_back(intended(oracle::id("P", k), 10.0 * uniform01(rng)));
            r.utility[ps.back().id] = 0.01 + 0.98 * uniform01(rng);
            ms.components.push_back({oracle::id("C", k), 10.0 * uniform01(rng), {oracle::id("C", k), {{"p", uniform01(rng)}, {"q", uniform01(rng)}}}});
        }
        for (int g = 0; g < 6; ++g) {
            goals.push_back(make_goal(oracle::id("g", g), "robot", "P", "d", {"o"}));
            std::vector<PointId> pt;
            for (int k = 0; k < n; ++k) pt.push_back(uniform01(rng) < 0.5 ? "p" : "q");
            pred[goals.back().id] = pt;
        }
        const OutcomePredictor predict = [&](const Goal& g) -> std::optional<std::vector<PointId>> { return pred.at(g.id); };
        const ArbitrationConfig cfg;
        const auto h = select_hierarchical(ps, cfg);
        const auto u = select_urgency(ps, r, cfg);
        const auto m = select_motivational(ms, goals, predict, cfg);
        const double k = std::pow(10.0, 6.0 * uniform01(rng) - 3.0);
        for (auto& p : ps) p.priority *= k;
        for (auto& c : ms.components) c.priority *= k;
        const bool same = h == select_hierarchical(ps, cfg) && u == select_urgency(ps, r, cfg) && m == select_motivational(ms, goals, predict, cfg);
        out.require(same, "selection changed under rescaling");
        invariant += same;
    }
    out.detail << "max row-sum error " << worst << "; tau=0.01 top frequency " << freq << "; rescaling invariant " << invariant << "/1000";
    return out;
}

// 5. Learned gridworld policies are shortest-path and near the value-iteration optimum.
Outcome gridworld_competence() {
    Outcome out;
    const Domain d = grid::make(5);
    const auto sensor = oracle::identity_sensor("robot", d);
    const int timeout = 25;
    PolicyBundle bundle;
    std::map<GoalId, Goal> goals;
    Distribution sampler;
    int matched = 0;
    double optimum = 0.0;
    for (int x = 0; x < 5; ++x)
        for (int y = 0; y < 5; ++y) {
            const Goal g = grid::cell_goal(x, y);
            const auto pi = learn_policy({"grid", g, 0.95, timeout, 0.5}, d, sensor, {50000, 0.5, 0.3, static_cast<std::uint64_t>(x * 5 + y)});
            bundle.actions.merge(pi);
            goals.emplace(g.id, g);
            sampler[g.id] = 1.0 / 25.0;
            const auto dist = oracle::bfs_distance(d, {grid::cell(x, y)});
            const auto vi = oracle::success_optimum(d, {grid::cell(x, y)}, timeout);
            double v = 0.0;
            for (const auto& s : d.initial_states()) v += vi.at(s) / static_cast<double>(d.initial_states().size());
            optimum += v / 25.0;
            for (const auto& s : d.states()) {
                StateId at = s;
                int steps = 0;
                while (at != grid::cell(x, y) && steps <= timeout) {
                    at = *oracle::raw_successors(d, at, pi.greedy("o_" + at, g.id)).begin();
                    ++steps;
                }
                const bool ok = at == grid::cell(x, y) && steps == dist.at(s);
                out.require(ok, "greedy path from " + s + " to " + g.id);
                matched += ok;
            }
        }
    Rng rng(55);
    const double mean = evaluate_extrinsic(bundle, sampler, goals, d, sensor, 5000, timeout, rng);
    out.require(mean >= 0.9 * optimum, "extrinsic " + std::to_string(mean) + " below 0.9 x " + std::to_string(optimum));
    out.detail << matched << "/625 (goal, start) greedy paths equal BFS; extrinsic " << mean << " vs optimum " << optimum;
    return out;
}

// 6. Information gain and competence gain against independent evaluations.
Outcome intrinsic_signals() {
    Outcome out;
    Rng rng(606);
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
        const auto models = oracle::ids("m", uniform_int(rng, 2, 6));
        const auto prior = oracle::random_row(rng, models, static_cast<int>(models.size()));
        Distribution post;
        const bool equal = i % 2 == 0;
        if (equal) {
            post = prior;
        } else {
            std::vector<std::string> support;
            for (const auto& [m, p] : prior) support.push_back(m);
            post = oracle::random_row(rng, support, static_cast<int>(support.size()));
            if (post == prior) continue;
        }
        const double ig = information_gain({prior, post});
        out.require(ig >= 0.0, "negative information gain");
        out.require(equal ? std::abs(ig) <= 1e-12 : ig > 1e-12, "zero iff equal violated");
        ++checked;
    }

    int sums = 0;
    for (int i = 0; i < 1000; ++i) {
        const int window = uniform_int(rng, 1, 6);
        const int lag = uniform_int(rng, 1, 6);
        CompetenceTracker tracker(window, lag);
        std::map<GoalId, std::vector<bool>> raw;
        const auto goals = oracle::ids("g", 5);
        for (int k = 0; k < 40; ++k) {
            const auto& g = goals[static_cast<std::size_t>(uniform_int(rng, 0, 4))];
            const bool ok = uniform01(rng) < 0.6;
            tracker.record(g, ok);
            raw[g].push_back(ok);
        }
        auto rate = [&](const std::vector<bool>& a, int offset) {
            const int end = static_cast<int>(a.size()) - offset;
            if (end <= 0) return 0.0;
            const int begin = std::max(0, end - window);
            int wins = 0;
            for (int j = begin; j < end; ++j) wins += a[static_cast<std::size_t>(j)];
            return static_cast<double>(wins) / (end - begin);
        };
        const auto dist = oracle::random_row(rng, goals, 5);
        double expected = 0.0;
        for (const auto& [g, p] : dist) expected += p * (rate(raw[g], 0) - rate(raw[g], lag));
        const bool ok = std::abs(competence_gain(tracker, dist) - expected) <= 1e-12;
        out.require(ok, "competence gain mismatch");
        sums += ok;
    }
    out.detail << checked << " prior/posterior pairs; " << sums << "/1000 competence sums equal";
    return out;
}

// 7. Exact AC2 against a forward recursion; AC3 minimal costs against breadth-first search.
Outcome causality() {
    Outcome out;
    Rng gen(707);
    double worst = 0.0;
    for (int i = 0; i < 100; ++i) {
        const auto m = oracle::random_stochastic_model(gen, 6);
        const auto spec = default_intervention(m, i % 2 ? "random" : "idle", !m.bindings.front().subgoals.empty());
        Rng rng(1);
        const auto got = ac2_counterfactual(m, spec, rng);
        const auto want = oracle::forward_ac2(m, spec);
        out.require(got.exact, "enumeration overflow");
        worst = std::max({worst, std::abs(got.p_do - want.p_do), std::abs(got.p_baseline - want.p_baseline)});
    }
    out.require(worst <= 1e-9, "AC2 error " + std::to_string(worst));

    int solved = 0;
    int exact = 0;
    Rng rng(708);
    while (solved < 500) {
        const int n = uniform_int(rng, 2, 12);
        const Domain dom = oracle::random_domain(rng, "d", n, uniform_int(rng, 1, 3), 0.0);
        const StateId target = oracle::id("s", uniform_int(rng, 0, n - 1));
        const auto dist = oracle::bfs_distance(dom, {target});
        if (!dist.count("s0")) continue;
        ++solved;
        AlignmentModel m;
        m.domains.emplace("d", dom);
        m.robot_sensor = oracle::identity_sensor("robot", dom);
        m.human_sensor = oracle::identity_sensor("human", dom);
        const EncodingSpace hs("H", "human", std::set<PointId>{"glad"});
        std::map<ObservationId, PointId> table;
        for (const auto& o : m.human_sensor->observations()) table[o] = "glad";
        DomainBinding b;
        b.domain = "d";
        b.human_encoder = ObservationEncoder("human", hs, "d", table);
        b.goal = make_goal("g", "robot", "P", "d", {"o_" + target});
        m.bindings.push_back(b);
        // random walk that may wander, then finishes along a shortest path
        History h(HistoryKind::StateAction);
        StateId s = "s0";
        h.append(EntryKind::State, s);
        const std::vector<ActionId> acts(dom.actions().begin(), dom.actions().end());
        for (int k = uniform_int(rng, 0, 6); k > 0 && s != target; --k) {
            const auto& a = acts[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(acts.size()) - 1))];
            const StateId next = *oracle::raw_successors(dom, s, a).begin();
            if (!dist.count(next)) continue;
            s = next;
            h.append(EntryKind::Action, a);
            h.append(EntryKind::State, s);
        }
        while (s != target) {
            for (const auto& a : acts) {
                const StateId next = *oracle::raw_successors(dom, s, a).begin();
                if (dist.count(next) && dist.at(next) == dist.at(s) - 1) {
                    s = next;
                    h.append(EntryKind::Action, a);
                    h.append(EntryKind::State, s);
                    break;
                }
            }
        }
        const auto r = ac3_minimality(m, h);
        const bool ok = r.minimal_cost == static_cast<double>(dist.at("s0")) && r.executed_cost == h.action_count() &&
                        r.holds == (h.action_count() == dist.at("s0"));
        out.require(ok, "AC3 mismatch");
        exact += ok;
    }
    out.detail << "AC2 max error " << worst << " on 100 models; AC3 " << exact << "/500 minimal costs equal BFS";
    return out;
}

// 8. Grounding round trips on random models.
Outcome grounding_round_trips() {
    Outcome out;
    Rng rng(808);
    int goals = 0;
    for (int i = 0; i < 1000; ++i) {
        const Domain d = oracle::random_domain(rng, "d", uniform_int(rng, 2, 10), 1, 0.0);
        const auto sensor = oracle::random_sensor(rng, "robot", d, uniform_int(rng, 2, 8), 0.3);
        const auto hpts = oracle::ids("h", uniform_int(rng, 2, 6));
        const auto rpts = oracle::ids("r", uniform_int(rng, 2, 6));
        const EncodingSpace hs("H", "human", std::set<PointId>(hpts.begin(), hpts.end()));
        const EncodingSpace rs("R", "robot", std::set<PointId>(rpts.begin(), rpts.end()));
        UtilityFunction hu{"H", {}};
        for (const auto& p : hpts) hu.table[p] = uniform01(rng) < 0.5 ? 0.0 : uniform01(rng) + 0.01;
        hu.table[hpts[0]] = 0.75;
        const auto human = purpose_from_utility("h", hs, hu, {PurposeKind::Human});
        std::map<PointId, PointId> map;
        for (const auto& r : rpts) map[r] = hpts[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(hpts.size()) - 1))];
        map[rpts[0]] = hpts[0];
        const AlignmentMap amap(hs, rs, map);
        const auto mission = derive_mission("m", human, amap, rs, {PurposeKind::Mission, 1.0, true, {"d"}});
        for (const auto& r : rpts) out.require(mission.utility(r) == human.utility(map.at(r)), "mission utility inheritance");
        std::map<ObservationId, PointId> table;
        for (const auto& o : sensor.observations()) table[o] = rpts[static_cast<std::size_t>(uniform_int(rng, 0, static_cast<int>(rpts.size()) - 1))];
        const ObservationEncoder enc("robot", rs, "d", table);
        for (const auto& p : mission.support) {
            const Goal g = ground_point(mission, p, enc);
            ++goals;
            for (const auto& o : g.points) {
                out.require(encode(enc, o) == p, "goal point does not re-encode to its source");
                out.require(g.utility_per_point.at(o) == mission.utility(encode(enc, o)), "utility per point");
                out.require(g.utility_per_point.at(o) == human.utility(amap.to_human(table.at(o))), "composed utility");
            }
            out.require(state_goal(g, sensor).states == oracle::fused_scan(d, sensor, enc, {p}), "state goal vs fused scan");
        }
        const Goal whole = ground_purpose(mission, enc);
        out.require(state_goal(whole, sensor).states == oracle::fused_scan(d, sensor, enc, mission.support), "whole-purpose state goal");
    }
    out.detail << goals << " point goals over 1000 models";
    return out;
}

}  // namespace

int main() {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
        {"1 theorem equivalence audit", theorem_equivalence},
        {"2 necessity probes", necessity_probes},
        {"3 home scenario narrative", home_narrative},
        {"4 arbitration numerics", arbitration_numerics},
        {"5 gridworld competence", gridworld_competence},
        {"6 intrinsic signals", intrinsic_signals},
        {"7 causality oracles", causality},
        {"8 grounding round trips", grounding_round_trips},
    };
    int failed = 0;
    for (const auto& [name, run] : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail << "exception: " << e.what();
        }
        std::cout << (o.pass ? "PASS" : "FAIL") << "  criterion " << name << " (" << seconds_since(t0) << " s): " << o.detail.str()
                  << std::endl;
        failed += o.pass ? 0 : 1;
    }
    std::cout << (failed == 0 ? "all acceptance criteria pass" : std::to_string(failed) + " acceptance criteria fail") << std::endl;
    return failed == 0 ? 0 : 1;
}
