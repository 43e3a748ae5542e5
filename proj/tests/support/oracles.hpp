// Random model builders and brute-force oracles shared by the unit and acceptance tests.
// Oracles read the raw tables directly and never call the library routine under test.
#ifndef PURPOSE_TESTS_ORACLES_HPP
#define PURPOSE_TESTS_ORACLES_HPP

#include <cmath>
#include <deque>
#include <functional>
#include <tuple>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "purpose/alignment.hpp"
#include "purpose/arbitration.hpp"
#include "purpose/causality.hpp"

namespace oracle {

using namespace purpose;

inline std::string id(const char* prefix, int i) { return prefix + std::to_string(i); }

/// Random probability table over `outcomes` with 1..max_support nonzero entries.
inline Distribution random_row(Rng& rng, const std::vector<std::string>& outcomes, int max_support) {
    const int k = uniform_int(rng, 1, std::min<int>(max_support, static_cast<int>(outcomes.size())));
    std::vector<std::string> pool = outcomes;
    Distribution row;
    double total = 0.0;
    std::vector<std::pair<std::string, double>> picks;
    for (int i = 0; i < k; ++i) {
        const int j = uniform_int(rng, 0, static_cast<int>(pool.size()) - 1);
        const double w = 0.1 + uniform01(rng);
        picks.emplace_back(pool[static_cast<std::size_t>(j)], w);
        total += w;
        pool.erase(pool.begin() + j);
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < picks.size(); ++i) {
        const double p = i + 1 == picks.size() ? 1.0 - acc : picks[i].second / total;
        row[picks[i].first] = p;
        acc += p;
    }
    return row;
}

inline std::vector<std::string> ids(const char* prefix, int n) {
    std::vector<std::string> out;
    for (int i = 0; i < n; ++i) out.push_back(id(prefix, i));
    return out;
}

/// Random total domain; each row is stochastic with probability `stochastic`.
inline Domain random_domain(Rng& rng, const DomainId& name, int n_states, int n_actions, double stochastic,
                            int n_initial = 1) {
    const auto states = ids("s", n_states);
    const auto actions = ids("a", n_actions);
    TransitionTable table;
    for (const auto& s : states)
        for (const auto& a : actions) {
            if (uniform01(rng) < stochastic)
                table[{s, a}] = Row{random_row(rng, states, 3)};
            else
                table[{s, a}] = Row{states[static_cast<std::size_t>(uniform_int(rng, 0, n_states - 1))]};
        }
    std::set<StateId> initial;
    while (static_cast<int>(initial.size()) < std::min(n_initial, n_states))
        initial.insert(states[static_cast<std::size_t>(uniform_int(rng, 0, n_states - 1))]);
    return Domain(name, {states.begin(), states.end()}, {actions.begin(), actions.end()}, table, initial);
}

inline SensorModel random_sensor(Rng& rng, const AgentId& owner, const Domain& dom, int n_obs, double stochastic,
                                 const char* prefix = "o") {
    const auto obs = ids(prefix, n_obs);
    std::map<StateId, Row> map;
    for (const auto& s : dom.states()) {
        if (uniform01(rng) < stochastic)
            map[s] = Row{random_row(rng, obs, 2)};
        else
            map[s] = Row{obs[static_cast<std::size_t>(uniform_int(rng, 0, n_obs - 1))]};
    }
    return SensorModel(owner, {obs.begin(), obs.end()}, {{dom.id(), dom.states()}}, map);
}

inline SensorModel identity_sensor(const AgentId& owner, const Domain& dom) {
    std::map<StateId, Row> map;
    for (const auto& s : dom.states()) map[s] = Row{"o_" + s};
    std::set<ObservationId> obs;
    for (const auto& s : dom.states()) obs.insert("o_" + s);
    return SensorModel(owner, obs, {{dom.id(), dom.states()}}, map);
}

/// Nonzero successors read straight from the table.
inline std::set<StateId> raw_successors(const Domain& dom, const StateId& s, const ActionId& a) {
    const Row& row = dom.transition().at({s, a});
    if (row.deterministic()) return {std::get<std::string>(row.value)};
    std::set<StateId> out;
    for (const auto& [n, p] : std::get<Distribution>(row.value))
        if (p > 0.0) out.insert(n);
    return out;
}

inline std::set<ObservationId> raw_observations(const SensorModel& sensor, const StateId& s) {
    const Row& row = sensor.map().at(s);
    if (row.deterministic()) return {std::get<std::string>(row.value)};
    std::set<ObservationId> out;
    for (const auto& [o, p] : std::get<Distribution>(row.value))
        if (p > 0.0) out.insert(o);
    return out;
}

/// Breadth-first closure of one-step successors.
inline std::set<StateId> closure(const Domain& dom, const std::set<StateId>& from, int horizon) {
    std::set<StateId> seen = from;
    std::vector<StateId> frontier(from.begin(), from.end());
    for (int h = 0; h < horizon && !frontier.empty(); ++h) {
        std::vector<StateId> next;
        for (const auto& s : frontier)
            for (const auto& a : dom.actions())
                for (const auto& n : raw_successors(dom, s, a))
                    if (seen.insert(n).second) next.push_back(n);
        frontier = std::move(next);
    }
    return seen;
}

/// Deterministic domains: fewest actions from each state to any target (absent = unreachable).
inline std::map<StateId, int> bfs_distance(const Domain& dom, const std::set<StateId>& targets) {
    std::map<StateId, std::set<StateId>> preds;
    for (const auto& s : dom.states())
        for (const auto& a : dom.actions())
            for (const auto& n : raw_successors(dom, s, a)) preds[n].insert(s);
    std::map<StateId, int> dist;
    std::deque<StateId> queue;
    for (const auto& t : targets) {
        dist[t] = 0;
        queue.push_back(t);
    }
    while (!queue.empty()) {
        const auto s = queue.front();
        queue.pop_front();
        for (const auto& p : preds[s])
            if (!dist.count(p)) {
                dist[p] = dist[s] + 1;
                queue.push_back(p);
            }
    }
    return dist;
}

/// Optimal probability of entering `targets` within `timeout` steps (finite-horizon value iteration).
inline std::map<StateId, double> success_optimum(const Domain& dom, const std::set<StateId>& targets, int timeout) {
    std::map<StateId, double> v;
    for (const auto& s : dom.states()) v[s] = targets.count(s) ? 1.0 : 0.0;
    for (int k = 0; k < timeout; ++k) {
        std::map<StateId, double> next;
        for (const auto& s : dom.states()) {
            if (targets.count(s)) {
                next[s] = 1.0;
                continue;
            }
            double best = 0.0;
            for (const auto& a : dom.actions()) {
                double q = 0.0;
                for (const auto& [n, p] : dom.row(s, a).distribution()) q += p * v[n];
                best = std::max(best, q);
            }
            next[s] = best;
        }
        v = std::move(next);
    }
    return v;
}

/// States whose some possible observation encodes to `point` (one fused scan of sensor and encoder tables).
inline std::set<StateId> fused_scan(const Domain& dom, const SensorModel& sensor, const ObservationEncoder& enc,
                                    const std::set<PointId>& points) {
    std::set<StateId> out;
    for (const auto& s : dom.states())
        for (const auto& o : raw_observations(sensor, s)) {
            auto it = enc.table().find(o);
            if (it != enc.table().end() && points.count(it->second)) out.insert(s);
        }
    return out;
}

struct Ac2Oracle {
    double p_do = 0.0;
    double p_baseline = 0.0;
};

/// Forward probability recursion over (state, link, steps in link) for both regimes.
inline Ac2Oracle forward_ac2(const AlignmentModel& m, const InterventionSpec& spec) {
    const DomainBinding& b = m.bindings.front();
    const Domain& dom = m.domains.at(b.domain);
    auto y = [&](const StateId& s) {
        double p = 0.0;
        for (const auto& [o, w] : m.human_sensor->row(s).distribution())
            if (m.human_purpose.support.count(b.human_encoder->table().at(o))) p += w;
        return p;
    };
    std::vector<const Goal*> links;
    for (const auto& g : spec.chain) links.push_back(&g);
    links.push_back(&spec.do_goal);
    const double share = 1.0 / static_cast<double>(dom.initial_states().size());

    Ac2Oracle out;
    using Key = std::tuple<StateId, std::size_t, int>;
    std::map<Key, double> live;
    for (const auto& s : dom.initial_states()) live[{s, 0, 0}] += share;
    for (int t = 0; !live.empty(); ++t) {
        std::map<Key, double> next;
        for (const auto& [key, w] : live) {
            const auto& [s, link, steps] = key;
            for (const auto& [o, po] : m.robot_sensor->row(s).distribution()) {
                if (po <= 0.0) continue;
                std::size_t k = link;
                int in_link = steps;
                while (k < links.size() && links[k]->points.count(o)) {
                    ++k;
                    in_link = 0;
                }
                if (k == links.size() || in_link >= m.timeout || t >= spec.horizon) {
                    out.p_do += w * po * y(s);
                    continue;
                }
                for (const auto& [a, pa] : m.policy.row(o, links[k]->id))
                    for (const auto& [n, pn] : dom.row(s, a).distribution())
                        if (pa > 0.0 && pn > 0.0) next[{n, k, in_link + 1}] += w * po * pa * pn;
            }
        }
        live = std::move(next);
    }

    std::map<StateId, double> mass;
    for (const auto& s : dom.initial_states()) mass[s] += share;
    for (int t = 0; t < spec.horizon; ++t) {
        std::map<StateId, double> next;
        for (const auto& [s, w] : mass)
            for (const auto& [o, po] : m.robot_sensor->row(s).distribution())
                for (const auto& [a, pa] : spec.baseline.row(o, kBaselineKey))
                    for (const auto& [n, pn] : dom.row(s, a).distribution()) next[n] += w * po * pa * pn;
        mass = std::move(next);
    }
    for (const auto& [s, w] : mass) out.p_baseline += w * y(s);
    return out;
}

/// Random stochastic alignment model on <= max_states states for counterfactual checks.
inline AlignmentModel random_stochastic_model(Rng& rng, int max_states) {
    const int n = uniform_int(rng, 2, max_states);
    AlignmentModel m;
    const Domain dom = random_domain(rng, "d", n, uniform_int(rng, 1, 3), 0.6, uniform_int(rng, 1, 2));
    m.domains.emplace("d", dom);
    m.robot_sensor = random_sensor(rng, "robot", dom, uniform_int(rng, 2, 4), 0.3, "rc");
    m.human_sensor = random_sensor(rng, "human", dom, uniform_int(rng, 2, 3), 0.3, "hc");
    const EncodingSpace hspace("eh", "human", std::set<PointId>{"good", "bad"});
    const EncodingSpace rspace("er", "robot", std::set<PointId>{"p", "q"});
    std::map<ObservationId, PointId> htable;
    for (const auto& o : m.human_sensor->observations()) htable[o] = uniform01(rng) < 0.5 ? "good" : "bad";
    htable[*m.human_sensor->observations().begin()] = "good";
    std::map<ObservationId, PointId> rtable;
    for (const auto& o : m.robot_sensor->observations()) rtable[o] = uniform01(rng) < 0.4 ? "p" : "q";
    rtable[*m.robot_sensor->observations().begin()] = "p";
    m.human_purpose = purpose_from_utility("ph", hspace, {"eh", {{"good", 1.0}, {"bad", 0.0}}}, {PurposeKind::Human, 1.0, false, {}, true});
    PurposeMeta meta{PurposeKind::Need, 1.0, true, {"d"}, false};
    m.robot_purpose = purpose_from_utility("pc", rspace, {"er", {{"p", 1.0}, {"q", 0.0}}}, meta);
    m.intention_point = "p";
    m.robot_domains = {"d"};
    m.timeout = uniform_int(rng, 1, 3);
    m.idle_action = *dom.actions().begin();
    DomainBinding b;
    b.domain = "d";
    b.robot_encoder = ObservationEncoder("robot", rspace, "d", rtable);
    b.human_encoder = ObservationEncoder("human", hspace, "d", htable);
    b.goal = ground_point(m.robot_purpose, "p", *b.robot_encoder);
    const int n_sub = uniform_int(rng, 0, 1);
    std::vector<Goal> links;
    for (int j = 0; j < n_sub; ++j) {
        std::set<ObservationId> pts{*std::next(m.robot_sensor->observations().begin(),
                                               uniform_int(rng, 0, static_cast<int>(m.robot_sensor->observations().size()) - 1))};
        b.subgoals.push_back(make_goal("sub" + std::to_string(j), "robot", "pc", "d", pts));
    }
    std::vector<ActionId> acts(dom.actions().begin(), dom.actions().end());
    auto install = [&](const Goal& g) {
        for (const auto& o : m.robot_sensor->observations()) m.policy.set(o, g.id, random_row(rng, acts, 2));
    };
    install(b.goal);
    for (const auto& g : b.subgoals) install(g);
    m.bindings.push_back(b);
    return m;
}

}  // namespace oracle

#endif
