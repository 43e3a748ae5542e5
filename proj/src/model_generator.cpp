#include "purpose/model_generator.hpp"

#include <algorithm>

namespace purpose {

namespace {

constexpr int kMaxStates = 12;
constexpr int kMaxObservations = 8;
constexpr int kMaxPoints = 6;

bool chance(Rng& rng, double p) { return uniform01(rng) < p; }

template <typename T>
const T& pick(const std::vector<T>& items, Rng& rng) {
    return items[uniform_int(rng, 0, static_cast<int>(items.size()) - 1)];
}

template <typename T>
const T& pick(const std::set<T>& items, Rng& rng) {
    auto it = items.begin();
    std::advance(it, uniform_int(rng, 0, static_cast<int>(items.size()) - 1));
    return *it;
}

template <typename T>
std::set<T> random_subset(const std::set<T>& items, Rng& rng, int min_size) {
    std::set<T> out;
    for (const auto& x : items)
        if (chance(rng, 0.5)) out.insert(x);
    while (static_cast<int>(out.size()) < min_size && out.size() < items.size()) out.insert(pick(items, rng));
    return out;
}

std::set<PointId> numbered(const std::string& prefix, int n) {
    std::set<PointId> out;
    for (int i = 0; i < n; ++i) out.insert(prefix + std::to_string(i));
    return out;
}

/// One domain's states, transitions and robot observation per state.
struct DomainDraft {
    DomainId id;
    std::set<StateId> states;
    std::set<StateId> initial;
    TransitionTable transition;
    std::map<StateId, ObservationId> robot_obs;
};

DomainDraft draft_domain(const DomainId& id, const std::string& prefix, int n_base, int n_twins,
                         const std::set<ActionId>& actions, Rng& rng) {
    DomainDraft d;
    d.id = id;
    std::vector<StateId> base;
    for (int k = 0; k < n_base; ++k) {
        base.push_back(prefix + "s" + std::to_string(k));
        d.robot_obs[base.back()] = "oc" + std::to_string(k);
    }
    std::vector<std::pair<StateId, int>> twins;  // twin id, index of its original
    for (int k = 0; k < n_twins; ++k) {
        const int original = uniform_int(rng, 0, n_base - 1);
        twins.emplace_back(prefix + "t" + std::to_string(k), original);
        d.robot_obs[twins.back().first] = "oc" + std::to_string(original);
    }
    for (const auto& s : base)
        for (const auto& a : actions) {
            const int target = uniform_int(rng, 0, n_base - 1);
            StateId next = base[target];
            for (const auto& [twin, original] : twins)
                if (original == target && chance(rng, 0.3)) next = twin;
            d.transition[{s, a}] = Row{next};
        }
    for (const auto& [twin, original] : twins)
        for (const auto& a : actions) d.transition[{twin, a}] = d.transition.at({base[original], a});
    d.states.insert(base.begin(), base.end());
    for (const auto& [twin, original] : twins) d.states.insert(twin);
    const int n_init = uniform_int(rng, 1, 3);
    while (static_cast<int>(d.initial.size()) < n_init) d.initial.insert(pick(d.states, rng));
    return d;
}

/// Observations of the domain's states under a deterministic sensor map.
std::set<ObservationId> observations_of(const DomainDraft& d) {
    std::set<ObservationId> out;
    for (const auto& [s, o] : d.robot_obs) out.insert(o);
    return out;
}

Purpose make_purpose(const PurposeId& id, const EncodingSpace& space, const std::map<PointId, double>& values,
                     const PurposeMeta& meta) {
    UtilityFunction u{space.id(), {}};
    for (const auto& p : space.points()) {
        auto it = values.find(p);
        u.table[p] = it == values.end() ? 0.0 : it->second;
    }
    return purpose_from_utility(id, space, u, meta);
}

/// Ground truth derived from the human pipeline, then sometimes corrupted.
void derive_truth(DomainBinding& b, const DomainDraft& d, const SensorModel& human, const Purpose& human_purpose,
                  const std::set<StateId>& outcome, Rng& rng) {
    const auto& enc = *b.human_encoder;
    for (const auto& [o, e] : enc.table())
        if (human_purpose.support.count(e)) b.true_observations.insert(o);
    if (chance(rng, 0.25)) {
        const auto percepts = observe_set(human, outcome);
        if (!percepts.empty() && chance(rng, 0.7))
            b.true_observations.erase(pick(percepts, rng));
        else
            b.true_observations.insert(pick(human.observations(), rng));
    }
    for (const auto& s : d.states)
        if (is_subset(human.row(s).support(), b.true_observations)) b.true_states.insert(s);
    if (chance(rng, 0.25)) {
        if (!outcome.empty() && chance(rng, 0.7))
            b.true_states.erase(pick(outcome, rng));
        else
            b.true_states.insert(pick(d.states, rng));
    }
}

struct Common {
    std::set<ActionId> actions;
    std::vector<DomainDraft> drafts;
    std::set<ObservationId> robot_observations;
    std::set<ObservationId> human_observations;
    std::map<StateId, Row> robot_map;
    std::map<StateId, Row> human_map;
    std::map<DomainId, std::set<StateId>> covered;
};

Common draft_world(int n_domains, bool twins, Rng& rng) {
    Common c;
    const int n_actions = uniform_int(rng, 2, 3);
    for (int a = 0; a < n_actions; ++a) c.actions.insert("a" + std::to_string(a));
    const int per_domain = kMaxStates / n_domains;
    for (int k = 0; k < n_domains; ++k) {
        const int n_base = uniform_int(rng, 3, std::min(kMaxObservations, per_domain));
        const int n_twins = twins ? uniform_int(rng, 0, std::min(4, per_domain - n_base)) : 0;
        const DomainId id = n_domains == 1 ? "d" : "d" + std::to_string(k);
        const std::string prefix = n_domains == 1 ? "" : id + ".";
        c.drafts.push_back(draft_domain(id, prefix, n_base, n_twins, c.actions, rng));
    }
    const int n_human = uniform_int(rng, 2, kMaxObservations - 2);
    c.human_observations = numbered("oh", n_human);
    for (const auto& d : c.drafts) {
        c.covered[d.id] = d.states;
        for (const auto& [s, o] : d.robot_obs) {
            c.robot_map[s] = Row{o};
            c.robot_observations.insert(o);
            c.human_map[s] = Row{pick(c.human_observations, rng)};
        }
    }
    return c;
}

ObservationEncoder random_encoder(const AgentId& owner, const EncodingSpace& space, const DomainId& d,
                                  const std::set<ObservationId>& observations, Rng& rng) {
    std::map<ObservationId, PointId> table;
    for (const auto& o : observations) table[o] = pick(space.points(), rng);
    return ObservationEncoder(owner, space, d, table);
}

ObservationId choose_goal_observation(const ObservationEncoder& robot_enc, const PointId& p,
                                      const std::set<ObservationId>& domain_obs, Rng& rng) {
    const auto decoded = decode(robot_enc, p);
    if (!decoded.empty() && chance(rng, 0.85)) return pick(decoded, rng);
    return pick(domain_obs, rng);
}

void install_policy(AlignmentModel& m, const Goal& g, const Domain& dom) { m.policy.merge(plan_policy(g, dom, *m.robot_sensor)); }

AlignmentModel generate_single(CaseKind kind, Rng& rng) {
    Common c = draft_world(1, true, rng);
    DomainDraft& d = c.drafts.front();
    AlignmentModel m;
    m.domains.emplace(d.id, Domain(d.id, d.states, c.actions, d.transition, d.initial));
    const Domain& dom = m.domains.at(d.id);
    m.robot_sensor.emplace("robot", c.robot_observations, c.covered, c.robot_map);
    m.human_sensor.emplace("human", c.human_observations, c.covered, c.human_map);
    m.timeout = uniform_int(rng, 1, static_cast<int>(observations_of(d).size()));
    const auto domain_obs = observations_of(d);

    // Robot side.
    const EncodingSpace robot_space("Ec", "robot", numbered("ec", uniform_int(rng, 2, kMaxPoints)));
    const bool flag = !chance(rng, 0.05);
    DomainBinding b;
    b.domain = d.id;
    std::set<PointId> robot_support;
    if (kind == CaseKind::Intrinsic) {
        // Each support point grounds to at most one observation.
        robot_support = random_subset(robot_space.points(), rng, 1);
        if (robot_support.size() == robot_space.points().size()) robot_support.erase(pick(robot_support, rng));
        const auto outside = set_difference(robot_space.points(), robot_support);
        std::vector<ObservationId> pool(domain_obs.begin(), domain_obs.end());
        std::shuffle(pool.begin(), pool.end(), rng);
        std::map<ObservationId, PointId> table;
        std::size_t next = 0;
        for (const auto& p : robot_support)
            if (next < pool.size() && chance(rng, 0.8)) table[pool[next++]] = p;
        for (; next < pool.size(); ++next) table[pool[next]] = pick(outside, rng);
        b.robot_encoder.emplace("robot", robot_space, d.id, table);
    } else {
        robot_support = random_subset(robot_space.points(), rng, 1);
        b.robot_encoder = random_encoder("robot", robot_space, d.id, domain_obs, rng);
    }
    std::map<PointId, double> robot_values;
    for (const auto& p : robot_support) robot_values[p] = chance(rng, 0.5) ? 1.0 : 0.5;
    PurposeMeta robot_meta{PurposeKind::Mission, 1.0, flag, flag ? std::set<DomainId>{d.id} : std::set<DomainId>{}, false};
    m.robot_purpose = make_purpose("mission", robot_space, robot_values, robot_meta);
    m.robot_domains = robot_meta.intended_domains;

    std::vector<PointId> groundable;
    for (const auto& p : robot_support)
        if (!decode(*b.robot_encoder, p).empty()) groundable.push_back(p);
    m.intention_point = !groundable.empty() && chance(rng, 0.9) ? pick(groundable, rng) : pick(robot_support, rng);

    b.goal = make_goal(goal_id(m.robot_purpose.id, d.id, m.intention_point), "robot", m.robot_purpose.id, d.id,
                       {choose_goal_observation(*b.robot_encoder, m.intention_point, domain_obs, rng)});
    b.goal.source_point = m.intention_point;

    if (kind == CaseKind::Instrumental || kind == CaseKind::InstrumentalProscriptive) {
        const int n_sub = uniform_int(rng, 1, 3);
        std::set<StateId> from = dom.initial_states();
        for (int j = 0; j < n_sub; ++j) {
            StateId target = pick(d.states, rng);
            if (chance(rng, 0.8)) target = pick(reachable(dom, from, m.timeout), rng);
            const ObservationId o = d.robot_obs.at(target);
            b.subgoals.push_back(make_goal("sub" + std::to_string(j + 1) + "@" + d.id, "robot", "instrumental", d.id, {o}));
            from = preimage(*m.robot_sensor, o, std::set<DomainId>{d.id});
        }
    }

    // Human side.
    const EncodingSpace human_space("Eh", "human", numbered("eh", uniform_int(rng, 2, kMaxPoints)));
    b.human_encoder = random_encoder("human", human_space, d.id, c.human_observations, rng);
    std::set<PointId> truth;
    if (kind == CaseKind::Intrinsic) {
        for (const auto& p : robot_support) {
            const auto g = decode(*b.robot_encoder, p);
            if (g.empty() || !chance(rng, 0.6)) continue;
            std::set<PointId> image;
            for (const auto& o : observe_set(*m.human_sensor, preimage(*m.robot_sensor, *g.begin())))
                image.insert(encode(*b.human_encoder, o));
            if (image.size() == 1) truth.insert(*image.begin());
        }
        if (truth.empty() || chance(rng, 0.2)) truth.insert(pick(human_space.points(), rng));
    } else {
        const auto outcome = preimage(*m.robot_sensor, *b.goal.points.begin(), std::set<DomainId>{d.id});
        if (chance(rng, 0.65)) {
            for (const auto& o : observe_set(*m.human_sensor, outcome)) truth.insert(encode(*b.human_encoder, o));
            for (const auto& p : human_space.points())
                if (chance(rng, 0.2)) truth.insert(p);
        }
        if (truth.empty()) truth = random_subset(human_space.points(), rng, 1);
    }
    const bool graded = kind == CaseKind::VariableUtilityThreshold || kind == CaseKind::VariableUtilityMax;
    std::map<PointId, double> human_values;
    for (const auto& p : truth) human_values[p] = graded ? 0.25 * uniform_int(rng, 1, 4) : 1.0;
    if (graded && chance(rng, 0.5))
        for (auto& [p, u] : human_values) u = 1.0;
    PurposeMeta human_meta{PurposeKind::Human, 1.0, true, {d.id}, true};
    m.human_purpose = make_purpose("purpose", human_space, human_values, human_meta);

    std::set<StateId> outcome = preimage(*m.robot_sensor, *b.goal.points.begin(), std::set<DomainId>{d.id});
    derive_truth(b, d, *m.human_sensor, m.human_purpose, outcome, rng);

    if (kind == CaseKind::InstrumentalProscriptive) {
        const EncodingSpace forbidden_space("Ex", "human", std::set<PointId>{"x0", "x1", "x2"});
        m.human_forbidden = make_purpose("avoid", forbidden_space, {{"x0", -1.0}}, PurposeMeta{PurposeKind::Human, 50.0, true, {d.id}, true});
        std::set<ObservationId> touched;
        for (const auto* g : {&b.goal}) {
            auto p = observe_set(*m.human_sensor, preimage(*m.robot_sensor, *g->points.begin(), std::set<DomainId>{d.id}));
            touched.insert(p.begin(), p.end());
        }
        for (const auto& g : b.subgoals) {
            auto p = observe_set(*m.human_sensor, preimage(*m.robot_sensor, *g.points.begin(), std::set<DomainId>{d.id}));
            touched.insert(p.begin(), p.end());
        }
        const bool clean = chance(rng, 0.6);
        std::map<ObservationId, PointId> table;
        for (const auto& o : c.human_observations)
            table[o] = clean && touched.count(o) ? (chance(rng, 0.5) ? "x1" : "x2") : pick(forbidden_space.points(), rng);
        b.human_forbidden_encoder.emplace("human", forbidden_space, d.id, table);
        for (const auto& [o, e] : table)
            if (e == "x0") b.forbidden_observations.insert(o);
        if (chance(rng, 0.2)) b.forbidden_observations.insert(pick(c.human_observations, rng));
        for (const auto& s : d.states)
            if (!set_intersection(m.human_sensor->row(s).support(), b.forbidden_observations).empty()) b.forbidden_states.insert(s);
        if (chance(rng, 0.2)) b.forbidden_states.insert(pick(d.states, rng));
    }

    // Policies.
    install_policy(m, b.goal, dom);
    for (const auto& g : b.subgoals) install_policy(m, g, dom);
    if (kind == CaseKind::Intrinsic)
        for (const auto& p : robot_support)
            if (!decode(*b.robot_encoder, p).empty()) install_policy(m, ground_point(m.robot_purpose, p, *b.robot_encoder), dom);
    m.idle_action = *c.actions.begin();
    m.bindings.push_back(std::move(b));
    return m;
}

AlignmentModel generate_multi(Rng& rng) {
    const int n_domains = uniform_int(rng, 2, 3);
    Common c = draft_world(n_domains, false, rng);
    AlignmentModel m;
    for (const auto& d : c.drafts) m.domains.emplace(d.id, Domain(d.id, d.states, c.actions, d.transition, d.initial));
    m.robot_sensor.emplace("robot", c.robot_observations, c.covered, c.robot_map);
    m.human_sensor.emplace("human", c.human_observations, c.covered, c.human_map);
    int max_obs = 0;
    for (const auto& d : c.drafts) max_obs = std::max(max_obs, static_cast<int>(observations_of(d).size()));
    m.timeout = uniform_int(rng, 1, max_obs);

    const EncodingSpace robot_space("Ec", "robot", numbered("ec", uniform_int(rng, 2, kMaxPoints)));
    const EncodingSpace human_space("Eh", "human", numbered("eh", uniform_int(rng, 2, kMaxPoints)));
    std::set<DomainId> all;
    for (const auto& d : c.drafts) all.insert(d.id);
    std::set<DomainId> robot_domains = all;
    if (chance(rng, 0.15)) robot_domains.erase(pick(all, rng));
    std::map<PointId, double> robot_values;
    for (const auto& p : random_subset(robot_space.points(), rng, 1)) robot_values[p] = 1.0;
    m.robot_purpose = make_purpose("mission", robot_space, robot_values, PurposeMeta{PurposeKind::Mission, 1.0, true, robot_domains, false});
    m.robot_domains = robot_domains;
    m.intention_point = pick(m.robot_purpose.support, rng);

    std::set<PointId> truth;
    for (const auto& d : c.drafts) {
        DomainBinding b;
        b.domain = d.id;
        b.robot_encoder = random_encoder("robot", robot_space, d.id, observations_of(d), rng);
        b.human_encoder = random_encoder("human", human_space, d.id, c.human_observations, rng);
        b.goal = make_goal(goal_id(m.robot_purpose.id, d.id, m.intention_point), "robot", m.robot_purpose.id, d.id,
                           {choose_goal_observation(*b.robot_encoder, m.intention_point, observations_of(d), rng)});
        b.goal.source_point = m.intention_point;
        if (chance(rng, 0.7))
            for (const auto& o : observe_set(*m.human_sensor, preimage(*m.robot_sensor, *b.goal.points.begin(), std::set<DomainId>{d.id})))
                truth.insert(encode(*b.human_encoder, o));
        m.bindings.push_back(std::move(b));
    }
    if (truth.empty()) truth = random_subset(human_space.points(), rng, 1);
    std::map<PointId, double> human_values;
    for (const auto& p : truth) human_values[p] = 1.0;
    m.human_purpose = make_purpose("purpose", human_space, human_values, PurposeMeta{PurposeKind::Human, 1.0, true, all, true});
    for (std::size_t k = 0; k < c.drafts.size(); ++k) {
        auto& b = m.bindings[k];
        const auto outcome = preimage(*m.robot_sensor, *b.goal.points.begin(), std::set<DomainId>{b.domain});
        derive_truth(b, c.drafts[k], *m.human_sensor, m.human_purpose, outcome, rng);
        install_policy(m, b.goal, m.domains.at(b.domain));
    }
    m.idle_action = *c.actions.begin();
    return m;
}

std::set<StateId> states_of_goal(const AlignmentModel& m, const DomainBinding& b) {
    std::set<StateId> out;
    for (const auto& o : b.goal.points) {
        auto s = preimage(*m.robot_sensor, o, std::set<DomainId>{b.domain});
        out.insert(s.begin(), s.end());
    }
    return out;
}

SensorModel with_row(const SensorModel& s, const StateId& state, const ObservationId& o, const std::set<ObservationId>& observations) {
    auto map = s.map();
    map[state] = Row{o};
    return SensorModel(s.owner(), observations, s.covered(), map);
}

}  // namespace

AlignmentModel generate_random_model(CaseKind kind, Rng& rng) {
    if (kind == CaseKind::MultiDomainAll || kind == CaseKind::MultiDomainAny) return generate_multi(rng);
    return generate_single(kind, rng);
}

AlignmentModel generate_aligned_extrinsic(Rng& rng) {
    const AlignmentCase acase{CaseKind::Extrinsic, 0.0};
    while (true) {
        AlignmentModel m = generate_random_model(CaseKind::Extrinsic, rng);
        if (!check_conditions(m, acase).aligned) continue;
        if (!check_definition(m, acase, rng).aligned) continue;
        return m;
    }
}

std::optional<AlignmentModel> mutate_condition(const AlignmentModel& aligned, int condition, Rng& rng) {
    AlignmentModel m = aligned;
    DomainBinding& b = m.bindings.front();
    const Domain& dom = m.domains.at(b.domain);
    const auto outcome = states_of_goal(m, b);
    switch (condition) {
        case 1: {
            std::vector<ObservationId> off;
            for (const auto& o : observe_set(*m.robot_sensor, dom.states()))
                if (encode(*b.robot_encoder, o) != m.intention_point) off.push_back(o);
            if (off.empty()) return std::nullopt;
            b.goal.points = {pick(off, rng)};
            m.policy.merge(plan_policy(b.goal, dom, *m.robot_sensor));
            return m;
        }
        case 2: {
            if (outcome.empty()) return std::nullopt;
            b.true_states.erase(pick(outcome, rng));
            return m;
        }
        case 3: {
            if (outcome.empty()) return std::nullopt;
            const StateId s = pick(outcome, rng);
            auto observations = m.human_sensor->observations();
            std::vector<ObservationId> off;
            for (const auto& o : observations)
                if (!b.true_observations.count(o)) off.push_back(o);
            ObservationId target;
            if (off.empty()) {
                target = "oh_misread";
                observations.insert(target);
                auto table = b.human_encoder->table();
                table[target] = *m.human_purpose.support.begin();
                const EncodingSpace space(b.human_encoder->space_id(), "human", b.human_encoder->space_points());
                b.human_encoder.emplace("human", space, b.domain, table);
            } else {
                target = pick(off, rng);
            }
            m.human_sensor = with_row(*m.human_sensor, s, target, observations);
            return m;
        }
        case 4: {
            const auto percepts = observe_set(*m.human_sensor, outcome);
            if (percepts.empty()) return std::nullopt;
            const ObservationId o = pick(percepts, rng);
            auto points = b.human_encoder->space_points();
            const auto outside = set_difference(points, m.human_purpose.support);
            PointId target;
            if (outside.empty()) {
                target = "eh_outside";
                points.insert(target);
                const EncodingSpace space(m.human_purpose.space_id, "human", points);
                auto u = m.human_purpose.utility;
                u.table[target] = 0.0;
                PurposeMeta meta{m.human_purpose.kind, m.human_purpose.priority, m.human_purpose.intention_flag,
                                 m.human_purpose.intended_domains, m.human_purpose.ground_truth};
                m.human_purpose = purpose_from_utility(m.human_purpose.id, space, u, meta);
            } else {
                target = pick(outside, rng);
            }
            auto table = b.human_encoder->table();
            table[o] = target;
            const EncodingSpace space(m.human_purpose.space_id, "human", points);
            b.human_encoder.emplace("human", space, b.domain, table);
            return m;
        }
        default: throw Error(ErrorKind::ValidationError, "condition must be 1..4");
    }
}

}  // namespace purpose
