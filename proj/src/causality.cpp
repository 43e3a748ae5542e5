#include "purpose/causality.hpp"

#include <cmath>

namespace purpose {

ActionPolicy idle_policy(const Domain& domain, const SensorModel& sensor, const ActionId& idle) {
    if (!domain.has_action(idle)) throw Error(ErrorKind::UnknownAction, idle + " as idle action");
    ActionPolicy p;
    for (const auto& o : observe_set(sensor, domain.states())) p.set(o, kBaselineKey, {{idle, 1.0}});
    return p;
}

ActionPolicy uniform_policy(const Domain& domain, const SensorModel& sensor) {
    Distribution row;
    for (const auto& a : domain.actions()) row[a] = 1.0 / static_cast<double>(domain.actions().size());
    ActionPolicy p;
    for (const auto& o : observe_set(sensor, domain.states())) p.set(o, kBaselineKey, row);
    return p;
}

namespace {

const DomainBinding& first_binding(const AlignmentModel& m) {
    if (m.bindings.empty()) throw Error(ErrorKind::IncompleteModel, "model has no domain binding");
    return m.bindings.front();
}

void require_complete(const AlignmentModel& m, const DomainBinding& b) {
    if (!m.robot_sensor || !m.human_sensor) throw Error(ErrorKind::IncompleteModel, "model lacks a sensor");
    if (!b.human_encoder) throw Error(ErrorKind::IncompleteModel, "binding for " + b.domain + " has no human encoder");
    if (!m.domains.count(b.domain)) throw Error(ErrorKind::IncompleteModel, "model has no domain " + b.domain);
}

/// P(human encodes its percept of s into P*).
double y_probability(const AlignmentModel& m, const DomainBinding& b, const StateId& s) {
    double p = 0.0;
    for (const auto& [o, w] : m.human_sensor->row(s).distribution())
        if (w > 0.0 && m.human_purpose.support.count(encode(*b.human_encoder, o))) p += w;
    return p;
}

struct Regime {
    const AlignmentModel& m;
    const DomainBinding& b;
    const Domain& dom;
    std::vector<const Goal*> links;  ///< empty: baseline regime
    const ActionPolicy& policy;
    int horizon;
    int timeout;
};

struct Tally {
    double y = 0.0;
    double any = 0.0;
    double mass = 0.0;
    long long nodes = 0;
    bool overflow = false;
};

bool sure_y(const Regime& r, const StateId& s) { return y_probability(r.m, r.b, s) >= 1.0; }

/// Depth-first enumeration of every nonzero branch.
void enumerate(const Regime& r, const StateId& s, std::size_t link, int in_link, int total, double w, bool seen, Tally& t,
               long long limit) {
    if (t.overflow) return;
    if (++t.nodes > limit) {
        t.overflow = true;
        return;
    }
    seen = seen || sure_y(r, s);
    auto finish = [&] {
        t.y += w * y_probability(r.m, r.b, s);
        t.any += seen ? w : 0.0;
        t.mass += w;
    };
    if (r.links.empty()) {
        if (total >= r.horizon) return finish();
        for (const auto& [o, po] : r.m.robot_sensor->row(s).distribution())
            for (const auto& [a, pa] : r.policy.row(o, kBaselineKey))
                for (const auto& [n, pn] : r.dom.row(s, a).distribution())
                    if (po > 0.0 && pa > 0.0 && pn > 0.0) enumerate(r, n, link, 0, total + 1, w * po * pa * pn, seen, t, limit);
        return;
    }
    for (const auto& [o, po] : r.m.robot_sensor->row(s).distribution()) {
        if (po <= 0.0) continue;
        std::size_t k = link;
        int steps = in_link;
        // Achieving a link hands over to the next one at the same instant.
        while (k < r.links.size() && r.links[k]->points.count(o)) {
            ++k;
            steps = 0;
        }
        if (k == r.links.size() || steps >= r.timeout || total >= r.horizon) {
            t.y += w * po * y_probability(r.m, r.b, s);
            t.any += seen ? w * po : 0.0;
            t.mass += w * po;
            continue;
        }
        for (const auto& [a, pa] : r.policy.row(o, r.links[k]->id))
            for (const auto& [n, pn] : r.dom.row(s, a).distribution())
                if (pa > 0.0 && pn > 0.0) enumerate(r, n, k, steps + 1, total + 1, w * po * pa * pn, seen, t, limit);
    }
}

/// One sampled trajectory: (Y at end, Y surely held at some step).
std::pair<bool, bool> sample_run(const Regime& r, const StateId& start, Rng& rng) {
    StateId s = start;
    bool seen = false;
    std::size_t k = 0;
    int in_link = 0;
    for (int total = 0;; ++total) {
        seen = seen || sure_y(r, s);
        const ObservationId o = observe(*r.m.robot_sensor, s, rng);
        ActionId a;
        if (r.links.empty()) {
            if (total >= r.horizon) break;
            a = r.policy.draw(o, kBaselineKey, rng);
        } else {
            while (k < r.links.size() && r.links[k]->points.count(o)) {
                ++k;
                in_link = 0;
            }
            if (k == r.links.size() || in_link >= r.timeout || total >= r.horizon) break;
            a = r.policy.draw(o, r.links[k]->id, rng);
            ++in_link;
        }
        s = step(r.dom, s, a, rng);
    }
    const bool y = uniform01(rng) < y_probability(r.m, r.b, s);
    return {y, seen};
}

bool model_deterministic(const AlignmentModel& m, const Domain& dom, const ActionPolicy& baseline) {
    return dom.deterministic() && m.robot_sensor->deterministic() && m.human_sensor->deterministic() &&
           m.policy.deterministic() && baseline.deterministic();
}

}  // namespace

bool ac1_existence(const AlignmentModel& model) {
    const DomainBinding& b = first_binding(model);
    require_complete(model, b);
    if (b.goal.points.empty()) return false;
    std::set<StateId> states;
    for (const auto& o : b.goal.points) {
        auto s = preimage(*model.robot_sensor, o, std::set<DomainId>{b.domain});
        states.insert(s.begin(), s.end());
    }
    if (states.empty()) return false;
    for (const auto& o : observe_set(*model.human_sensor, states))
        if (!model.human_purpose.support.count(encode(*b.human_encoder, o))) return false;
    return true;
}

Ac2Result ac2_counterfactual(const AlignmentModel& model, const InterventionSpec& spec, Rng& rng) {
    const DomainBinding& b = first_binding(model);
    require_complete(model, b);
    const Domain& dom = model.domains.at(b.domain);
    const int links = static_cast<int>(spec.chain.size()) + 1;
    if (spec.horizon < 1 || spec.horizon < model.timeout * links)
        throw Error(ErrorKind::HorizonTooShort, "horizon " + std::to_string(spec.horizon) + " is below timeout x links = " +
                                                     std::to_string(model.timeout * links));
    for (const auto& o : observe_set(*model.robot_sensor, dom.states())) spec.baseline.row(o, kBaselineKey);

    std::vector<const Goal*> chain;
    for (const auto& g : spec.chain) chain.push_back(&g);
    chain.push_back(&spec.do_goal);
    const Regime act{model, b, dom, chain, model.policy, spec.horizon, model.timeout};
    const Regime idle{model, b, dom, {}, spec.baseline, spec.horizon, model.timeout};

    Ac2Result out;
    out.baseline = spec.baseline_name;
    out.deterministic = model_deterministic(model, dom, spec.baseline);
    const double share = 1.0 / static_cast<double>(dom.initial_states().size());
    Tally t_do;
    Tally t_base;
    for (const auto& s0 : dom.initial_states()) {
        enumerate(act, s0, 0, 0, 0, share, false, t_do, spec.enumeration_limit);
        enumerate(idle, s0, 0, 0, 0, share, false, t_base, spec.enumeration_limit);
    }
    out.nodes = t_do.nodes + t_base.nodes;
    if (!t_do.overflow && !t_base.overflow) {
        out.p_do = t_do.y;
        out.p_baseline = t_base.y;
        out.p_do_any = t_do.any;
        out.p_baseline_any = t_base.any;
        if (out.deterministic)
            out.holds = out.p_do >= 1.0 - 1e-12 && out.p_baseline <= 1e-12;
        else
            out.holds = out.p_do > out.p_baseline;
        return out;
    }

    out.exact = false;
    const std::vector<StateId> starts(dom.initial_states().begin(), dom.initial_states().end());
    int y_do = 0, y_base = 0, any_do = 0, any_base = 0;
    for (int i = 0; i < spec.samples; ++i) {
        const StateId& s0 = starts[uniform_int(rng, 0, static_cast<int>(starts.size()) - 1)];
        auto [y1, a1] = sample_run(act, s0, rng);
        auto [y2, a2] = sample_run(idle, s0, rng);
        y_do += y1;
        any_do += a1;
        y_base += y2;
        any_base += a2;
    }
    const double n = spec.samples;
    out.p_do = y_do / n;
    out.p_baseline = y_base / n;
    out.p_do_any = any_do / n;
    out.p_baseline_any = any_base / n;
    out.se_do = std::sqrt(out.p_do * (1.0 - out.p_do) / n);
    out.se_baseline = std::sqrt(out.p_baseline * (1.0 - out.p_baseline) / n);
    out.holds = out.p_do - out.p_baseline > 3.0 * std::sqrt(out.se_do * out.se_do + out.se_baseline * out.se_baseline);
    return out;
}

Ac3Result ac3_minimality(const AlignmentModel& model, const History& executed, const CostTable& costs) {
    const DomainBinding& b = first_binding(model);
    require_complete(model, b);
    const Domain& dom = model.domains.at(b.domain);
    const auto states = executed.ids(EntryKind::State);
    if (states.empty()) throw Error(ErrorKind::TraceDidNotSucceed, "empty trace");
    std::set<StateId> targets;
    for (const auto& o : b.goal.points) {
        auto s = preimage(*model.robot_sensor, o, std::set<DomainId>{b.domain});
        targets.insert(s.begin(), s.end());
    }
    if (!targets.count(states.back())) throw Error(ErrorKind::TraceDidNotSucceed, "trace ends in " + states.back() + ", outside the goal");

    Ac3Result out;
    auto cost_of = [&](const ActionId& a) {
        if (costs.empty()) return 1.0;
        auto it = costs.find(a);
        if (it == costs.end()) throw Error(ErrorKind::IncompleteModel, "cost table has no entry for " + a);
        return it->second;
    };
    for (const auto& [a, c] : costs) out.integer_costs = out.integer_costs && c == std::floor(c);
    for (const auto& a : executed.ids(EntryKind::Action)) out.executed_cost += cost_of(a);
    const auto value = min_cost_to_reach(dom, targets, {}, [&](const StateId&, const ActionId& a) { return cost_of(a); });
    auto it = value.find(states.front());
    if (it == value.end()) throw Error(ErrorKind::TraceDidNotSucceed, "goal unreachable from " + states.front());
    out.minimal_cost = it->second;
    if (out.integer_costs && dom.deterministic())
        out.holds = std::llround(out.executed_cost) == std::llround(out.minimal_cost);
    else
        out.holds = std::abs(out.executed_cost - out.minimal_cost) <= 1e-9;
    return out;
}

InterventionSpec default_intervention(const AlignmentModel& model, const std::string& baseline, bool with_chain) {
    const DomainBinding& b = first_binding(model);
    require_complete(model, b);
    const Domain& dom = model.domains.at(b.domain);
    InterventionSpec spec;
    spec.do_goal = b.goal;
    if (with_chain) spec.chain = b.subgoals;
    spec.baseline_name = baseline;
    if (baseline == "idle") {
        if (!model.idle_action) throw Error(ErrorKind::IncompleteModel, "idle baseline needs an idle action");
        spec.baseline = idle_policy(dom, *model.robot_sensor, *model.idle_action);
    } else if (baseline == "random") {
        spec.baseline = uniform_policy(dom, *model.robot_sensor);
    } else {
        throw Error(ErrorKind::ValidationError, "unknown baseline " + baseline);
    }
    spec.horizon = model.timeout * (static_cast<int>(spec.chain.size()) + 1);
    return spec;
}

CausalVerdict causal_verdict(const AlignmentModel& model, const InterventionSpec& spec, Rng& rng, const CostTable& costs) {
    CausalVerdict v;
    v.ac1 = ac1_existence(model);
    v.ac2 = ac2_counterfactual(model, spec, rng);
    const DomainBinding& b = first_binding(model);
    const Domain& dom = model.domains.at(b.domain);
    try {
        const auto run = execute_chain(spec.chain, spec.do_goal, model.policy, dom, *model.robot_sensor,
                                       *dom.initial_states().begin(), model.timeout, rng);
        v.ac3 = ac3_minimality(model, run.trace, costs);
    } catch (const Error& e) {
        if (e.kind() != ErrorKind::SubgoalTimeout && e.kind() != ErrorKind::TraceDidNotSucceed) throw;
        v.notes.push_back(e.what());
        v.ac3.holds = false;
    }
    v.overall = v.ac1 && v.ac2.holds && v.ac3.holds;
    return v;
}

}  // namespace purpose
