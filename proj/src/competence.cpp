#include "purpose/competence.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace purpose {

void PolicyTable::set(const ObservationId& o, const GoalId& g, Distribution row) {
    require_normalized(row, ErrorKind::UnnormalizedDistribution, "policy row (" + o + ", " + g + ")");
    table_[{o, g}] = std::move(row);
}

const Distribution& PolicyTable::row(const ObservationId& o, const GoalId& g) const {
    auto it = table_.find({o, g});
    if (it == table_.end()) throw Error(ErrorKind::IncompleteModel, "policy has no row for (" + o + ", " + g + ")");
    return it->second;
}

std::string PolicyTable::draw(const ObservationId& o, const GoalId& g, Rng& rng) const {
    const Distribution& r = row(o, g);
    if (r.size() == 1) return r.begin()->first;
    return sample(r, rng);
}

std::string PolicyTable::greedy(const ObservationId& o, const GoalId& g) const {
    const Distribution& r = row(o, g);
    auto best = r.begin();
    for (auto it = r.begin(); it != r.end(); ++it)
        if (it->second > best->second) best = it;
    return best->first;
}

bool PolicyTable::deterministic() const {
    for (const auto& [key, row] : table_)
        if (support_of(row).size() > 1) return false;
    return true;
}

void PolicyTable::merge(const PolicyTable& other) {
    for (const auto& [key, row] : other.table_) table_[key] = row;
}

int pseudo_reward(const ObservationId& observation, const Goal& goal) { return goal.points.count(observation) ? 1 : 0; }

namespace {

std::set<ObservationId> domain_observations(const Domain& domain, const SensorModel& sensor) {
    return observe_set(sensor, domain.states());
}

ActionId first_max(const std::map<ActionId, double>& q) {
    auto best = q.begin();
    for (auto it = q.begin(); it != q.end(); ++it)
        if (it->second > best->second) best = it;
    return best->first;
}

double max_value(const std::map<ActionId, double>& q) {
    double m = -std::numeric_limits<double>::infinity();
    for (const auto& [a, v] : q) m = std::max(m, v);
    return m;
}

}  // namespace

ActionPolicy learn_policy(const GoalConditionedTask& task, const Domain& domain, const SensorModel& sensor,
                          const LearnerConfig& cfg) {
    if (task.timeout < 1) throw Error(ErrorKind::ValidationError, "task timeout must be >= 1");
    if (!(task.gamma > 0.0 && task.gamma <= 1.0)) throw Error(ErrorKind::ValidationError, "gamma must lie in (0,1]");
    const auto targets = state_goal(task.goal, sensor).states;
    const auto reach = reachable(domain, domain.initial_states(), task.timeout);
    if (set_intersection(reach, targets).empty())
        throw Error(ErrorKind::Unsolvable, "goal " + task.goal.id + " is not reachable within the timeout");

    Rng rng(cfg.seed);
    const auto observations = domain_observations(domain, sensor);
    std::map<ObservationId, std::map<ActionId, double>> q;
    for (const auto& o : observations)
        for (const auto& a : domain.actions()) q[o][a] = 0.0;
    const std::vector<StateId> starts(domain.states().begin(), domain.states().end());
    const std::vector<ActionId> actions(domain.actions().begin(), domain.actions().end());

    int steps = 0;
    int idle_draws = 0;
    while (steps < cfg.budget_steps && idle_draws < 10000) {
        StateId s = starts[uniform_int(rng, 0, static_cast<int>(starts.size()) - 1)];
        ObservationId o = observe(sensor, s, rng);
        if (pseudo_reward(o, task.goal) > task.success_threshold) {
            ++idle_draws;
            continue;
        }
        idle_draws = 0;
        for (int t = 0; t < task.timeout && steps < cfg.budget_steps; ++t) {
            const ActionId a = uniform01(rng) < cfg.epsilon ? actions[uniform_int(rng, 0, static_cast<int>(actions.size()) - 1)]
                                                            : first_max(q[o]);
            const StateId next = step(domain, s, a, rng);
            const ObservationId next_o = observe(sensor, next, rng);
            const int r = pseudo_reward(next_o, task.goal);
            const bool success = r > task.success_threshold;
            const double target = success ? r : task.gamma * max_value(q[next_o]);
            q[o][a] += cfg.alpha * (target - q[o][a]);
            ++steps;
            s = next;
            o = next_o;
            if (success) break;
        }
    }

    ActionPolicy policy;
    for (const auto& o : observations) policy.set(o, task.goal.id, {{first_max(q[o]), 1.0}});
    return policy;
}

bool enabled(const Goal& subgoal, const StateId& state, const Domain& domain, const SensorModel& sensor, int timeout) {
    const auto targets = state_goal(subgoal, sensor).states;
    if (targets.empty()) return false;
    return !set_intersection(reachable(domain, {state}, timeout), targets).empty();
}

std::map<StateId, double> min_cost_to_reach(const Domain& domain, const std::set<StateId>& targets,
                                            const std::set<StateId>& forbidden, const CostFn& cost) {
    auto c = [&](const StateId& s, const ActionId& a) { return cost ? cost(s, a) : 1.0; };
    std::map<StateId, double> value;
    if (domain.deterministic()) {
        std::map<StateId, std::vector<std::pair<StateId, ActionId>>> predecessors;
        for (const auto& [key, row] : domain.transition())
            for (const auto& next : row.support()) predecessors[next].emplace_back(key.first, key.second);
        using Item = std::pair<double, StateId>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
        for (const auto& t : targets)
            if (domain.has_state(t) && !forbidden.count(t)) {
                value[t] = 0.0;
                open.emplace(0.0, t);
            }
        while (!open.empty()) {
            auto [v, s] = open.top();
            open.pop();
            if (v > value[s]) continue;
            for (const auto& [p, a] : predecessors[s]) {
                if (forbidden.count(p) || targets.count(p)) continue;
                const double nv = v + c(p, a);
                auto it = value.find(p);
                if (it == value.end() || nv < it->second) {
                    value[p] = nv;
                    open.emplace(nv, p);
                }
            }
        }
        return value;
    }

    // Almost-sure winning region: actions whose whole support stays inside it and some path reaches a target.
    std::set<StateId> winning;
    for (const auto& s : domain.states())
        if (!forbidden.count(s)) winning.insert(s);
    auto allowed = [&](const StateId& s, const ActionId& a, const std::set<StateId>& region) {
        return is_subset(domain.successors(s, a), region);
    };
    while (true) {
        std::set<StateId> attract;
        for (const auto& t : targets)
            if (winning.count(t)) attract.insert(t);
        bool grew = true;
        while (grew) {
            grew = false;
            for (const auto& s : winning) {
                if (attract.count(s)) continue;
                for (const auto& a : domain.actions()) {
                    if (!allowed(s, a, winning)) continue;
                    const auto succ = domain.successors(s, a);
                    if (std::any_of(succ.begin(), succ.end(), [&](const StateId& n) { return attract.count(n) > 0; })) {
                        attract.insert(s);
                        grew = true;
                        break;
                    }
                }
            }
        }
        if (attract == winning) break;
        winning = std::move(attract);
    }
    for (const auto& s : winning) value[s] = 0.0;
    for (int iter = 0; iter < 100000; ++iter) {
        double change = 0.0;
        for (const auto& s : winning) {
            if (targets.count(s)) continue;
            double best = std::numeric_limits<double>::infinity();
            for (const auto& a : domain.actions()) {
                if (!allowed(s, a, winning)) continue;
                double q = c(s, a);
                for (const auto& [n, p] : domain.row(s, a).distribution()) q += p * value[n];
                best = std::min(best, q);
            }
            change = std::max(change, std::abs(best - value[s]));
            value[s] = best;
        }
        if (change < 1e-13) break;
    }
    return value;
}

ActionPolicy plan_policy(const Goal& goal, const Domain& domain, const SensorModel& sensor, const std::set<StateId>& forbidden) {
    const auto targets = state_goal(goal, sensor).states;
    const auto value = min_cost_to_reach(domain, targets, forbidden);
    const std::set<DomainId> filter{domain.id()};
    ActionPolicy policy;
    for (const auto& o : domain_observations(domain, sensor)) {
        std::set<StateId> live;
        for (const auto& s : preimage(sensor, o, filter))
            if (value.count(s)) live.insert(s);
        ActionId choice = *domain.actions().begin();
        double best = std::numeric_limits<double>::infinity();
        for (const auto& a : domain.actions()) {
            if (live.empty()) break;
            double score = 0.0;
            for (const auto& s : live) {
                double q = 1.0;
                for (const auto& [n, p] : domain.row(s, a).distribution()) {
                    auto it = value.find(n);
                    if (p > 0.0 && it == value.end()) {
                        q = std::numeric_limits<double>::infinity();
                        break;
                    }
                    if (p > 0.0) q += p * it->second;
                }
                score += q;
            }
            if (score < best) {
                best = score;
                choice = a;
            }
        }
        policy.set(o, goal.id, {{choice, 1.0}});
    }
    return policy;
}

PursuitResult pursue(const Goal& goal, const ActionPolicy& policy, const Domain& domain, const SensorModel& sensor,
                     const StateId& start, int timeout, Rng& rng) {
    PursuitResult out;
    StateId s = start;
    out.trace.append(EntryKind::State, s);
    ObservationId o = observe(sensor, s, rng);
    while (true) {
        if (goal.points.count(o)) {
            out.success = true;
            break;
        }
        if (out.steps >= timeout) break;
        const ActionId a = policy.draw(o, goal.id, rng);
        s = step(domain, s, a, rng);
        out.trace.append(EntryKind::Action, a);
        out.trace.append(EntryKind::State, s);
        o = observe(sensor, s, rng);
        ++out.steps;
    }
    out.end_state = s;
    return out;
}

namespace {

void append_pursuit(ChainResult& chain, const PursuitResult& run, int start_step) {
    const auto& entries = run.trace.entries();
    for (std::size_t i = 1; i < entries.size(); ++i) chain.trace.append(entries[i].kind, entries[i].id);
    if (run.steps > 0)
        chain.windows.push_back(Window{start_step, run.steps});
    else
        chain.windows.push_back(std::nullopt);
}

}  // namespace

ChainResult execute_chain(const std::vector<Goal>& chain, const Goal& final, const ActionPolicy& policy, const Domain& domain,
                          const SensorModel& sensor, const StateId& start, int timeout, Rng& rng) {
    ChainResult out;
    out.trace.append(EntryKind::State, start);
    StateId s = start;
    int t = 0;
    std::vector<const Goal*> links;
    for (const auto& g : chain) links.push_back(&g);
    links.push_back(&final);
    for (std::size_t j = 0; j < links.size(); ++j) {
        const PursuitResult run = pursue(*links[j], policy, domain, sensor, s, timeout, rng);
        append_pursuit(out, run, t);
        out.links.push_back(links[j]->id);
        if (!run.success)
            throw Error(ErrorKind::SubgoalTimeout, "link " + std::to_string(j + 1) + " (" + links[j]->id + ") timed out",
                        static_cast<int>(j + 1));
        t += run.steps;
        s = run.end_state;
    }
    out.success = true;
    return out;
}

ChainResult execute_with_selector(const GoalSelectorPolicy& selector, const ActionPolicy& policy, const Goal& final,
                                  const std::map<GoalId, Goal>& goals, const Domain& domain, const SensorModel& sensor,
                                  const StateId& start, int timeout, int max_links, Rng& rng) {
    ChainResult out;
    out.trace.append(EntryKind::State, start);
    StateId s = start;
    int t = 0;
    for (int link = 0; link < max_links; ++link) {
        const ObservationId o = observe(sensor, s, rng);
        if (final.points.count(o)) {
            out.success = true;
            return out;
        }
        const GoalId chosen = selector.draw(o, final.id, rng);
        const Goal* g = &final;
        if (chosen != final.id) {
            auto it = goals.find(chosen);
            if (it == goals.end()) throw Error(ErrorKind::IncompleteModel, "selector names unknown goal " + chosen);
            g = &it->second;
        }
        const PursuitResult run = pursue(*g, policy, domain, sensor, s, timeout, rng);
        append_pursuit(out, run, t);
        out.links.push_back(g->id);
        t += run.steps;
        s = run.end_state;
        if (!run.success) return out;
        if (g == &final) {
            out.success = true;
            return out;
        }
    }
    return out;
}

CompetenceTracker::CompetenceTracker(int window, int lag) : window_(window), lag_(lag) {
    if (window < 1 || lag < 1) throw Error(ErrorKind::ValidationError, "competence window and lag must be >= 1");
}

void CompetenceTracker::record(const GoalId& goal, bool success) { attempts_[goal].push_back(success); }

double CompetenceTracker::competence(const GoalId& goal, int offset) const {
    auto it = attempts_.find(goal);
    if (it == attempts_.end()) return 0.0;
    const auto& a = it->second;
    const int end = static_cast<int>(a.size()) - offset;
    if (end <= 0) return 0.0;
    const int begin = std::max(0, end - window_);
    int wins = 0;
    for (int i = begin; i < end; ++i) wins += a[i] ? 1 : 0;
    return static_cast<double>(wins) / (end - begin);
}

double CompetenceTracker::delta(const GoalId& goal) const { return competence(goal, 0) - competence(goal, lag_); }

double competence_gain(const CompetenceTracker& tracker, const Distribution& goal_distribution) {
    require_normalized(goal_distribution, ErrorKind::UnnormalizedDistribution, "goal distribution");
    double total = 0.0;
    for (const auto& [g, p] : goal_distribution) total += p * tracker.delta(g);
    return total;
}

double information_gain(const BeliefState& belief) {
    require_normalized(belief.prior, ErrorKind::UnnormalizedDistribution, "prior");
    require_normalized(belief.posterior, ErrorKind::UnnormalizedDistribution, "posterior");
    double kl = 0.0;
    for (const auto& [m, q] : belief.posterior) {
        if (q <= 0.0) continue;
        auto it = belief.prior.find(m);
        if (it == belief.prior.end() || it->second <= 0.0)
            throw Error(ErrorKind::SupportViolation, "posterior mass on " + m + " outside the prior support");
        kl += q * std::log(q / it->second);
    }
    return std::max(0.0, kl);
}

double evaluate_extrinsic(const PolicyBundle& bundle, const Distribution& goal_sampler, const std::map<GoalId, Goal>& goals,
                          const Domain& domain, const SensorModel& sensor, int episodes, int timeout, Rng& rng) {
    require_normalized(goal_sampler, ErrorKind::UnnormalizedDistribution, "goal sampler");
    if (episodes < 1) throw Error(ErrorKind::ValidationError, "episodes must be >= 1");
    const std::vector<StateId> starts(domain.initial_states().begin(), domain.initial_states().end());
    double total = 0.0;
    for (int e = 0; e < episodes; ++e) {
        const GoalId gid = sample(goal_sampler, rng);
        auto it = goals.find(gid);
        if (it == goals.end()) throw Error(ErrorKind::IncompleteModel, "sampler names unknown goal " + gid);
        const StateId start = starts[uniform_int(rng, 0, static_cast<int>(starts.size()) - 1)];
        bool success = false;
        if (bundle.selector) {
            success = execute_with_selector(*bundle.selector, bundle.actions, it->second, goals, domain, sensor, start, timeout,
                                            timeout, rng)
                          .success;
        } else {
            success = pursue(it->second, bundle.actions, domain, sensor, start, timeout, rng).success;
        }
        total += success ? 1.0 : 0.0;
    }
    return total / episodes;
}

double expected_encoding_utility(const EncodingSpace& space, const Purpose& purpose, const PointId& active) {
    if (!space.contains(active)) throw Error(ErrorKind::UnknownEncodingPoint, active + " in " + space.id());
    if (!space.dims()) return purpose.support.count(active) ? 1.0 : 0.0;
    const auto& dims = *space.dims();
    auto index_of = [&](std::size_t axis, const std::string& v) {
        const auto& vals = dims[axis].values;
        return static_cast<int>(std::find(vals.begin(), vals.end(), v) - vals.begin());
    };
    int span = 0;
    for (const auto& axis : dims) span += static_cast<int>(axis.values.size()) - 1;
    const auto& here = space.decompose(active);
    int nearest = std::numeric_limits<int>::max();
    for (const auto& p : purpose.support) {
        const auto& there = space.decompose(p);
        int d = 0;
        for (std::size_t k = 0; k < dims.size(); ++k) d += std::abs(index_of(k, here[k]) - index_of(k, there[k]));
        nearest = std::min(nearest, d);
    }
    return span == 0 ? 0.0 : -static_cast<double>(nearest) / span;
}

}  // namespace purpose
