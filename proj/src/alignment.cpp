#include "purpose/alignment.hpp"

#include <algorithm>
#include <sstream>

namespace purpose {

std::string_view to_string(CaseKind kind) {
    switch (kind) {
        case CaseKind::Extrinsic: return "extrinsic";
        case CaseKind::VariableUtilityThreshold: return "vut";
        case CaseKind::VariableUtilityMax: return "vumax";
        case CaseKind::Intrinsic: return "intrinsic";
        case CaseKind::Instrumental: return "instrumental";
        case CaseKind::InstrumentalProscriptive: return "proscriptive";
        case CaseKind::MultiDomainAll: return "multidomain-all";
        case CaseKind::MultiDomainAny: return "multidomain-any";
    }
    return "extrinsic";
}

CaseKind parse_case(const std::string& name) {
    for (CaseKind k : kAllCases)
        if (to_string(k) == name) return k;
    throw Error(ErrorKind::ValidationError, "unknown alignment case " + name);
}

std::string_view to_string(CheckMode mode) { return mode == CheckMode::Semantic ? "semantic" : "operational"; }

CheckMode parse_mode(const std::string& name) {
    if (name == "semantic") return CheckMode::Semantic;
    if (name == "operational") return CheckMode::Operational;
    throw Error(ErrorKind::ValidationError, "unknown check mode " + name);
}

std::optional<int> AlignmentVerdict::first_failing() const {
    std::optional<int> first;
    for (const auto& c : conditions)
        if (!c.holds && (!first || c.number < *first)) first = c.number;
    return first;
}

namespace {

constexpr double kMassTolerance = 1e-12;

const SensorModel& robot_sensor(const AlignmentModel& m) {
    if (!m.robot_sensor) throw Error(ErrorKind::IncompleteModel, "model has no robot sensor");
    return *m.robot_sensor;
}

const SensorModel& human_sensor(const AlignmentModel& m) {
    if (!m.human_sensor) throw Error(ErrorKind::IncompleteModel, "model has no human sensor");
    return *m.human_sensor;
}

const Domain& domain_of(const AlignmentModel& m, const DomainId& d) {
    auto it = m.domains.find(d);
    if (it == m.domains.end()) throw Error(ErrorKind::IncompleteModel, "model has no domain " + d);
    return it->second;
}

const ObservationEncoder& need(const std::optional<ObservationEncoder>& enc, const std::string& what, const DomainId& d) {
    if (!enc) throw Error(ErrorKind::IncompleteModel, "binding for " + d + " has no " + what);
    return *enc;
}

/// Robot-sensor preimage of observations inside the binding's domain.
std::set<StateId> states_of(const AlignmentModel& m, const DomainBinding& b, const std::set<ObservationId>& obs) {
    const std::set<DomainId> filter{b.domain};
    std::set<StateId> out;
    for (const auto& o : obs) {
        auto s = preimage(robot_sensor(m), o, filter);
        out.insert(s.begin(), s.end());
    }
    return out;
}

bool reaches(const Domain& dom, const std::set<StateId>& targets, const StateId& from, int timeout) {
    if (targets.empty()) return false;
    return !set_intersection(reachable(dom, {from}, timeout), targets).empty();
}

double max_human_utility(const Purpose& h) {
    double best = 0.0;
    bool first = true;
    for (const auto& e : h.support) {
        const double u = h.utility(e);
        if (first || u > best) best = u;
        first = false;
    }
    return best;
}

/// Final clause on a human encoding point: membership, threshold or maximization.
bool point_clause(const AlignmentModel& m, const AlignmentCase& c, const PointId& e) {
    const Purpose& h = m.human_purpose;
    if (!h.support.count(e)) return false;
    if (c.kind == CaseKind::VariableUtilityThreshold) return h.utility(e) > c.threshold;
    if (c.kind == CaseKind::VariableUtilityMax) return h.utility(e) == max_human_utility(h);
    return true;
}

void require_intention_point(const AlignmentModel& m) {
    if (!m.robot_purpose.support.count(m.intention_point))
        throw Error(ErrorKind::PointOutsideSupport,
                    "intention point " + m.intention_point + " is not in the support of " + m.robot_purpose.id);
}

/// Intention tuple failures for one binding; adds the vacuous-pursuit note once.
std::set<std::string> intention_failures(const AlignmentModel& m, const DomainBinding& b, std::vector<std::string>& notes) {
    std::set<std::string> out;
    if (!m.robot_purpose.intention_flag) {
        out.insert("intention flag false");
        const std::string note = "no robot intention formed";
        if (std::find(notes.begin(), notes.end(), note) == notes.end()) notes.push_back(note);
    }
    if (!m.robot_domains.count(b.domain)) out.insert("domain " + b.domain + " not intended by robot");
    return out;
}

void external_fulfilment_note(const AlignmentModel& m, const DomainBinding& b, std::vector<std::string>& notes) {
    const Domain& dom = domain_of(m, b.domain);
    std::set<StateId> idle = dom.initial_states();
    if (m.idle_action && dom.has_action(*m.idle_action)) {
        std::set<StateId> frontier = idle;
        for (int t = 0; t < m.timeout; ++t) {
            std::set<StateId> next;
            for (const auto& s : frontier)
                for (const auto& n : dom.successors(s, *m.idle_action))
                    if (idle.insert(n).second) next.insert(n);
            frontier = std::move(next);
        }
    }
    auto hit = set_intersection(idle, b.true_states);
    if (!hit.empty())
        notes.push_back("warning: idle policy reaches S* in domain " + b.domain + " (" + join(hit) + ")");
}

struct Spread {
    std::set<ObservationId> achieved;
    std::set<StateId> failed_starts;
};

/// Every nonzero-probability branch of pursuing `goal` from each start.
Spread spread(const Domain& dom, const SensorModel& sensor, const ActionPolicy& policy, const Goal& goal,
              const std::set<StateId>& starts, int timeout) {
    Spread out;
    for (const auto& s0 : starts) {
        std::set<StateId> frontier{s0};
        for (int t = 0; t <= timeout && !frontier.empty(); ++t) {
            std::set<StateId> next;
            for (const auto& s : frontier)
                for (const auto& o : sensor.row(s).support()) {
                    if (goal.points.count(o)) {
                        out.achieved.insert(o);
                    } else if (t == timeout) {
                        out.failed_starts.insert(s0);
                    } else {
                        for (const auto& a : support_of(policy.row(o, goal.id)))
                            for (const auto& n : dom.successors(s, a)) next.insert(n);
                    }
                }
            frontier = std::move(next);
        }
    }
    return out;
}

using Mass = std::map<std::pair<StateId, ObservationId>, double>;

/// Probability of stopping in (state, achieved observation) within timeout.
Mass spread_mass(const Domain& dom, const SensorModel& sensor, const ActionPolicy& policy, const Goal& goal,
                 const std::map<StateId, double>& start, int timeout) {
    Mass done;
    std::map<StateId, double> frontier = start;
    for (int t = 0; t <= timeout && !frontier.empty(); ++t) {
        std::map<StateId, double> next;
        for (const auto& [s, w] : frontier)
            for (const auto& [o, po] : sensor.row(s).distribution()) {
                if (po <= 0.0) continue;
                if (goal.points.count(o)) {
                    done[{s, o}] += w * po;
                } else if (t < timeout) {
                    for (const auto& [a, pa] : policy.row(o, goal.id))
                        for (const auto& [n, pn] : dom.row(s, a).distribution())
                            if (pa > 0.0 && pn > 0.0) next[n] += w * po * pa * pn;
                }
            }
        frontier = std::move(next);
    }
    return done;
}

std::map<StateId, double> uniform_over(const std::set<StateId>& states) {
    std::map<StateId, double> out;
    for (const auto& s : states) out[s] = 1.0 / static_cast<double>(states.size());
    return out;
}

void apply_skip(std::vector<ConditionResult>& results, const CheckerOptions& options) {
    if (options.skip_condition == 0) return;
    for (auto& r : results)
        if (r.number == options.skip_condition) {
            r.holds = true;
            r.witnesses.clear();
        }
}

ConditionResult make_result(int number, std::string label, const DomainId& d) {
    ConditionResult r;
    r.number = number;
    r.label = std::move(label);
    r.domain = d;
    return r;
}

void finish(ConditionResult& r) { r.holds = r.witnesses.empty(); }

std::vector<const Goal*> links_of(const DomainBinding& b) {
    std::vector<const Goal*> links;
    for (const auto& g : b.subgoals) links.push_back(&g);
    links.push_back(&b.goal);
    return links;
}

// ---------------------------------------------------------------- semantic

std::vector<ConditionResult> semantic_direct(const AlignmentModel& m, const AlignmentCase& c, const DomainBinding& b,
                                             std::vector<std::string>& notes) {
    const Domain& dom = domain_of(m, b.domain);
    const auto& robot_enc = need(b.robot_encoder, "robot encoder", b.domain);
    const auto& human_enc = need(b.human_encoder, "human encoder", b.domain);
    std::vector<ConditionResult> out;

    auto c1 = make_result(1, "robot goal within the grounding of the intention point", b.domain);
    c1.witnesses = intention_failures(m, b, notes);
    if (b.goal.points.empty()) c1.witnesses.insert("empty goal");
    for (const auto& o : set_difference(b.goal.points, decode(robot_enc, m.intention_point))) c1.witnesses.insert(o);
    finish(c1);

    const auto outcome = states_of(m, b, b.goal.points);
    auto c2 = make_result(2, "robot state goal reachable and within S*", b.domain);
    for (const auto& s0 : dom.initial_states())
        if (!reaches(dom, outcome, s0, m.timeout)) c2.witnesses.insert("unreachable from " + s0);
    for (const auto& s : set_difference(outcome, b.true_states)) c2.witnesses.insert(s);
    finish(c2);

    auto c3 = make_result(3, "human percepts of the state goal within G*", b.domain);
    for (const auto& s : outcome)
        if (!is_subset(human_sensor(m).row(s).support(), b.true_observations)) c3.witnesses.insert(s);
    finish(c3);

    auto c4 = make_result(4, "human encodings within P*", b.domain);
    for (const auto& o : observe_set(human_sensor(m), outcome)) {
        const PointId e = encode(human_enc, o);
        if (!point_clause(m, c, e)) c4.witnesses.insert(e);
    }
    finish(c4);

    out = {c1, c2, c3, c4};
    return out;
}

std::vector<ConditionResult> semantic_chain(const AlignmentModel& m, const AlignmentCase& c, const DomainBinding& b,
                                            bool proscriptive, std::vector<std::string>& notes) {
    const Domain& dom = domain_of(m, b.domain);
    const auto& robot_enc = need(b.robot_encoder, "robot encoder", b.domain);
    const auto& human_enc = need(b.human_encoder, "human encoder", b.domain);
    const auto links = links_of(b);

    auto c1 = make_result(1, "robot goal within the grounding of the intention point", b.domain);
    c1.witnesses = intention_failures(m, b, notes);
    if (b.goal.points.empty()) c1.witnesses.insert("empty goal");
    for (const auto& o : set_difference(b.goal.points, decode(robot_enc, m.intention_point))) c1.witnesses.insert(o);
    finish(c1);

    auto c2 = make_result(2, "enabledness chain from the initial states to the goal", b.domain);
    std::vector<std::set<StateId>> images;
    std::set<StateId> from = dom.initial_states();
    for (std::size_t j = 0; j < links.size(); ++j) {
        auto image = states_of(m, b, links[j]->points);
        for (const auto& s : from)
            if (!reaches(dom, image, s, m.timeout)) c2.witnesses.insert("link " + std::to_string(j + 1) + " from " + s);
        images.push_back(image);
        from = std::move(image);
    }
    finish(c2);

    const auto& outcome = images.back();
    auto c3 = make_result(3, "goal state image within S*", b.domain);
    for (const auto& s : set_difference(outcome, b.true_states)) c3.witnesses.insert(s);
    auto c4 = make_result(4, "human percepts of the goal states within G*", b.domain);
    for (const auto& s : outcome)
        if (!is_subset(human_sensor(m).row(s).support(), b.true_observations)) c4.witnesses.insert(s);
    auto c5 = make_result(5, "human encodings within P*", b.domain);
    for (const auto& o : observe_set(human_sensor(m), outcome)) {
        const PointId e = encode(human_enc, o);
        if (!point_clause(m, c, e)) c5.witnesses.insert(e);
    }

    if (proscriptive) {
        if (!m.human_forbidden) throw Error(ErrorKind::IncompleteModel, "proscriptive case without a forbidden human purpose");
        const auto& forbidden_enc = need(b.human_forbidden_encoder, "forbidden-purpose human encoder", b.domain);
        for (std::size_t j = 0; j < images.size(); ++j) {
            const std::string tag = std::to_string(j + 1) + ":";
            for (const auto& s : set_intersection(images[j], b.forbidden_states)) c3.witnesses.insert(tag + s);
            const auto percepts = observe_set(human_sensor(m), images[j]);
            for (const auto& o : set_intersection(percepts, b.forbidden_observations)) c4.witnesses.insert(tag + o);
            for (const auto& o : percepts) {
                const PointId e = encode(forbidden_enc, o);
                if (m.human_forbidden->support.count(e)) c5.witnesses.insert(tag + e);
            }
        }
    }
    finish(c3);
    finish(c4);
    finish(c5);
    return {c1, c2, c3, c4, c5};
}

std::vector<ConditionResult> semantic_intrinsic(const AlignmentModel& m, const DomainBinding& b, std::vector<std::string>& notes) {
    const Domain& dom = domain_of(m, b.domain);
    const auto& robot_enc = need(b.robot_encoder, "robot encoder", b.domain);
    const auto& human_enc = need(b.human_encoder, "human encoder", b.domain);
    std::vector<ConditionResult> out;
    auto c1 = make_result(1, "robot intention formed in the domain", b.domain);
    c1.witnesses = intention_failures(m, b, notes);
    finish(c1);
    out.push_back(c1);

    for (const auto& ph : m.human_purpose.support) {
        const auto wanted = decode(human_enc, ph);
        auto r = make_result(3, "extrinsic goal " + ph + " producible", b.domain);
        std::optional<PointId> found;
        for (const auto& pc : m.robot_purpose.support) {
            const auto g = decode(robot_enc, pc);
            if (g.empty()) continue;
            const auto image = states_of(m, b, g);
            bool ok = is_subset(image, b.true_states) && is_subset(observe_set(human_sensor(m), image), wanted);
            for (const auto& s0 : dom.initial_states()) ok = ok && reaches(dom, image, s0, m.timeout);
            if (ok) {
                found = pc;
                break;
            }
        }
        r.holds = found.has_value();
        if (found)
            r.witnesses.insert(*found);
        out.push_back(r);
    }
    return out;
}

// ------------------------------------------------------------- operational

struct OperationalRun {
    std::vector<ConditionResult> results;
    std::vector<OutcomeRecord> outcomes;
    double probability = 1.0;
};

/// Clause check on the realized outcome of the final link.
void final_outcome_clauses(const AlignmentModel& m, const AlignmentCase& c, const DomainBinding& b,
                           const std::set<ObservationId>& achieved, int link, ConditionResult& point_res,
                           ConditionResult& truth_res, ConditionResult& percept_res, ConditionResult& encoding_res,
                           std::vector<OutcomeRecord>& outcomes) {
    const auto& robot_enc = need(b.robot_encoder, "robot encoder", b.domain);
    const auto& human_enc = need(b.human_encoder, "human encoder", b.domain);
    const std::set<DomainId> filter{b.domain};
    for (const auto& g : achieved) {
        if (encode(robot_enc, g) != m.intention_point) point_res.witnesses.insert(g);
        for (const auto& s : preimage(robot_sensor(m), g, filter)) {
            OutcomeRecord rec{b.domain, link, g, s, human_sensor(m).row(s).support(), {}, true};
            if (!b.true_states.count(s)) {
                truth_res.witnesses.insert(s);
                rec.satisfied = false;
            }
            if (!is_subset(rec.human_observations, b.true_observations)) {
                percept_res.witnesses.insert(s);
                rec.satisfied = false;
            }
            for (const auto& o : rec.human_observations) {
                const PointId e = encode(human_enc, o);
                rec.encodings.insert(e);
                if (!point_clause(m, c, e)) {
                    encoding_res.witnesses.insert(e);
                    rec.satisfied = false;
                }
            }
            rec.satisfied = rec.satisfied && encode(robot_enc, g) == m.intention_point;
            outcomes.push_back(std::move(rec));
        }
    }
}

/// Probability mass of good final outcomes.
double good_final_mass(const AlignmentModel& m, const AlignmentCase& c, const DomainBinding& b, const Mass& mass,
                       const PointId* required_point, const std::set<ObservationId>* wanted) {
    const auto& robot_enc = need(b.robot_encoder, "robot encoder", b.domain);
    const auto& human_enc = need(b.human_encoder, "human encoder", b.domain);
    double good = 0.0;
    for (const auto& [key, w] : mass) {
        const auto& [s, g] = key;
        if (required_point && encode(robot_enc, g) != *required_point) continue;
        if (!b.true_states.count(s)) continue;
        double clean = 0.0;
        for (const auto& [o, p] : human_sensor(m).row(s).distribution()) {
            if (p <= 0.0) continue;
            if (wanted) {
                if (wanted->count(o)) clean += p;
            } else if (b.true_observations.count(o) && point_clause(m, c, encode(human_enc, o))) {
                clean += p;
            }
        }
        good += w * clean;
    }
    return good;
}

OperationalRun operational_direct(const AlignmentModel& m, const AlignmentCase& c, const DomainBinding& b,
                                  std::vector<std::string>& notes, bool probabilistic) {
    const Domain& dom = domain_of(m, b.domain);
    OperationalRun run;
    auto c1 = make_result(1, "achieved observations encode to the intention point", b.domain);
    c1.witnesses = intention_failures(m, b, notes);
    auto c2 = make_result(2, "pursuit succeeds and outcome states lie in S*", b.domain);
    auto c3 = make_result(3, "human percepts of outcomes within G*", b.domain);
    auto c4 = make_result(4, "human encodings of outcomes within P*", b.domain);

    const Spread sp = spread(dom, robot_sensor(m), m.policy, b.goal, dom.initial_states(), m.timeout);
    for (const auto& s0 : sp.failed_starts) c2.witnesses.insert("timeout from " + s0);
    final_outcome_clauses(m, c, b, sp.achieved, 1, c1, c2, c3, c4, run.outcomes);
    if (probabilistic) {
        const Mass mass = spread_mass(dom, robot_sensor(m), m.policy, b.goal, uniform_over(dom.initial_states()), m.timeout);
        run.probability = good_final_mass(m, c, b, mass, &m.intention_point, nullptr);
    }
    for (auto* r : {&c1, &c2, &c3, &c4}) finish(*r);
    run.results = {c1, c2, c3, c4};
    return run;
}

OperationalRun operational_chain(const AlignmentModel& m, const AlignmentCase& c, const DomainBinding& b, bool proscriptive,
                                 std::vector<std::string>& notes, bool probabilistic) {
    const Domain& dom = domain_of(m, b.domain);
    const auto links = links_of(b);
    OperationalRun run;
    auto c1 = make_result(1, "achieved observations encode to the intention point", b.domain);
    c1.witnesses = intention_failures(m, b, notes);
    auto c2 = make_result(2, "every link of the chain succeeds", b.domain);
    auto c3 = make_result(3, "goal outcome states lie in S*", b.domain);
    auto c4 = make_result(4, "human percepts of outcomes within G*", b.domain);
    auto c5 = make_result(5, "human encodings of outcomes within P*", b.domain);
    const ObservationEncoder* forbidden_enc = nullptr;
    if (proscriptive) {
        if (!m.human_forbidden) throw Error(ErrorKind::IncompleteModel, "proscriptive case without a forbidden human purpose");
        forbidden_enc = &need(b.human_forbidden_encoder, "forbidden-purpose human encoder", b.domain);
    }
    auto forbidden_clean = [&](const StateId& s, const std::string& tag, bool record) {
        double clean = b.forbidden_states.count(s) ? 0.0 : 1.0;
        if (record && clean == 0.0) c3.witnesses.insert(tag + s);
        for (const auto& [o, p] : human_sensor(m).row(s).distribution()) {
            if (p <= 0.0) continue;
            bool bad = false;
            if (b.forbidden_observations.count(o)) {
                bad = true;
                if (record) c4.witnesses.insert(tag + o);
            }
            const PointId e = encode(*forbidden_enc, o);
            if (m.human_forbidden->support.count(e)) {
                bad = true;
                if (record) c5.witnesses.insert(tag + e);
            }
            if (bad) clean -= p;
        }
        return std::max(0.0, clean);
    };

    const std::set<DomainId> filter{b.domain};
    std::set<StateId> from = dom.initial_states();
    std::map<StateId, double> mass_from = uniform_over(from);
    for (std::size_t j = 0; j < links.size(); ++j) {
        const bool last = j + 1 == links.size();
        const std::string tag = std::to_string(j + 1) + ":";
        const Spread sp = spread(dom, robot_sensor(m), m.policy, *links[j], from, m.timeout);
        for (const auto& s0 : sp.failed_starts) c2.witnesses.insert("link " + std::to_string(j + 1) + " timeout from " + s0);
        std::set<StateId> reached;
        for (const auto& g : sp.achieved) {
            auto s = preimage(robot_sensor(m), g, filter);
            reached.insert(s.begin(), s.end());
        }
        if (proscriptive)
            for (const auto& s : reached) forbidden_clean(s, tag, true);
        Mass mass;
        if (probabilistic) mass = spread_mass(dom, robot_sensor(m), m.policy, *links[j], mass_from, m.timeout);
        if (last) {
            final_outcome_clauses(m, c, b, sp.achieved, static_cast<int>(j + 1), c1, c3, c4, c5, run.outcomes);
            if (probabilistic) {
                Mass weighted = mass;
                if (proscriptive)
                    for (auto& [key, w] : weighted) w *= forbidden_clean(key.first, tag, false);
                run.probability = good_final_mass(m, c, b, weighted, &m.intention_point, nullptr);
            }
        } else if (probabilistic) {
            mass_from.clear();
            for (const auto& [key, w] : mass) mass_from[key.first] += w * (proscriptive ? forbidden_clean(key.first, tag, false) : 1.0);
        }
        from = std::move(reached);
        if (from.empty() && !last) {
            c2.witnesses.insert("link " + std::to_string(j + 1) + " never achieved");
            run.probability = probabilistic ? 0.0 : run.probability;
            break;
        }
    }
    for (auto* r : {&c1, &c2, &c3, &c4, &c5}) finish(*r);
    run.results = {c1, c2, c3, c4, c5};
    return run;
}

OperationalRun operational_intrinsic(const AlignmentModel& m, const AlignmentCase& c, const DomainBinding& b,
                                     std::vector<std::string>& notes, bool probabilistic) {
    const Domain& dom = domain_of(m, b.domain);
    const auto& robot_enc = need(b.robot_encoder, "robot encoder", b.domain);
    const auto& human_enc = need(b.human_encoder, "human encoder", b.domain);
    const std::set<DomainId> filter{b.domain};
    OperationalRun run;
    auto c1 = make_result(1, "robot intention formed in the domain", b.domain);
    c1.witnesses = intention_failures(m, b, notes);
    finish(c1);
    run.results.push_back(c1);
    run.probability = 1.0;
    for (const auto& ph : m.human_purpose.support) {
        const auto wanted = decode(human_enc, ph);
        auto r = make_result(3, "extrinsic goal " + ph + " produced zero-shot", b.domain);
        std::optional<PointId> found;
        double best = 0.0;
        for (const auto& pc : m.robot_purpose.support) {
            if (decode(robot_enc, pc).empty()) continue;
            const Goal g = ground_point(m.robot_purpose, pc, robot_enc);
            if (probabilistic) {
                const Mass mass = spread_mass(dom, robot_sensor(m), m.policy, g, uniform_over(dom.initial_states()), m.timeout);
                best = std::max(best, good_final_mass(m, c, b, mass, nullptr, &wanted));
            }
            const Spread sp = spread(dom, robot_sensor(m), m.policy, g, dom.initial_states(), m.timeout);
            if (!sp.failed_starts.empty() || found) continue;
            bool ok = true;
            for (const auto& o : sp.achieved)
                for (const auto& s : preimage(robot_sensor(m), o, filter)) {
                    const auto percepts = human_sensor(m).row(s).support();
                    const bool good = b.true_states.count(s) && is_subset(percepts, wanted);
                    run.outcomes.push_back({b.domain, 1, o, s, percepts, {}, good});
                    ok = ok && good;
                }
            if (ok) found = pc;
        }
        r.holds = found.has_value();
        if (found) r.witnesses.insert(*found);
        run.results.push_back(r);
        run.probability = std::min(run.probability, probabilistic ? best : 1.0);
    }
    return run;
}

const DomainBinding& single_binding(const AlignmentModel& m) {
    if (m.bindings.size() != 1)
        throw Error(ErrorKind::IncompleteModel, "case needs exactly one domain binding, model has " + std::to_string(m.bindings.size()));
    return m.bindings.front();
}

bool all_hold(const std::vector<ConditionResult>& rs) {
    return std::all_of(rs.begin(), rs.end(), [](const ConditionResult& r) { return r.holds; });
}

bool is_multi(CaseKind k) { return k == CaseKind::MultiDomainAll || k == CaseKind::MultiDomainAny; }

std::vector<const DomainBinding*> bindings_for(const AlignmentModel& m, const AlignmentCase& c) {
    std::vector<const DomainBinding*> out;
    if (is_multi(c.kind)) {
        if (m.bindings.empty()) throw Error(ErrorKind::IncompleteModel, "multi-domain case without domain bindings");
        for (const auto& b : m.bindings) out.push_back(&b);
    } else {
        out.push_back(&single_binding(m));
    }
    return out;
}

/// Aggregates per-binding results: conjunction, or disjunction across domains for MultiDomainAny.
bool aggregate(const AlignmentCase& c, const std::vector<std::vector<ConditionResult>>& per_binding) {
    if (c.kind == CaseKind::MultiDomainAny)
        return std::any_of(per_binding.begin(), per_binding.end(), all_hold);
    return std::all_of(per_binding.begin(), per_binding.end(), all_hold);
}

}  // namespace

AlignmentVerdict check_conditions(const AlignmentModel& model, const AlignmentCase& acase, const CheckerOptions& options) {
    if (acase.kind != CaseKind::Intrinsic) require_intention_point(model);
    AlignmentVerdict v;
    v.mode = CheckMode::Semantic;
    v.acase = acase;
    std::vector<std::vector<ConditionResult>> per_binding;
    for (const DomainBinding* b : bindings_for(model, acase)) {
        std::vector<ConditionResult> rs;
        switch (acase.kind) {
            case CaseKind::Intrinsic: rs = semantic_intrinsic(model, *b, v.notes); break;
            case CaseKind::Instrumental: rs = semantic_chain(model, acase, *b, false, v.notes); break;
            case CaseKind::InstrumentalProscriptive: rs = semantic_chain(model, acase, *b, true, v.notes); break;
            default: rs = semantic_direct(model, acase, *b, v.notes); break;
        }
        apply_skip(rs, options);
        external_fulfilment_note(model, *b, v.notes);
        per_binding.push_back(rs);
        v.conditions.insert(v.conditions.end(), rs.begin(), rs.end());
    }
    v.aligned = aggregate(acase, per_binding);
    return v;
}

AlignmentVerdict check_definition(const AlignmentModel& model, const AlignmentCase& acase, Rng& rng,
                                  const OperationalOptions& options) {
    if (acase.kind != CaseKind::Intrinsic) require_intention_point(model);
    AlignmentVerdict v;
    v.mode = CheckMode::Operational;
    v.acase = acase;
    const bool probabilistic = options.delta.has_value();
    std::vector<std::vector<ConditionResult>> per_binding;
    std::vector<double> probabilities;
    for (const DomainBinding* b : bindings_for(model, acase)) {
        OperationalRun run;
        switch (acase.kind) {
            case CaseKind::Intrinsic: run = operational_intrinsic(model, acase, *b, v.notes, probabilistic); break;
            case CaseKind::Instrumental: run = operational_chain(model, acase, *b, false, v.notes, probabilistic); break;
            case CaseKind::InstrumentalProscriptive:
                run = operational_chain(model, acase, *b, true, v.notes, probabilistic);
                break;
            default: run = operational_direct(model, acase, *b, v.notes, probabilistic); break;
        }
        external_fulfilment_note(model, *b, v.notes);
        per_binding.push_back(run.results);
        probabilities.push_back(run.probability);
        v.conditions.insert(v.conditions.end(), run.results.begin(), run.results.end());
        v.outcomes.insert(v.outcomes.end(), run.outcomes.begin(), run.outcomes.end());
    }
    if (!probabilistic) {
        v.aligned = aggregate(acase, per_binding);
    } else {
        // Intention clauses stay hard requirements; the rest is judged by probability.
        std::vector<bool> intention_ok;
        for (const DomainBinding* b : bindings_for(model, acase))
            intention_ok.push_back(model.robot_purpose.intention_flag && model.robot_domains.count(b->domain) > 0);
        std::vector<double> effective;
        for (std::size_t i = 0; i < probabilities.size(); ++i) effective.push_back(intention_ok[i] ? probabilities[i] : 0.0);
        const double p = acase.kind == CaseKind::MultiDomainAny ? *std::max_element(effective.begin(), effective.end())
                                                                : *std::min_element(effective.begin(), effective.end());
        v.success_probability = p;
        v.aligned = p >= 1.0 - *options.delta - kMassTolerance;
    }

    // One sampled witness trace from the first binding's first initial state.
    const DomainBinding& b = model.bindings.front();
    const Domain& dom = domain_of(model, b.domain);
    if (acase.kind != CaseKind::Intrinsic && model.robot_sensor) {
        const StateId start = *dom.initial_states().begin();
        std::vector<Goal> chain;
        if (acase.kind == CaseKind::Instrumental || acase.kind == CaseKind::InstrumentalProscriptive) chain = b.subgoals;
        try {
            auto run = execute_chain(chain, b.goal, model.policy, dom, *model.robot_sensor, start, model.timeout, rng);
            for (const auto& e : run.trace.entries()) v.witness_trace.push_back(e.id);
        } catch (const Error& e) {
            if (e.kind() != ErrorKind::SubgoalTimeout) throw;
            v.notes.push_back(std::string("witness trace: ") + e.what());
        }
    }
    return v;
}

std::string describe(const AlignmentModel& m) {
    std::ostringstream out;
    for (const auto& [id, d] : m.domains) {
        out << "domain " << id << " init {" << join(d.initial_states()) << "}\n";
        for (const auto& [key, row] : d.transition()) {
            out << "  " << key.first << " --" << key.second << "--> ";
            for (const auto& [n, p] : row.distribution()) out << n << ":" << p << " ";
            out << "\n";
        }
    }
    auto dump_sensor = [&](const std::optional<SensorModel>& s) {
        if (!s) return;
        out << "sensor " << s->owner() << "\n";
        for (const auto& [st, row] : s->map()) out << "  " << st << " -> {" << join(row.support()) << "}\n";
    };
    dump_sensor(m.robot_sensor);
    dump_sensor(m.human_sensor);
    auto dump_purpose = [&](const Purpose& p) {
        out << "purpose " << p.id << " (" << p.owner << ", " << to_string(p.polarity) << ", flag " << p.intention_flag << ")";
        for (const auto& e : p.support) out << " " << e << "=" << p.utility(e);
        out << "\n";
    };
    dump_purpose(m.human_purpose);
    if (m.human_forbidden) dump_purpose(*m.human_forbidden);
    dump_purpose(m.robot_purpose);
    out << "intention point " << m.intention_point << " domains {" << join(m.robot_domains) << "} timeout " << m.timeout << "\n";
    for (const auto& b : m.bindings) {
        out << "binding " << b.domain << " goal " << b.goal.id << " {" << join(b.goal.points) << "}\n";
        for (const auto& g : b.subgoals) out << "  subgoal " << g.id << " {" << join(g.points) << "}\n";
        auto dump_enc = [&](const std::optional<ObservationEncoder>& e, const char* name) {
            if (!e) return;
            out << "  " << name;
            for (const auto& [o, p] : e->table()) out << " " << o << "->" << p;
            out << "\n";
        };
        dump_enc(b.robot_encoder, "robot encoder");
        dump_enc(b.human_encoder, "human encoder");
        dump_enc(b.human_forbidden_encoder, "forbidden encoder");
        out << "  S* {" << join(b.true_states) << "} G* {" << join(b.true_observations) << "}\n";
        if (!b.forbidden_states.empty() || !b.forbidden_observations.empty())
            out << "  Sx* {" << join(b.forbidden_states) << "} Gx* {" << join(b.forbidden_observations) << "}\n";
    }
    for (const auto& [key, row] : m.policy.table()) {
        out << "  pi(" << key.first << ", " << key.second << ") =";
        for (const auto& [a, p] : row) out << " " << a << ":" << p;
        out << "\n";
    }
    return out.str();
}

AuditReport equivalence_audit(const ModelGenerator& generator, const AlignmentCase& acase, int count, std::uint64_t seed,
                              const CheckerOptions& options) {
    AuditReport report;
    report.acase = acase;
    report.count = count;
    for (int i = 0; i < count; ++i) {
        Rng rng(seed + static_cast<std::uint64_t>(i));
        const AlignmentModel model = generator(acase.kind, rng);
        const bool semantic = check_conditions(model, acase, options).aligned;
        const bool operational = check_definition(model, acase, rng).aligned;
        report.aligned += semantic ? 1 : 0;
        if (semantic == operational) {
            ++report.agreements;
        } else {
            report.disagreements.push_back({i, semantic, operational, describe(model)});
        }
    }
    return report;
}

}  // namespace purpose
